#pragma once

#include <Eigen/Dense>
#include <vector>

#include "prbm/rng.hpp"

namespace prbm {

/// Hyperparameters of a p-RBM: n visible and m hidden units per time step,
/// memory depth p, forgetting rate alpha in [0, 1].
struct ModelShape {
    int n = 1;
    int m = 1;
    int p = 0;
    double alpha = 1.0;

    int lags() const { return p + 1; }
    void validate() const;
    bool operator==(const ModelShape&) const = default;
};

using Block = Eigen::VectorXd;

// Block vector of p+1 per-lag unit vectors, lag 0 = time t. The trailing
// ones block is implicit; it is appended only when the full augmented
// vector is materialized. Entries are {0,1} for data; the mean-field
// prediction path relaxes the lag-0 block to expectations in [0,1].
struct BlockVisible {
    std::vector<Block> blocks;
};

struct BlockHidden {
    std::vector<Block> blocks;
};

// Weight blocks: vh[i][j] is the n x m matrix coupling v_{t-i} with h_{t-j};
// vbias[i] and hbias[j] are the bias blocks of the full block matrix. The
// bottom-right 1x1 zero corner is structural and never stored.
struct BlockWeights {
    std::vector<std::vector<Eigen::MatrixXd>> vh;
    std::vector<Eigen::VectorXd> vbias;
    std::vector<Eigen::VectorXd> hbias;
};

struct Model {
    ModelShape shape;
    BlockWeights weights;

    static Model zeros(const ModelShape& shape);
    // vh blocks i.i.d. N(0, stddev^2), bias blocks zero.
    static Model gaussian_init(const ModelShape& shape, double stddev, RngStream& rng);

    bool all_finite() const;
};

// alpha^|i-j| with the 0^0 = 1 convention, so alpha = 0 keeps same-lag
// connections while severing all cross-time ones.
double forgetting_factor(double alpha, int i, int j);

// (p+2) x (p+2) matrix of alpha^|i-j| factors, last row/column all ones.
Eigen::MatrixXd build_forgetting_matrix(double alpha, int p);

double energy(const Model& model, const BlockVisible& v, const BlockHidden& h);

// Per-lag Bernoulli means: entry u of the lag-j vector is
// logistic( sum_i alpha^|i-j| (vh[i][j])^T v_i + hbias[j] )_u.
std::vector<Eigen::VectorXd> hidden_activation_probs(const Model& model,
                                                     const BlockVisible& v);
std::vector<Eigen::VectorXd> visible_activation_probs(const Model& model,
                                                      const BlockHidden& h);

// -log sum_h exp(-E(v, h)), tractable via per-unit factorization of the
// hidden side. Differs from the negative log-likelihood by log Z.
double free_energy(const Model& model, const BlockVisible& v);

// Full ((p+1)n+1) x ((p+1)m+1) block layout with the zero corner.
// Exists for tests and the block-form energy identity only.
Eigen::MatrixXd assemble_full_matrix(const Model& model);

// Element-level expansion of the forgetting matrix to the same layout.
Eigen::MatrixXd expand_forgetting_mask(double alpha, int p, int n, int m);

// Augmented vectors with the trailing ones entry appended.
Eigen::VectorXd augmented(const BlockVisible& v);
Eigen::VectorXd augmented(const BlockHidden& h);

double logistic(double x);

void check_visible_shape(const ModelShape& shape, const BlockVisible& v);
void check_hidden_shape(const ModelShape& shape, const BlockHidden& h);

}  // namespace prbm
