#pragma once

#include <vector>

#include "prbm/model.hpp"
#include "prbm/rng.hpp"

namespace prbm {

struct ChainState {
    BlockVisible v;
    BlockHidden h;
    int step = 0;  // completed Gibbs sweeps
};

BlockHidden sample_hidden(const Model& model, const BlockVisible& v, RngStream& rng);
BlockVisible sample_visible(const Model& model, const BlockHidden& h, RngStream& rng);

// Alternates sample_hidden / sample_visible exactly k times starting from v0.
ChainState gibbs_chain(const Model& model, const BlockVisible& v0, int k,
                       RngStream& rng);

// (p+2) stacked copies of the block row [E[h_t|v] ... E[h_{t-p}|v] 1],
// laid out as a (p+2) x ((p+1)m + 1) matrix.
Eigen::MatrixXd hidden_expectation_matrix(const Model& model, const BlockVisible& v);

enum class PredictMode { MeanField, Stochastic };

struct Prediction {
    Eigen::VectorXd probabilities;  // lag-0 visible Bernoulli means
    Eigen::VectorXi direction;      // thresholded at 0.5, ties -> 1 ("up")
};

// Clamped prediction of the lag-0 visible block: past[0] is lag 1, ...,
// past[p-1] is lag p; those blocks stay fixed while hidden/lag-0 updates
// alternate k_pred times. MeanField propagates expectations and is
// deterministic; Stochastic samples every step.
Prediction predict_direction(const Model& model, const std::vector<Block>& past,
                             int k_pred, PredictMode mode, RngStream& rng);

}  // namespace prbm
