#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "prbm/model.hpp"
#include "prbm/rng.hpp"

namespace prbm {

struct TrainConfig {
    double eta = 0.001;
    int k = 1;
    int epochs = 1;
    std::uint64_t seed = 0;
    int minibatch = 1;
    bool shuffle = false;

    void validate() const;
};

// Same block structure as the weights it updates.
using GradientBlocks = BlockWeights;

GradientBlocks gradient_zeros(const ModelShape& shape);
void gradient_add(GradientBlocks& acc, const GradientBlocks& g);
void gradient_scale(GradientBlocks& g, double factor);

// CD_k estimate for one example: data-phase term with Rao-Blackwellized
// hidden units minus the k-step reconstruction term, each vh block scaled
// by alpha^|i-j|.
GradientBlocks cd_gradient(const Model& model, const BlockVisible& v0, int k,
                           RngStream& rng);

// W <- W + eta * grad, block-wise; the zero corner is structural.
void apply_update(Model& model, const GradientBlocks& grad, double eta);

struct EpochRecord {
    int epoch = 0;
    double train_proxy = 0.0;              // mean free energy over train windows
    double val_proxy = 0.0;                // NaN when no validation windows
    std::optional<double> train_nll;       // exact, tiny models only
    std::optional<double> val_nll;
    double seconds = 0.0;
};

struct TrainTrace {
    std::vector<EpochRecord> records;
    bool diverged = false;

    // columns: epoch,train_proxy,val_proxy,train_nll,val_nll,seconds
    void write_csv(std::ostream& out) const;
    void write_csv(const std::string& path) const;
};

// Exact NLL is emitted in the trace only when the model is enumerable.
bool nll_tractable(const ModelShape& shape);

// Per-example updates in window order (optionally shuffled per epoch),
// minibatch gradients averaged in a fixed reduction order. Deterministic
// given config.seed.
TrainTrace train(Model& model, const std::vector<BlockVisible>& train_windows,
                 const std::vector<BlockVisible>& val_windows,
                 const TrainConfig& config);

}  // namespace prbm
