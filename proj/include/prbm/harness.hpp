#pragma once

#include <functional>

#include "prbm/data.hpp"
#include "prbm/eval.hpp"
#include "prbm/sampler.hpp"

namespace prbm {

// Predicts {0,1} directions for one validation window; `past` holds the
// p observed lag-1..p blocks, `prev_moves` the real-valued d_t of the bar
// before the one being predicted (what the VAR forecaster conditions on).
using WindowPredictor = std::function<Eigen::VectorXi(
    int window_index, const std::vector<Block>& past,
    const Eigen::VectorXd& prev_moves)>;

// Scores a predictor over the validation side of the chronological split:
// loss, confusion matrix and backtest against the realized moves.
EvalReport evaluate_split(const DirectionDataset& data, int p, double train_fraction,
                          double notional, const WindowPredictor& predictor);

WindowPredictor prbm_predictor(const Model& model, PredictMode mode, int k_pred,
                               std::uint64_t seed);

// Baselines are fit on the training-side rows of the d_t series.
WindowPredictor rw_predictor(const DirectionDataset& data, int p,
                             double train_fraction);
WindowPredictor var1_predictor(const DirectionDataset& data, int p,
                               double train_fraction);

// Rows covered by training windows: [0, first_validation_window + p).
int training_row_count(const DirectionDataset& data, int p, double train_fraction);

}  // namespace prbm
