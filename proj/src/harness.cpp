#include "prbm/harness.hpp"

#include <cmath>

#include "prbm/baselines.hpp"

namespace prbm {

namespace {

int first_validation_window(int total_windows, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::domain_error("evaluate_split: fraction must be in (0, 1)");
    const int train_count = static_cast<int>(
        std::floor(train_fraction * static_cast<double>(total_windows)));
    if (train_count == 0 || train_count == total_windows)
        throw std::domain_error("evaluate_split: degenerate split");
    return train_count;
}

}  // namespace

int training_row_count(const DirectionDataset& data, int p, double train_fraction) {
    return first_validation_window(window_count(data, p), train_fraction) + p;
}

EvalReport evaluate_split(const DirectionDataset& data, int p, double train_fraction,
                          double notional, const WindowPredictor& predictor) {
    const int total = window_count(data, p);
    const int w0 = first_validation_window(total, train_fraction);

    std::vector<Eigen::VectorXi> actual, predicted;
    std::vector<Eigen::VectorXd> moves;
    for (int w = w0; w < total; ++w) {
        const int target_row = w + p;
        std::vector<Block> past(p);
        for (int lag = 1; lag <= p; ++lag)
            past[lag - 1] =
                data.directions.row(target_row - lag).cast<double>().transpose();
        const Eigen::VectorXd prev_moves =
            data.moves.row(target_row - 1).transpose();
        const Eigen::VectorXi pred = predictor(w, past, prev_moves);

        actual.push_back(to_pm1(data.directions.row(target_row).transpose()));
        predicted.push_back(to_pm1(pred));
        moves.push_back(data.moves.row(target_row).transpose());
    }

    EvalReport report;
    report.loss = misclassification_loss(actual, predicted);
    report.confusion = confusion(actual, predicted);
    report.backtest = backtest(actual, predicted, moves, notional);
    return report;
}

WindowPredictor prbm_predictor(const Model& model, PredictMode mode, int k_pred,
                               std::uint64_t seed) {
    const RngStream master(seed);
    return [&model, mode, k_pred, master](int window_index,
                                          const std::vector<Block>& past,
                                          const Eigen::VectorXd&) {
        RngStream rng = master.split(static_cast<std::uint64_t>(window_index));
        return predict_direction(model, past, k_pred, mode, rng).direction;
    };
}

WindowPredictor rw_predictor(const DirectionDataset& data, int p,
                             double train_fraction) {
    const int rows = training_row_count(data, p, train_fraction);
    const RwModel fitted = fit_rw(data.moves.topRows(rows));
    return [fitted](int, const std::vector<Block>&, const Eigen::VectorXd& prev) {
        return predict_rw(fitted, prev).direction;
    };
}

WindowPredictor var1_predictor(const DirectionDataset& data, int p,
                               double train_fraction) {
    const int rows = training_row_count(data, p, train_fraction);
    const VarModel fitted = fit_var1(data.moves.topRows(rows));
    return [fitted](int, const std::vector<Block>&, const Eigen::VectorXd& prev) {
        return predict_var1(fitted, prev).direction;
    };
}

}  // namespace prbm
