#include "prbm/eval.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <stdexcept>

#include "prbm/rng.hpp"

namespace prbm {

namespace {

void check_pair_shapes(const std::vector<Eigen::VectorXi>& actual,
                       const std::vector<Eigen::VectorXi>& predicted) {
    if (actual.size() != predicted.size())
        throw std::invalid_argument("eval: sequence length mismatch");
    for (std::size_t t = 0; t < actual.size(); ++t)
        if (actual[t].size() != predicted[t].size())
            throw std::invalid_argument("eval: vector length mismatch");
}

void check_pm1(const Eigen::VectorXi& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (v(i) != 1 && v(i) != -1)
            throw std::domain_error("eval: entries must be in {-1, +1}");
}

}  // namespace

Eigen::VectorXi to_pm1(const Eigen::VectorXi& zero_one) {
    Eigen::VectorXi out(zero_one.size());
    for (Eigen::Index i = 0; i < zero_one.size(); ++i) {
        if (zero_one(i) != 0 && zero_one(i) != 1)
            throw std::domain_error("to_pm1: entries must be in {0, 1}");
        out(i) = zero_one(i) == 1 ? 1 : -1;
    }
    return out;
}

double misclassification_loss(const std::vector<Eigen::VectorXi>& actual,
                              const std::vector<Eigen::VectorXi>& predicted) {
    check_pair_shapes(actual, predicted);
    if (actual.empty()) throw std::invalid_argument("misclassification_loss: empty");
    const Eigen::Index n = actual.front().size();
    double acc = 0.0;
    for (std::size_t t = 0; t < actual.size(); ++t) {
        check_pm1(actual[t]);
        check_pm1(predicted[t]);
        for (Eigen::Index i = 0; i < n; ++i)
            acc += std::abs(1 - actual[t](i) * predicted[t](i));
    }
    return acc / (2.0 * static_cast<double>(n) * static_cast<double>(actual.size()));
}

ConfusionMatrix confusion(const std::vector<Eigen::VectorXi>& actual,
                          const std::vector<Eigen::VectorXi>& predicted) {
    check_pair_shapes(actual, predicted);
    ConfusionMatrix c;
    for (std::size_t t = 0; t < actual.size(); ++t) {
        check_pm1(actual[t]);
        check_pm1(predicted[t]);
        for (Eigen::Index i = 0; i < actual[t].size(); ++i) {
            const bool real_up = actual[t](i) == 1;
            const bool pred_up = predicted[t](i) == 1;
            if (real_up && pred_up) ++c.up_up;
            else if (real_up) ++c.up_down;
            else if (pred_up) ++c.down_up;
            else ++c.down_down;
        }
    }
    return c;
}

double loss_from_confusion(const ConfusionMatrix& c) {
    if (c.total() == 0) throw std::domain_error("loss_from_confusion: empty matrix");
    return static_cast<double>(c.up_down + c.down_up) /
           static_cast<double>(c.total());
}

BacktestResult backtest_from_confusion(const ConfusionMatrix& c) {
    BacktestResult r;
    r.wins = c.up_up + c.down_down;
    r.losses = c.up_down + c.down_up;
    if (r.losses == 0) {
        r.infinite_ratio = true;
        r.ratio = std::numeric_limits<double>::infinity();
    } else {
        r.ratio = static_cast<double>(r.wins) / static_cast<double>(r.losses);
    }
    return r;
}

BacktestResult backtest(const std::vector<Eigen::VectorXi>& actual,
                        const std::vector<Eigen::VectorXi>& predicted,
                        const std::vector<Eigen::VectorXd>& moves, double notional) {
    check_pair_shapes(actual, predicted);
    if (moves.size() != actual.size())
        throw std::invalid_argument("backtest: moves length mismatch");

    BacktestResult r = backtest_from_confusion(confusion(actual, predicted));

    // equal unit notional per stock per bar
    double pnl = 0.0;
    long trades = 0;
    for (std::size_t t = 0; t < predicted.size(); ++t) {
        if (moves[t].size() != predicted[t].size())
            throw std::invalid_argument("backtest: moves vector length mismatch");
        for (Eigen::Index i = 0; i < predicted[t].size(); ++i) {
            pnl += static_cast<double>(predicted[t](i)) * moves[t](i) * notional;
            ++trades;
        }
    }
    r.strategy_return = trades > 0 ? pnl / (static_cast<double>(trades) * notional)
                                   : 0.0;
    return r;
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
    out << "metric,value\n";
    out << "loss," << std::setprecision(17) << report.loss << '\n';
    out << "up_up," << report.confusion.up_up << '\n';
    out << "up_down," << report.confusion.up_down << '\n';
    out << "down_up," << report.confusion.down_up << '\n';
    out << "down_down," << report.confusion.down_down << '\n';
    out << "wins," << report.backtest.wins << '\n';
    out << "losses," << report.backtest.losses << '\n';
    out << "win_loss_ratio,";
    if (report.backtest.infinite_ratio) out << "inf";
    else out << report.backtest.ratio;
    out << '\n';
    out << "strategy_return," << report.backtest.strategy_return << '\n';
}

void write_report_text(std::ostream& out, const EvalReport& report) {
    out << "Misclassification loss: " << std::setprecision(6) << report.loss << "\n\n";
    out << "Confusion matrix (real x predicted)\n";
    out << std::setw(14) << "" << std::setw(10) << "Up" << std::setw(10) << "Down"
        << '\n';
    out << std::setw(14) << "Up" << std::setw(10) << report.confusion.up_up
        << std::setw(10) << report.confusion.up_down << '\n';
    out << std::setw(14) << "Down" << std::setw(10) << report.confusion.down_up
        << std::setw(10) << report.confusion.down_down << '\n';
    out << '\n';
    out << "Wins: " << report.backtest.wins << "  Losses: " << report.backtest.losses
        << "  Ratio: ";
    if (report.backtest.infinite_ratio) out << "inf (no losing trades)";
    else out << std::setprecision(6) << report.backtest.ratio;
    out << "\nStrategy return per unit notional: " << std::setprecision(6)
        << report.backtest.strategy_return << '\n';
}

double sample_mean(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("sample_mean: empty");
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double mu = sample_mean(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - mu) * (x - mu);
    return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

ComparisonTable compare_models(const std::vector<NamedPredictor>& models,
                               int iterations, std::uint64_t seed) {
    if (iterations < 1)
        throw std::domain_error("compare_models: iterations must be >= 1");
    const RngStream master(seed);
    ComparisonTable table;
    table.iterations = iterations;
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
        ComparisonRow row;
        row.name = models[mi].name;
        for (int it = 0; it < iterations; ++it) {
            const std::uint64_t iter_seed =
                master.split(mi * static_cast<std::size_t>(iterations) + it).seed();
            row.losses.push_back(models[mi].run(iter_seed));
        }
        row.mean = sample_mean(row.losses);
        row.stddev = sample_std(row.losses);
        table.rows.push_back(std::move(row));
    }
    return table;
}

void ComparisonTable::write_text(std::ostream& out) const {
    out << std::left << std::setw(14) << "Model" << std::right;
    for (int i = 1; i <= iterations; ++i) out << std::setw(10) << i;
    out << std::setw(10) << "Mean" << std::setw(10) << "Std" << '\n';
    for (const auto& row : rows) {
        out << std::left << std::setw(14) << row.name << std::right
            << std::setprecision(4) << std::fixed;
        for (double x : row.losses) out << std::setw(10) << x;
        out << std::setw(10) << row.mean << std::setw(10) << row.stddev << '\n';
        out.unsetf(std::ios::fixed);
    }
}

void ComparisonTable::write_csv(std::ostream& out) const {
    out << "model";
    for (int i = 1; i <= iterations; ++i) out << ",iter" << i;
    out << ",mean,std\n";
    for (const auto& row : rows) {
        out << row.name << std::setprecision(17);
        for (double x : row.losses) out << ',' << x;
        out << ',' << row.mean << ',' << row.stddev << '\n';
    }
}

}  // namespace prbm
