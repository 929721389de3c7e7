#pragma once

#include <Eigen/Dense>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace prbm {

// Counts by (real direction, predicted direction); up = +1, down = -1.
struct ConfusionMatrix {
    long up_up = 0;
    long up_down = 0;
    long down_up = 0;
    long down_down = 0;

    long total() const { return up_up + up_down + down_up + down_down; }
};

// Maps {0,1} directions to the +-1 encoding used by the loss.
Eigen::VectorXi to_pm1(const Eigen::VectorXi& zero_one);

// Fraction of wrong directions over sequences of +-1 vectors:
// (1/2n)(1/|V|) sum |1 - actual * predicted|.
double misclassification_loss(const std::vector<Eigen::VectorXi>& actual,
                              const std::vector<Eigen::VectorXi>& predicted);

ConfusionMatrix confusion(const std::vector<Eigen::VectorXi>& actual,
                          const std::vector<Eigen::VectorXi>& predicted);

double loss_from_confusion(const ConfusionMatrix& c);

struct BacktestResult {
    long wins = 0;
    long losses = 0;
    double ratio = 0.0;
    bool infinite_ratio = false;
    double strategy_return = 0.0;  // mean signed move per unit notional
};

// One trade per stock per bar; a win is a correctly predicted direction.
// moves[t] holds the realized per-stock d_t values for that bar.
BacktestResult backtest(const std::vector<Eigen::VectorXi>& actual,
                        const std::vector<Eigen::VectorXi>& predicted,
                        const std::vector<Eigen::VectorXd>& moves, double notional);

// Win/loss arithmetic alone, from aggregated counts.
BacktestResult backtest_from_confusion(const ConfusionMatrix& c);

struct EvalReport {
    double loss = 0.0;
    ConfusionMatrix confusion;
    BacktestResult backtest;
};

void write_report_csv(std::ostream& out, const EvalReport& report);
void write_report_text(std::ostream& out, const EvalReport& report);

double sample_mean(const std::vector<double>& xs);
// sample (N-1) standard deviation
double sample_std(const std::vector<double>& xs);

struct ComparisonRow {
    std::string name;
    std::vector<double> losses;
    double mean = 0.0;
    double stddev = 0.0;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;
    int iterations = 0;

    void write_text(std::ostream& out) const;  // columns Model, 1..N, Mean, Std
    void write_csv(std::ostream& out) const;
};

struct NamedPredictor {
    std::string name;
    // returns a misclassification loss for one iteration
    std::function<double(std::uint64_t iteration_seed)> run;
};

ComparisonTable compare_models(const std::vector<NamedPredictor>& models,
                               int iterations, std::uint64_t seed);

}  // namespace prbm
