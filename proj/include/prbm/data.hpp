#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "prbm/model.hpp"

namespace prbm {

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Aligned OHLC-style bars, long-format CSV `timestamp,symbol,open,close`.
// Timestamps strictly increasing; rows with missing values for any stock
// are dropped whole.
struct BarTable {
    std::vector<std::string> timestamps;
    std::vector<std::string> symbols;
    Eigen::MatrixXd open;   // T x n
    Eigen::MatrixXd close;  // T x n
    int dropped_rows = 0;
};

BarTable load_bars(const std::string& path);

struct DirectionDataset {
    Eigen::MatrixXi directions;  // T x n in {0, 1}
    Eigen::MatrixXd moves;       // T x n, d_t = close - open

    int rows() const { return static_cast<int>(directions.rows()); }
    int cols() const { return static_cast<int>(directions.cols()); }
};

// d_t = close - open; direction 1 iff d_t > 0 (flat bars count as "down").
DirectionDataset directions(const BarTable& bars);

// Window w covers rows w..w+p with lag 0 = the latest row (w+p).
BlockVisible window_block(const DirectionDataset& data, int p, int window_index);
int window_count(const DirectionDataset& data, int p);
std::vector<BlockVisible> make_windows(const DirectionDataset& data, int p);

struct WindowSplit {
    std::vector<BlockVisible> train;
    std::vector<BlockVisible> validation;
    int first_validation_window = 0;
};

// Chronological split on window start index; train count = floor(fraction * W).
WindowSplit split_windows(const std::vector<BlockVisible>& windows,
                          double train_fraction);

// {0,1} sequences whose unit probabilities are logistic in a seeded sparse
// linear function of the previous p_true steps; moves carry matching signs
// so backtests line up with the planted directions.
DirectionDataset synth_markov(int n, int p_true, int t, double coupling,
                              std::uint64_t seed);

// Export in the load_bars CSV schema with symbols S000..S(n-1),
// open = 100 and close = 100 + d_t.
void write_bars_csv(const std::string& path, const DirectionDataset& data);

}  // namespace prbm
