#include "prbm/data.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

namespace prbm {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_price(const std::string& text, int line_no, bool& missing) {
    if (text.empty()) {
        missing = true;
        return 0.0;
    }
    try {
        std::size_t used = 0;
        const double x = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw DataError("load_bars: bad numeric field at line " +
                        std::to_string(line_no));
    }
}

std::string iso_timestamp(long long seconds_from_base) {
    // base: 2017-06-05T09:30:00Z
    std::tm base{};
    base.tm_year = 2017 - 1900;
    base.tm_mon = 5;
    base.tm_mday = 5;
    base.tm_hour = 9;
    base.tm_min = 30;
    const std::time_t t = timegm(&base) + seconds_from_base;
    std::tm out{};
    gmtime_r(&t, &out);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &out);
    return buf;
}

}  // namespace

BarTable load_bars(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("load_bars: cannot open " + path);

    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) throw DataError("load_bars: empty file");
    ++line_no;
    if (split_csv_line(line) !=
        std::vector<std::string>{"timestamp", "symbol", "open", "close"})
        throw DataError("load_bars: expected header timestamp,symbol,open,close");

    struct Cell {
        double open = 0.0, close = 0.0;
        bool present = false;
    };
    std::vector<std::string> timestamps;
    std::vector<std::string> symbols;
    std::map<std::string, int> symbol_index;
    std::vector<std::map<int, Cell>> rows;  // per timestamp

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 4)
            throw DataError("load_bars: expected 4 fields at line " +
                            std::to_string(line_no));
        const std::string& ts = fields[0];
        if (timestamps.empty() || ts != timestamps.back()) {
            if (!timestamps.empty() && ts <= timestamps.back())
                throw DataError("load_bars: timestamps not strictly increasing at line " +
                                std::to_string(line_no));
            timestamps.push_back(ts);
            rows.emplace_back();
        }
        auto [it, inserted] = symbol_index.try_emplace(
            fields[1], static_cast<int>(symbols.size()));
        if (inserted) symbols.push_back(fields[1]);

        Cell cell;
        bool missing = false;
        cell.open = parse_price(fields[2], line_no, missing);
        cell.close = parse_price(fields[3], line_no, missing);
        cell.present = !missing;
        if (cell.present && (cell.open <= 0.0 || cell.close <= 0.0))
            throw DataError("load_bars: non-positive price at line " +
                            std::to_string(line_no));
        rows.back()[it->second] = cell;
    }

    const int n = static_cast<int>(symbols.size());
    if (n == 0) throw DataError("load_bars: no data rows");

    BarTable table;
    table.symbols = symbols;
    std::vector<int> keep;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        bool complete = static_cast<int>(rows[r].size()) == n;
        if (complete)
            for (const auto& [sym, cell] : rows[r])
                if (!cell.present) complete = false;
        if (complete) keep.push_back(static_cast<int>(r));
        else ++table.dropped_rows;
    }
    if (keep.empty()) throw DataError("load_bars: all rows dropped");

    const int t_count = static_cast<int>(keep.size());
    table.open.resize(t_count, n);
    table.close.resize(t_count, n);
    table.timestamps.reserve(keep.size());
    for (int r = 0; r < t_count; ++r) {
        table.timestamps.push_back(timestamps[keep[r]]);
        for (const auto& [sym, cell] : rows[keep[r]]) {
            table.open(r, sym) = cell.open;
            table.close(r, sym) = cell.close;
        }
    }
    return table;
}

DirectionDataset directions(const BarTable& bars) {
    DirectionDataset data;
    data.moves = bars.close - bars.open;
    data.directions.resize(data.moves.rows(), data.moves.cols());
    for (Eigen::Index r = 0; r < data.moves.rows(); ++r)
        for (Eigen::Index c = 0; c < data.moves.cols(); ++c)
            data.directions(r, c) = data.moves(r, c) > 0.0 ? 1 : 0;
    return data;
}

int window_count(const DirectionDataset& data, int p) {
    if (p < 0) throw std::domain_error("window_count: p must be >= 0");
    if (data.rows() <= p) throw std::domain_error("window_count: need T > p");
    return data.rows() - p;
}

BlockVisible window_block(const DirectionDataset& data, int p, int window_index) {
    const int count = window_count(data, p);
    if (window_index < 0 || window_index >= count)
        throw std::out_of_range("window_block: index out of range");
    BlockVisible v;
    v.blocks.resize(p + 1);
    for (int lag = 0; lag <= p; ++lag) {
        const int row = window_index + p - lag;
        v.blocks[lag] = data.directions.row(row).cast<double>().transpose();
    }
    return v;
}

std::vector<BlockVisible> make_windows(const DirectionDataset& data, int p) {
    const int count = window_count(data, p);
    std::vector<BlockVisible> windows;
    windows.reserve(count);
    for (int w = 0; w < count; ++w) windows.push_back(window_block(data, p, w));
    return windows;
}

WindowSplit split_windows(const std::vector<BlockVisible>& windows,
                          double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::domain_error("split_windows: fraction must be in (0, 1)");
    const int count = static_cast<int>(windows.size());
    const int train_count =
        static_cast<int>(std::floor(train_fraction * static_cast<double>(count)));
    if (train_count == 0 || train_count == count)
        throw std::domain_error("split_windows: degenerate empty side");
    WindowSplit split;
    split.first_validation_window = train_count;
    split.train.assign(windows.begin(), windows.begin() + train_count);
    split.validation.assign(windows.begin() + train_count, windows.end());
    return split;
}

DirectionDataset synth_markov(int n, int p_true, int t, double coupling,
                              std::uint64_t seed) {
    if (n < 1 || p_true < 1 || t <= p_true)
        throw std::domain_error("synth_markov: need n >= 1, p_true >= 1, T > p_true");

    RngStream rng(seed);

    // planted sparse couplings: a strong self link at lag 1 plus one
    // seeded cross link per unit
    std::vector<int> partner(n), partner_lag(n);
    std::vector<double> partner_w(n);
    for (int i = 0; i < n; ++i) {
        partner[i] = n > 1 ? static_cast<int>((i + 1 + rng.next_u64() % (n - 1)) % n)
                           : i;
        partner_lag[i] = 1 + static_cast<int>(rng.next_u64() % p_true);
        partner_w[i] = 0.4 * coupling * (rng.bernoulli(0.5) ? 1.0 : -1.0);
    }

    DirectionDataset data;
    data.directions = Eigen::MatrixXi::Zero(t, n);
    data.moves = Eigen::MatrixXd::Zero(t, n);
    auto spin = [&](int row, int col) {
        return data.directions(row, col) == 1 ? 1.0 : -1.0;
    };
    for (int row = 0; row < t; ++row) {
        for (int i = 0; i < n; ++i) {
            double prob = 0.5;
            if (row >= p_true) {
                const double logit = coupling * spin(row - 1, i) +
                                     partner_w[i] * spin(row - partner_lag[i],
                                                         partner[i]);
                prob = logistic(logit);
            }
            const int dir = rng.bernoulli(prob) ? 1 : 0;
            data.directions(row, i) = dir;
            data.moves(row, i) = (dir == 1 ? 1.0 : -1.0) * (0.5 + rng.uniform());
        }
    }
    return data;
}

void write_bars_csv(const std::string& path, const DirectionDataset& data) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("write_bars_csv: cannot open " + path);
    out << "timestamp,symbol,open,close\n";
    out.precision(12);
    const int n = data.cols();
    for (int row = 0; row < data.rows(); ++row) {
        const std::string ts = iso_timestamp(300ll * row);
        for (int i = 0; i < n; ++i) {
            char sym[16];
            std::snprintf(sym, sizeof sym, "S%03d", i);
            out << ts << ',' << sym << ",100," << 100.0 + data.moves(row, i)
                << '\n';
        }
    }
    if (!out) throw DataError("write_bars_csv: write failed for " + path);
}

}  // namespace prbm
