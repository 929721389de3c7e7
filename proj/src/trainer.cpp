#include "prbm/trainer.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "prbm/oracle.hpp"
#include "prbm/sampler.hpp"

namespace prbm {

namespace {

constexpr std::uint64_t kShuffleStreamBase = 1ull << 62;

double mean_free_energy(const Model& model, const std::vector<BlockVisible>& windows) {
    if (windows.empty()) return std::numeric_limits<double>::quiet_NaN();
    double acc = 0.0;
    for (const auto& w : windows) acc += free_energy(model, w);
    return acc / static_cast<double>(windows.size());
}

double mean_nll(const Model& model, const std::vector<BlockVisible>& windows,
                double log_z) {
    double acc = 0.0;
    for (const auto& w : windows) acc += free_energy(model, w) + log_z;
    return acc / static_cast<double>(windows.size());
}

void write_optional(std::ostream& out, const std::optional<double>& x) {
    if (x) out << *x;
}

}  // namespace

void TrainConfig::validate() const {
    if (!(eta > 0.0)) throw std::domain_error("TrainConfig: eta must be > 0");
    if (k < 1) throw std::domain_error("TrainConfig: k must be >= 1");
    if (epochs < 0) throw std::domain_error("TrainConfig: epochs must be >= 0");
    if (minibatch < 1) throw std::domain_error("TrainConfig: minibatch must be >= 1");
}

GradientBlocks gradient_zeros(const ModelShape& shape) {
    return Model::zeros(shape).weights;
}

void gradient_add(GradientBlocks& acc, const GradientBlocks& g) {
    for (std::size_t i = 0; i < acc.vh.size(); ++i)
        for (std::size_t j = 0; j < acc.vh[i].size(); ++j) acc.vh[i][j] += g.vh[i][j];
    for (std::size_t i = 0; i < acc.vbias.size(); ++i) acc.vbias[i] += g.vbias[i];
    for (std::size_t j = 0; j < acc.hbias.size(); ++j) acc.hbias[j] += g.hbias[j];
}

void gradient_scale(GradientBlocks& g, double factor) {
    for (auto& row : g.vh)
        for (auto& block : row) block *= factor;
    for (auto& b : g.vbias) b *= factor;
    for (auto& b : g.hbias) b *= factor;
}

GradientBlocks cd_gradient(const Model& model, const BlockVisible& v0, int k,
                           RngStream& rng) {
    const ModelShape& s = model.shape;
    check_visible_shape(s, v0);
    if (k < 1) throw std::domain_error("cd_gradient: k must be >= 1");

    const auto probs0 = hidden_activation_probs(model, v0);
    const ChainState chain = gibbs_chain(model, v0, k, rng);
    const auto probsk = hidden_activation_probs(model, chain.v);

    GradientBlocks grad = gradient_zeros(s);
    for (int i = 0; i <= s.p; ++i)
        for (int j = 0; j <= s.p; ++j)
            grad.vh[i][j] = forgetting_factor(s.alpha, i, j) *
                            (v0.blocks[i] * probs0[j].transpose() -
                             chain.v.blocks[i] * probsk[j].transpose());
    for (int i = 0; i <= s.p; ++i) grad.vbias[i] = v0.blocks[i] - chain.v.blocks[i];
    for (int j = 0; j <= s.p; ++j) grad.hbias[j] = probs0[j] - probsk[j];
    return grad;
}

void apply_update(Model& model, const GradientBlocks& grad, double eta) {
    const ModelShape& s = model.shape;
    if (grad.vh.size() != model.weights.vh.size() ||
        grad.vbias.size() != model.weights.vbias.size() ||
        grad.hbias.size() != model.weights.hbias.size())
        throw std::invalid_argument("apply_update: gradient shape mismatch");
    for (int i = 0; i <= s.p; ++i)
        for (int j = 0; j <= s.p; ++j) {
            if (grad.vh[i][j].rows() != s.n || grad.vh[i][j].cols() != s.m)
                throw std::invalid_argument("apply_update: gradient block mismatch");
            model.weights.vh[i][j] += eta * grad.vh[i][j];
        }
    for (int i = 0; i <= s.p; ++i) model.weights.vbias[i] += eta * grad.vbias[i];
    for (int j = 0; j <= s.p; ++j) model.weights.hbias[j] += eta * grad.hbias[j];
}

bool nll_tractable(const ModelShape& shape) {
    return shape.lags() * std::max(shape.n, shape.m) <= 20 &&
           shape.lags() * (shape.n + shape.m) <= EnumerationBudget{}.max_total_bits;
}

void TrainTrace::write_csv(std::ostream& out) const {
    out << "epoch,train_proxy,val_proxy,train_nll,val_nll,seconds\n";
    for (const auto& r : records) {
        out << r.epoch << ',' << r.train_proxy << ',';
        if (!std::isnan(r.val_proxy)) out << r.val_proxy;
        out << ',';
        write_optional(out, r.train_nll);
        out << ',';
        write_optional(out, r.val_nll);
        out << ',' << r.seconds << '\n';
    }
}

void TrainTrace::write_csv(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("TrainTrace: cannot open " + path);
    write_csv(out);
}

TrainTrace train(Model& model, const std::vector<BlockVisible>& train_windows,
                 const std::vector<BlockVisible>& val_windows,
                 const TrainConfig& config) {
    config.validate();
    if (train_windows.empty()) throw std::domain_error("train: empty dataset");
    for (const auto& w : train_windows) check_visible_shape(model.shape, w);
    for (const auto& w : val_windows) check_visible_shape(model.shape, w);

    const RngStream master(config.seed);
    const std::size_t count = train_windows.size();
    const bool with_nll = nll_tractable(model.shape);

    TrainTrace trace;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();

        std::vector<std::size_t> order(count);
        std::iota(order.begin(), order.end(), 0);
        if (config.shuffle) {
            RngStream shuffle_rng =
                master.split(kShuffleStreamBase + static_cast<std::uint64_t>(epoch));
            for (std::size_t i = count; i > 1; --i) {
                const std::size_t j = shuffle_rng.next_u64() % i;
                std::swap(order[i - 1], order[j]);
            }
        }

        for (std::size_t start = 0; start < count; start += config.minibatch) {
            const std::size_t end =
                std::min(count, start + static_cast<std::size_t>(config.minibatch));
            GradientBlocks acc = gradient_zeros(model.shape);
            for (std::size_t at = start; at < end; ++at) {
                const std::size_t idx = order[at];
                // stream tied to (epoch, original example index)
                RngStream ex = master.split(
                    static_cast<std::uint64_t>(epoch) * count + idx);
                gradient_add(acc, cd_gradient(model, train_windows[idx], config.k, ex));
            }
            gradient_scale(acc, 1.0 / static_cast<double>(end - start));
            apply_update(model, acc, config.eta);
            if (!model.all_finite()) {
                trace.diverged = true;
                return trace;
            }
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_proxy = mean_free_energy(model, train_windows);
        rec.val_proxy = mean_free_energy(model, val_windows);
        if (with_nll) {
            const double log_z = log_partition_function(model);
            rec.train_nll = mean_nll(model, train_windows, log_z);
            if (!val_windows.empty())
                rec.val_nll = mean_nll(model, val_windows, log_z);
        }
        rec.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        trace.records.push_back(rec);
    }
    return trace;
}

}  // namespace prbm
