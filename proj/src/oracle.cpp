#include "prbm/oracle.hpp"

#include <cmath>

namespace prbm {

namespace {

void check_joint_budget(const ModelShape& s, const EnumerationBudget& budget) {
    if (s.lags() * (s.n + s.m) > budget.max_total_bits)
        throw CapacityError("oracle: (p+1)(n+m) exceeds enumeration budget");
}

void check_hidden_budget(const ModelShape& s, const EnumerationBudget& budget) {
    if (s.lags() * s.m > budget.max_total_bits)
        throw CapacityError("oracle: (p+1)m exceeds enumeration budget");
}

void check_visible_budget(const ModelShape& s, const EnumerationBudget& budget) {
    if (s.lags() * s.n > budget.max_total_bits)
        throw CapacityError("oracle: (p+1)n exceeds enumeration budget");
}

std::vector<Block> blocks_from_index(std::uint64_t index, int lags, int units) {
    std::vector<Block> blocks(lags, Eigen::VectorXd::Zero(units));
    for (int l = 0; l < lags; ++l)
        for (int u = 0; u < units; ++u)
            blocks[l](u) = static_cast<double>((index >> (l * units + u)) & 1u);
    return blocks;
}

double logsumexp(const std::vector<double>& xs) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double x : xs) mx = std::max(mx, x);
    double acc = 0.0;
    for (double x : xs) acc += std::exp(x - mx);
    return mx + std::log(acc);
}

}  // namespace

BlockVisible visible_from_index(const ModelShape& shape, std::uint64_t index) {
    return {blocks_from_index(index, shape.lags(), shape.n)};
}

BlockHidden hidden_from_index(const ModelShape& shape, std::uint64_t index) {
    return {blocks_from_index(index, shape.lags(), shape.m)};
}

std::uint64_t index_of_visible(const ModelShape& shape, const BlockVisible& v) {
    check_visible_shape(shape, v);
    std::uint64_t index = 0;
    for (int l = 0; l <= shape.p; ++l)
        for (int u = 0; u < shape.n; ++u)
            if (v.blocks[l](u) != 0.0) index |= 1ull << (l * shape.n + u);
    return index;
}

double log_partition_function(const Model& model, const EnumerationBudget& budget) {
    check_joint_budget(model.shape, budget);
    const std::uint64_t nv = 1ull << (model.shape.lags() * model.shape.n);
    std::vector<double> terms;
    terms.reserve(nv);
    for (std::uint64_t iv = 0; iv < nv; ++iv)
        terms.push_back(-free_energy(model, visible_from_index(model.shape, iv)));
    return logsumexp(terms);
}

double exact_joint(const Model& model, const BlockVisible& v, const BlockHidden& h,
                   const EnumerationBudget& budget) {
    return std::exp(-energy(model, v, h) - log_partition_function(model, budget));
}

double exact_loglik(const Model& model, const BlockVisible& v,
                    const EnumerationBudget& budget) {
    return -free_energy(model, v) - log_partition_function(model, budget);
}

BlockWeights exact_gradient(const Model& model, const BlockVisible& v,
                            const EnumerationBudget& budget) {
    const ModelShape& s = model.shape;
    check_joint_budget(s, budget);
    check_visible_shape(s, v);

    BlockWeights grad = Model::zeros(s).weights;

    // data phase: hidden units Rao-Blackwellized given the example
    const auto data_probs = hidden_activation_probs(model, v);
    for (int i = 0; i <= s.p; ++i)
        for (int j = 0; j <= s.p; ++j)
            grad.vh[i][j] += forgetting_factor(s.alpha, i, j) *
                             (v.blocks[i] * data_probs[j].transpose());
    for (int i = 0; i <= s.p; ++i) grad.vbias[i] += v.blocks[i];
    for (int j = 0; j <= s.p; ++j) grad.hbias[j] += data_probs[j];

    // model phase: expectation over the full visible marginal
    const double log_z = log_partition_function(model, budget);
    const std::uint64_t nv = 1ull << (s.lags() * s.n);
    for (std::uint64_t iv = 0; iv < nv; ++iv) {
        const BlockVisible vv = visible_from_index(s, iv);
        const double w = std::exp(-free_energy(model, vv) - log_z);
        const auto probs = hidden_activation_probs(model, vv);
        for (int i = 0; i <= s.p; ++i)
            for (int j = 0; j <= s.p; ++j)
                grad.vh[i][j] -= w * forgetting_factor(s.alpha, i, j) *
                                 (vv.blocks[i] * probs[j].transpose());
        for (int i = 0; i <= s.p; ++i) grad.vbias[i] -= w * vv.blocks[i];
        for (int j = 0; j <= s.p; ++j) grad.hbias[j] -= w * probs[j];
    }
    return grad;
}

std::vector<Eigen::VectorXd> exact_hidden_conditionals(const Model& model,
                                                       const BlockVisible& v,
                                                       const EnumerationBudget& budget) {
    const ModelShape& s = model.shape;
    check_hidden_budget(s, budget);
    check_visible_shape(s, v);
    const std::uint64_t nh = 1ull << (s.lags() * s.m);

    std::vector<double> log_w(nh);
    for (std::uint64_t ih = 0; ih < nh; ++ih)
        log_w[ih] = -energy(model, v, hidden_from_index(s, ih));
    const double log_norm = logsumexp(log_w);

    std::vector<Eigen::VectorXd> probs(s.lags(), Eigen::VectorXd::Zero(s.m));
    for (std::uint64_t ih = 0; ih < nh; ++ih) {
        const double w = std::exp(log_w[ih] - log_norm);
        for (int j = 0; j <= s.p; ++j)
            for (int u = 0; u < s.m; ++u)
                if ((ih >> (j * s.m + u)) & 1u) probs[j](u) += w;
    }
    return probs;
}

std::vector<Eigen::VectorXd> exact_visible_conditionals(const Model& model,
                                                        const BlockHidden& h,
                                                        const EnumerationBudget& budget) {
    const ModelShape& s = model.shape;
    check_visible_budget(s, budget);
    check_hidden_shape(s, h);
    const std::uint64_t nv = 1ull << (s.lags() * s.n);

    std::vector<double> log_w(nv);
    for (std::uint64_t iv = 0; iv < nv; ++iv)
        log_w[iv] = -energy(model, visible_from_index(s, iv), h);
    const double log_norm = logsumexp(log_w);

    std::vector<Eigen::VectorXd> probs(s.lags(), Eigen::VectorXd::Zero(s.n));
    for (std::uint64_t iv = 0; iv < nv; ++iv) {
        const double w = std::exp(log_w[iv] - log_norm);
        for (int i = 0; i <= s.p; ++i)
            for (int u = 0; u < s.n; ++u)
                if ((iv >> (i * s.n + u)) & 1u) probs[i](u) += w;
    }
    return probs;
}

double factorization_max_error(const Model& model, const BlockVisible& v,
                               const EnumerationBudget& budget) {
    const ModelShape& s = model.shape;
    check_hidden_budget(s, budget);
    check_visible_shape(s, v);
    const int lags = s.lags();
    const std::uint64_t nh = 1ull << (lags * s.m);
    const std::uint64_t per_block = 1ull << s.m;

    std::vector<double> log_w(nh);
    for (std::uint64_t ih = 0; ih < nh; ++ih)
        log_w[ih] = -energy(model, v, hidden_from_index(s, ih));
    const double log_norm = logsumexp(log_w);

    // block marginals p(h_{t-j} = b | v)
    std::vector<std::vector<double>> block_marginal(
        lags, std::vector<double>(per_block, 0.0));
    const std::uint64_t block_mask = per_block - 1;
    for (std::uint64_t ih = 0; ih < nh; ++ih) {
        const double w = std::exp(log_w[ih] - log_norm);
        for (int j = 0; j < lags; ++j)
            block_marginal[j][(ih >> (j * s.m)) & block_mask] += w;
    }

    double max_err = 0.0;
    for (std::uint64_t ih = 0; ih < nh; ++ih) {
        const double joint = std::exp(log_w[ih] - log_norm);
        double prod = 1.0;
        for (int j = 0; j < lags; ++j)
            prod *= block_marginal[j][(ih >> (j * s.m)) & block_mask];
        max_err = std::max(max_err, std::abs(joint - prod));
    }
    return max_err;
}

Eigen::VectorXd exact_visible_marginal(const Model& model,
                                       const EnumerationBudget& budget) {
    check_joint_budget(model.shape, budget);
    const double log_z = log_partition_function(model, budget);
    const std::uint64_t nv = 1ull << (model.shape.lags() * model.shape.n);
    Eigen::VectorXd marginal(static_cast<Eigen::Index>(nv));
    for (std::uint64_t iv = 0; iv < nv; ++iv)
        marginal(static_cast<Eigen::Index>(iv)) =
            std::exp(-free_energy(model, visible_from_index(model.shape, iv)) - log_z);
    return marginal;
}

}  // namespace prbm
