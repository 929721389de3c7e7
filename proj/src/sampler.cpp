#include "prbm/sampler.hpp"

#include <stdexcept>

namespace prbm {

namespace {

std::vector<Block> bernoulli_draw(const std::vector<Eigen::VectorXd>& probs,
                                  RngStream& rng) {
    std::vector<Block> blocks(probs.size());
    for (std::size_t l = 0; l < probs.size(); ++l) {
        blocks[l] = Eigen::VectorXd::Zero(probs[l].size());
        for (Eigen::Index u = 0; u < probs[l].size(); ++u)
            blocks[l](u) = rng.bernoulli(probs[l](u)) ? 1.0 : 0.0;
    }
    return blocks;
}

}  // namespace

BlockHidden sample_hidden(const Model& model, const BlockVisible& v, RngStream& rng) {
    return {bernoulli_draw(hidden_activation_probs(model, v), rng)};
}

BlockVisible sample_visible(const Model& model, const BlockHidden& h, RngStream& rng) {
    return {bernoulli_draw(visible_activation_probs(model, h), rng)};
}

ChainState gibbs_chain(const Model& model, const BlockVisible& v0, int k,
                       RngStream& rng) {
    if (k < 1) throw std::domain_error("gibbs_chain: k must be >= 1");
    check_visible_shape(model.shape, v0);
    ChainState state{v0, {}, 0};
    for (int step = 0; step < k; ++step) {
        state.h = sample_hidden(model, state.v, rng);
        state.v = sample_visible(model, state.h, rng);
        ++state.step;
    }
    return state;
}

Eigen::MatrixXd hidden_expectation_matrix(const Model& model, const BlockVisible& v) {
    const ModelShape& s = model.shape;
    const auto probs = hidden_activation_probs(model, v);
    Eigen::VectorXd row(s.lags() * s.m + 1);
    for (int j = 0; j <= s.p; ++j) row.segment(j * s.m, s.m) = probs[j];
    row(s.lags() * s.m) = 1.0;
    Eigen::MatrixXd stacked(s.p + 2, row.size());
    for (int r = 0; r < s.p + 2; ++r) stacked.row(r) = row.transpose();
    return stacked;
}

Prediction predict_direction(const Model& model, const std::vector<Block>& past,
                             int k_pred, PredictMode mode, RngStream& rng) {
    const ModelShape& s = model.shape;
    if (static_cast<int>(past.size()) != s.p)
        throw std::invalid_argument("predict_direction: need exactly p past blocks");
    for (const auto& b : past)
        if (b.size() != s.n)
            throw std::invalid_argument("predict_direction: past block length != n");
    if (k_pred < 1) throw std::domain_error("predict_direction: k_pred must be >= 1");

    BlockVisible v;
    v.blocks.resize(s.lags());
    for (int lag = 1; lag <= s.p; ++lag) v.blocks[lag] = past[lag - 1];

    if (mode == PredictMode::MeanField) {
        v.blocks[0] = Eigen::VectorXd::Constant(s.n, 0.5);
    } else {
        v.blocks[0] = Eigen::VectorXd::Zero(s.n);
        for (int u = 0; u < s.n; ++u)
            v.blocks[0](u) = rng.bernoulli(0.5) ? 1.0 : 0.0;
    }

    Eigen::VectorXd lag0_probs = v.blocks[0];
    for (int step = 0; step < k_pred; ++step) {
        if (mode == PredictMode::MeanField) {
            const auto hprobs = hidden_activation_probs(model, v);
            const auto vprobs = visible_activation_probs(model, BlockHidden{hprobs});
            lag0_probs = vprobs[0];
            v.blocks[0] = lag0_probs;
        } else {
            const BlockHidden h = sample_hidden(model, v, rng);
            const auto vprobs = visible_activation_probs(model, h);
            lag0_probs = vprobs[0];
            for (int u = 0; u < s.n; ++u)
                v.blocks[0](u) = rng.bernoulli(lag0_probs(u)) ? 1.0 : 0.0;
        }
    }

    Prediction out;
    out.probabilities = lag0_probs;
    out.direction = Eigen::VectorXi::Zero(s.n);
    for (int u = 0; u < s.n; ++u) out.direction(u) = lag0_probs(u) >= 0.5 ? 1 : 0;
    return out;
}

}  // namespace prbm
