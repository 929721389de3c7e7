#include "prbm/model.hpp"

#include <cmath>
#include <stdexcept>

namespace prbm {

void ModelShape::validate() const {
    if (n < 1 || m < 1 || p < 0)
        throw std::domain_error("ModelShape: need n >= 1, m >= 1, p >= 0");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::domain_error("ModelShape: alpha must be in [0, 1]");
}

double forgetting_factor(double alpha, int i, int j) {
    const int d = std::abs(i - j);
    if (d == 0) return 1.0;  // 0^0 = 1 convention
    return std::pow(alpha, d);
}

Eigen::MatrixXd build_forgetting_matrix(double alpha, int p) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::domain_error("build_forgetting_matrix: alpha must be in [0, 1]");
    if (p < 0) throw std::domain_error("build_forgetting_matrix: p must be >= 0");
    Eigen::MatrixXd a = Eigen::MatrixXd::Ones(p + 2, p + 2);
    for (int i = 0; i <= p; ++i)
        for (int j = 0; j <= p; ++j) a(i, j) = forgetting_factor(alpha, i, j);
    return a;
}

Model Model::zeros(const ModelShape& shape) {
    shape.validate();
    Model model;
    model.shape = shape;
    const int lags = shape.lags();
    model.weights.vh.assign(
        lags, std::vector<Eigen::MatrixXd>(
                  lags, Eigen::MatrixXd::Zero(shape.n, shape.m)));
    model.weights.vbias.assign(lags, Eigen::VectorXd::Zero(shape.n));
    model.weights.hbias.assign(lags, Eigen::VectorXd::Zero(shape.m));
    return model;
}

Model Model::gaussian_init(const ModelShape& shape, double stddev, RngStream& rng) {
    Model model = zeros(shape);
    for (auto& row : model.weights.vh)
        for (auto& block : row)
            for (int c = 0; c < block.cols(); ++c)
                for (int r = 0; r < block.rows(); ++r)
                    block(r, c) = stddev * rng.gaussian();
    return model;
}

bool Model::all_finite() const {
    for (const auto& row : weights.vh)
        for (const auto& block : row)
            if (!block.allFinite()) return false;
    for (const auto& b : weights.vbias)
        if (!b.allFinite()) return false;
    for (const auto& b : weights.hbias)
        if (!b.allFinite()) return false;
    return true;
}

void check_visible_shape(const ModelShape& shape, const BlockVisible& v) {
    if (static_cast<int>(v.blocks.size()) != shape.lags())
        throw std::invalid_argument("BlockVisible: wrong number of lag blocks");
    for (const auto& b : v.blocks)
        if (b.size() != shape.n)
            throw std::invalid_argument("BlockVisible: block length != n");
}

void check_hidden_shape(const ModelShape& shape, const BlockHidden& h) {
    if (static_cast<int>(h.blocks.size()) != shape.lags())
        throw std::invalid_argument("BlockHidden: wrong number of lag blocks");
    for (const auto& b : h.blocks)
        if (b.size() != shape.m)
            throw std::invalid_argument("BlockHidden: block length != m");
}

double energy(const Model& model, const BlockVisible& v, const BlockHidden& h) {
    const ModelShape& s = model.shape;
    check_visible_shape(s, v);
    check_hidden_shape(s, h);
    double e = 0.0;
    for (int i = 0; i <= s.p; ++i)
        for (int j = 0; j <= s.p; ++j)
            e -= forgetting_factor(s.alpha, i, j) *
                 v.blocks[i].dot(model.weights.vh[i][j] * h.blocks[j]);
    for (int i = 0; i <= s.p; ++i) e -= v.blocks[i].dot(model.weights.vbias[i]);
    for (int j = 0; j <= s.p; ++j) e -= h.blocks[j].dot(model.weights.hbias[j]);
    return e;
}

double logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double z = std::exp(x);
    return z / (1.0 + z);
}

namespace {

// log(1 + e^x) without overflow
double softplus(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

}  // namespace

std::vector<Eigen::VectorXd> hidden_activation_probs(const Model& model,
                                                     const BlockVisible& v) {
    const ModelShape& s = model.shape;
    check_visible_shape(s, v);
    std::vector<Eigen::VectorXd> probs(s.lags());
    for (int j = 0; j <= s.p; ++j) {
        Eigen::VectorXd logits = model.weights.hbias[j];
        for (int i = 0; i <= s.p; ++i)
            logits += forgetting_factor(s.alpha, i, j) *
                      (model.weights.vh[i][j].transpose() * v.blocks[i]);
        probs[j] = logits.unaryExpr([](double x) { return logistic(x); });
    }
    return probs;
}

std::vector<Eigen::VectorXd> visible_activation_probs(const Model& model,
                                                      const BlockHidden& h) {
    const ModelShape& s = model.shape;
    check_hidden_shape(s, h);
    std::vector<Eigen::VectorXd> probs(s.lags());
    for (int i = 0; i <= s.p; ++i) {
        Eigen::VectorXd logits = model.weights.vbias[i];
        for (int j = 0; j <= s.p; ++j)
            logits += forgetting_factor(s.alpha, i, j) *
                      (model.weights.vh[i][j] * h.blocks[j]);
        probs[i] = logits.unaryExpr([](double x) { return logistic(x); });
    }
    return probs;
}

double free_energy(const Model& model, const BlockVisible& v) {
    const ModelShape& s = model.shape;
    check_visible_shape(s, v);
    double f = 0.0;
    for (int i = 0; i <= s.p; ++i) f -= v.blocks[i].dot(model.weights.vbias[i]);
    for (int j = 0; j <= s.p; ++j) {
        Eigen::VectorXd logits = model.weights.hbias[j];
        for (int i = 0; i <= s.p; ++i)
            logits += forgetting_factor(s.alpha, i, j) *
                      (model.weights.vh[i][j].transpose() * v.blocks[i]);
        for (int u = 0; u < s.m; ++u) f -= softplus(logits(u));
    }
    return f;
}

Eigen::MatrixXd assemble_full_matrix(const Model& model) {
    const ModelShape& s = model.shape;
    const int rows = s.lags() * s.n + 1;
    const int cols = s.lags() * s.m + 1;
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(rows, cols);
    for (int i = 0; i <= s.p; ++i)
        for (int j = 0; j <= s.p; ++j)
            full.block(i * s.n, j * s.m, s.n, s.m) = model.weights.vh[i][j];
    for (int i = 0; i <= s.p; ++i)
        full.block(i * s.n, cols - 1, s.n, 1) = model.weights.vbias[i];
    for (int j = 0; j <= s.p; ++j)
        full.block(rows - 1, j * s.m, 1, s.m) = model.weights.hbias[j].transpose();
    // bottom-right corner stays zero
    return full;
}

Eigen::MatrixXd expand_forgetting_mask(double alpha, int p, int n, int m) {
    const Eigen::MatrixXd a = build_forgetting_matrix(alpha, p);
    const int rows = (p + 1) * n + 1;
    const int cols = (p + 1) * m + 1;
    Eigen::MatrixXd mask(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const int i = (r == rows - 1) ? p + 1 : r / n;
        for (int c = 0; c < cols; ++c) {
            const int j = (c == cols - 1) ? p + 1 : c / m;
            mask(r, c) = a(i, j);
        }
    }
    return mask;
}

Eigen::VectorXd augmented(const BlockVisible& v) {
    int total = 1;
    for (const auto& b : v.blocks) total += static_cast<int>(b.size());
    Eigen::VectorXd out(total);
    int at = 0;
    for (const auto& b : v.blocks) {
        out.segment(at, b.size()) = b;
        at += static_cast<int>(b.size());
    }
    out(at) = 1.0;
    return out;
}

Eigen::VectorXd augmented(const BlockHidden& h) {
    int total = 1;
    for (const auto& b : h.blocks) total += static_cast<int>(b.size());
    Eigen::VectorXd out(total);
    int at = 0;
    for (const auto& b : h.blocks) {
        out.segment(at, b.size()) = b;
        at += static_cast<int>(b.size());
    }
    out(at) = 1.0;
    return out;
}

}  // namespace prbm
