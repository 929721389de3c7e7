#include <doctest.h>

#include <cmath>

#include "prbm/oracle.hpp"

using namespace prbm;

namespace {

Model seeded_model(const ModelShape& s, std::uint64_t seed, double stddev = 0.5) {
    RngStream rng(seed);
    Model model = Model::gaussian_init(s, stddev, rng);
    for (auto& b : model.weights.vbias)
        for (int u = 0; u < s.n; ++u) b(u) = 0.3 * rng.gaussian();
    for (auto& b : model.weights.hbias)
        for (int u = 0; u < s.m; ++u) b(u) = 0.3 * rng.gaussian();
    return model;
}

// independent re-implementation: sum over (h, v) pairs, hidden-major order
double log_z_bruteforce(const Model& model) {
    const ModelShape& s = model.shape;
    const std::uint64_t nv = 1ull << (s.lags() * s.n);
    const std::uint64_t nh = 1ull << (s.lags() * s.m);
    double acc = 0.0;
    for (std::uint64_t ih = 0; ih < nh; ++ih) {
        const BlockHidden h = hidden_from_index(s, ih);
        for (std::uint64_t iv = 0; iv < nv; ++iv)
            acc += std::exp(-energy(model, visible_from_index(s, iv), h));
    }
    return std::log(acc);
}

}  // namespace

TEST_CASE("partition function of the zero-weight single-unit model is 4") {
    const Model model = Model::zeros({1, 1, 0, 1.0});
    CHECK(log_partition_function(model) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("partition function of zero weights counts configurations") {
    const Model model = Model::zeros({2, 1, 0, 1.0});
    CHECK(log_partition_function(model) == doctest::Approx(std::log(8.0)).epsilon(1e-12));
}

TEST_CASE("partition function agrees with a different enumeration order") {
    const ModelShape s{2, 2, 1, 0.5};
    const Model model = seeded_model(s, 21);
    CHECK(log_partition_function(model) ==
          doctest::Approx(log_z_bruteforce(model)).epsilon(1e-10));
}

TEST_CASE("partition function refuses over-budget models") {
    const Model model = Model::zeros({10, 10, 1, 0.5});
    CHECK_THROWS_AS(log_partition_function(model), CapacityError);
}

TEST_CASE("zero weights make the joint uniform") {
    const ModelShape s{2, 1, 1, 0.5};
    const Model model = Model::zeros(s);
    const double expect = 1.0 / std::pow(2.0, s.lags() * (s.n + s.m));
    RngStream rng(4);
    const BlockVisible v = visible_from_index(s, 5);
    const BlockHidden h = hidden_from_index(s, 2);
    CHECK(exact_joint(model, v, h) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("joint probabilities sum to one") {
    const ModelShape s{2, 2, 1, 0.6};
    const Model model = seeded_model(s, 9);
    const std::uint64_t nv = 1ull << (s.lags() * s.n);
    const std::uint64_t nh = 1ull << (s.lags() * s.m);
    const double log_z = log_partition_function(model);
    double total = 0.0;
    for (std::uint64_t iv = 0; iv < nv; ++iv)
        for (std::uint64_t ih = 0; ih < nh; ++ih)
            total += std::exp(-energy(model, visible_from_index(s, iv),
                                      hidden_from_index(s, ih)) -
                              log_z);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("joint equals exp(-E)/Z compositionally") {
    const ModelShape s{2, 2, 1, 0.3};
    const Model model = seeded_model(s, 13);
    const BlockVisible v = visible_from_index(s, 9);
    const BlockHidden h = hidden_from_index(s, 6);
    const double expect =
        std::exp(-energy(model, v, h) - log_partition_function(model));
    CHECK(exact_joint(model, v, h) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("zero-weight log-likelihood is the uniform marginal") {
    const ModelShape s{2, 3, 1, 0.5};
    const Model model = Model::zeros(s);
    const BlockVisible v = visible_from_index(s, 3);
    CHECK(exact_loglik(model, v) ==
          doctest::Approx(-s.lags() * s.n * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("visible likelihoods sum to one") {
    const ModelShape s{2, 2, 1, 0.7};
    const Model model = seeded_model(s, 31);
    const std::uint64_t nv = 1ull << (s.lags() * s.n);
    double total = 0.0;
    for (std::uint64_t iv = 0; iv < nv; ++iv)
        total += std::exp(exact_loglik(model, visible_from_index(s, iv)));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    const Eigen::VectorXd marginal = exact_visible_marginal(model);
    CHECK(marginal.sum() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("factorized hidden sum equals brute-force hidden enumeration") {
    const ModelShape s{2, 2, 1, 0.4};
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Model model = seeded_model(s, seed);
        const BlockVisible v = visible_from_index(s, seed % 16);
        double acc = 0.0;
        const std::uint64_t nh = 1ull << (s.lags() * s.m);
        for (std::uint64_t ih = 0; ih < nh; ++ih)
            acc += std::exp(-energy(model, v, hidden_from_index(s, ih)));
        CHECK(free_energy(model, v) == doctest::Approx(-std::log(acc)).epsilon(1e-10));
    }
}

TEST_CASE("exact gradient matches central finite differences") {
    const ModelShape s{2, 2, 1, 0.5};
    const double step = 1e-5;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        Model model = seeded_model(s, seed);
        const BlockVisible v = visible_from_index(s, (seed * 7 + 3) % 16);
        const BlockWeights grad = exact_gradient(model, v);

        double max_rel = 0.0;
        auto fd_check = [&](double& param, double g) {
            const double saved = param;
            param = saved + step;
            const double plus = exact_loglik(model, v);
            param = saved - step;
            const double minus = exact_loglik(model, v);
            param = saved;
            const double fd = (plus - minus) / (2.0 * step);
            const double denom = std::max(1.0, std::abs(fd));
            max_rel = std::max(max_rel, std::abs(fd - g) / denom);
        };
        for (int i = 0; i <= s.p; ++i)
            for (int j = 0; j <= s.p; ++j)
                for (int a = 0; a < s.n; ++a)
                    for (int b = 0; b < s.m; ++b)
                        fd_check(model.weights.vh[i][j](a, b), grad.vh[i][j](a, b));
        for (int i = 0; i <= s.p; ++i)
            for (int a = 0; a < s.n; ++a)
                fd_check(model.weights.vbias[i](a), grad.vbias[i](a));
        for (int j = 0; j <= s.p; ++j)
            for (int b = 0; b < s.m; ++b)
                fd_check(model.weights.hbias[j](b), grad.hbias[j](b));
        CHECK(max_rel < 1e-6);
    }
}

TEST_CASE("gradient averaged over the uniform model distribution is zero") {
    const ModelShape s{2, 1, 1, 0.5};
    const Model model = Model::zeros(s);
    BlockWeights acc = Model::zeros(s).weights;
    const std::uint64_t nv = 1ull << (s.lags() * s.n);
    for (std::uint64_t iv = 0; iv < nv; ++iv) {
        const BlockWeights g = exact_gradient(model, visible_from_index(s, iv));
        for (int i = 0; i <= s.p; ++i)
            for (int j = 0; j <= s.p; ++j) acc.vh[i][j] += g.vh[i][j];
        for (int i = 0; i <= s.p; ++i) acc.vbias[i] += g.vbias[i];
        for (int j = 0; j <= s.p; ++j) acc.hbias[j] += g.hbias[j];
    }
    for (int i = 0; i <= s.p; ++i)
        for (int j = 0; j <= s.p; ++j)
            CHECK(acc.vh[i][j].cwiseAbs().maxCoeff() < 1e-10);
    for (int i = 0; i <= s.p; ++i) CHECK(acc.vbias[i].cwiseAbs().maxCoeff() < 1e-10);
    for (int j = 0; j <= s.p; ++j) CHECK(acc.hbias[j].cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("alpha=0 zeroes the cross-lag gradient blocks exactly") {
    const ModelShape s{2, 2, 1, 0.0};
    const Model model = seeded_model(s, 77);
    const BlockWeights grad = exact_gradient(model, visible_from_index(s, 11));
    CHECK(grad.vh[0][1].cwiseAbs().maxCoeff() == 0.0);
    CHECK(grad.vh[1][0].cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("conditional independence factorization holds") {
    const ModelShape s{2, 2, 1, 0.5};
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Model model = seeded_model(s, seed);
        const BlockVisible v = visible_from_index(s, (3 * seed) % 16);
        CHECK(factorization_max_error(model, v) < 1e-10);
    }
}

TEST_CASE("zero weights give all-half exact conditionals") {
    const ModelShape s{2, 2, 1, 0.5};
    const Model model = Model::zeros(s);
    const auto probs = exact_hidden_conditionals(model, visible_from_index(s, 6));
    for (const auto& block : probs)
        for (int u = 0; u < block.size(); ++u)
            CHECK(block(u) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("oracle rejects over-budget conditional requests") {
    const Model model = Model::zeros({1, 30, 0, 1.0});
    BlockVisible v{{Eigen::VectorXd::Zero(1)}};
    CHECK_THROWS_AS(exact_hidden_conditionals(model, v), CapacityError);
}
