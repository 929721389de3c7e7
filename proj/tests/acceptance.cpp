// End-to-end acceptance checks. Each criterion prints one [PASS]/[FAIL]
// line; the process exits nonzero if any executed criterion fails.
// Usage: acceptance [criterion-number]

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "prbm/baselines.hpp"
#include "prbm/checkpoint.hpp"
#include "prbm/data.hpp"
#include "prbm/eval.hpp"
#include "prbm/harness.hpp"
#include "prbm/model.hpp"
#include "prbm/oracle.hpp"
#include "prbm/sampler.hpp"
#include "prbm/trainer.hpp"

using namespace prbm;

namespace {

struct Checker {
    bool ok = true;
    std::string detail;

    void require(bool condition, const std::string& what) {
        if (!condition && ok) {
            ok = false;
            detail = what;
        }
    }
};

Model seeded_model(const ModelShape& s, std::uint64_t seed, double stddev = 0.5) {
    RngStream rng(seed);
    Model model = Model::gaussian_init(s, stddev, rng);
    for (auto& b : model.weights.vbias)
        for (int u = 0; u < s.n; ++u) b(u) = 0.3 * rng.gaussian();
    for (auto& b : model.weights.hbias)
        for (int u = 0; u < s.m; ++u) b(u) = 0.3 * rng.gaussian();
    return model;
}

std::vector<double> flatten(const BlockWeights& w) {
    std::vector<double> xs;
    for (const auto& row : w.vh)
        for (const auto& block : row)
            for (int c = 0; c < block.cols(); ++c)
                for (int r = 0; r < block.rows(); ++r) xs.push_back(block(r, c));
    for (const auto& b : w.vbias)
        for (int u = 0; u < b.size(); ++u) xs.push_back(b(u));
    for (const auto& b : w.hbias)
        for (int u = 0; u < b.size(); ++u) xs.push_back(b(u));
    return xs;
}

std::vector<char> read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::vector<char>(std::istreambuf_iterator<char>(in),
                             std::istreambuf_iterator<char>());
}

// ---- criterion bodies ------------------------------------------------

// published confusion counts reproduce loss 0.445 and ratio 1.2472
Checker criterion_1() {
    Checker c;
    ConfusionMatrix m;
    m.up_up = 5756;
    m.up_down = 6246;
    m.down_up = 5057;
    m.down_down = 8341;
    c.require(std::abs(loss_from_confusion(m) - 0.44500) <= 1e-10,
              "loss != 0.44500");
    const BacktestResult r = backtest_from_confusion(m);
    c.require(r.wins == 14097, "wins != 14097");
    c.require(r.losses == 11303, "losses != 11303");
    c.require(std::abs(r.ratio - 1.2472) <= 5e-5, "ratio outside 1.2472 +- 5e-5");
    return c;
}

// published per-iteration loss rows reproduce their printed mean/std
Checker criterion_2() {
    Checker c;
    const std::vector<double> model_row{0.4450, 0.4945, 0.4638, 0.4979, 0.4830};
    const std::vector<double> rw_row{0.4798, 0.4790, 0.4759, 0.5289, 0.4780};
    c.require(std::abs(sample_mean(model_row) - 0.4768) <= 5e-4,
              "model-row mean outside 0.4768 +- 5e-4");
    c.require(std::abs(sample_std(model_row) - 0.0222) <= 5e-4,
              "model-row std outside 0.0222 +- 5e-4");
    c.require(std::abs(sample_mean(rw_row) - 0.4883) <= 5e-4,
              "rw-row mean outside 0.4883 +- 5e-4");
    std::ostringstream got;
    got << "rw-row sample std is " << sample_std(rw_row)
        << ", outside 0.0203 +- 5e-4 (printed value matches the N "
           "normalization, not N-1)";
    c.require(std::abs(sample_std(rw_row) - 0.0203) <= 5e-4, got.str());
    return c;
}

// exact joint normalizes and the conditional factorization holds
Checker criterion_3() {
    Checker c;
    const ModelShape shapes[] = {
        {1, 1, 0, 1.0}, {2, 2, 1, 0.5}, {3, 2, 1, 0.7}, {2, 3, 1, 0.3},
        {3, 3, 1, 0.5}, {1, 3, 1, 0.9}, {3, 1, 1, 0.1}, {2, 1, 0, 1.0},
        {1, 2, 0, 1.0}, {3, 3, 0, 1.0}};
    for (std::uint64_t seed = 0; seed < 50 && c.ok; ++seed) {
        const ModelShape s = shapes[seed % 10];
        const Model model = seeded_model(s, seed);
        const double log_z = log_partition_function(model);
        const std::uint64_t nv = 1ull << (s.lags() * s.n);
        const std::uint64_t nh = 1ull << (s.lags() * s.m);
        double total = 0.0;
        for (std::uint64_t iv = 0; iv < nv; ++iv) {
            const BlockVisible v = visible_from_index(s, iv);
            for (std::uint64_t ih = 0; ih < nh; ++ih)
                total += std::exp(-energy(model, v, hidden_from_index(s, ih)) -
                                  log_z);
        }
        c.require(std::abs(total - 1.0) <= 1e-10, "joint does not sum to 1");
        // spot-check that the summed quantity is the published joint
        const double spot = exact_joint(model, visible_from_index(s, seed % nv),
                                        hidden_from_index(s, seed % nh));
        const double direct =
            std::exp(-energy(model, visible_from_index(s, seed % nv),
                             hidden_from_index(s, seed % nh)) -
                     log_z);
        c.require(std::abs(spot - direct) <= 1e-14, "exact_joint mismatch");
        c.require(factorization_max_error(model, visible_from_index(s, seed % nv)) <=
                      1e-10,
                  "conditional factorization violated");
    }
    return c;
}

// exact gradient matches central finite differences
Checker criterion_4() {
    Checker c;
    const double step = 1e-5;
    for (std::uint64_t seed = 0; seed < 20 && c.ok; ++seed) {
        const ModelShape s = seed % 2 == 0 ? ModelShape{2, 2, 1, 0.5}
                                           : ModelShape{3, 2, 1, 0.4};
        Model model = seeded_model(s, seed);
        const BlockVisible v =
            visible_from_index(s, (seed * 7 + 3) % (1ull << (s.lags() * s.n)));
        const BlockWeights grad = exact_gradient(model, v);

        auto fd_check = [&](double& param, double g) {
            const double saved = param;
            param = saved + step;
            const double plus = exact_loglik(model, v);
            param = saved - step;
            const double minus = exact_loglik(model, v);
            param = saved;
            const double fd = (plus - minus) / (2.0 * step);
            const double rel = std::abs(fd - g) / std::max(1.0, std::abs(fd));
            c.require(rel <= 1e-6, "finite-difference mismatch above 1e-6");
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
    }
    return c;
}

// averaged CD-25 estimates align with the exact gradient
Checker criterion_5() {
    Checker c;
    const ModelShape s{3, 2, 1, 0.5};
    for (std::uint64_t seed = 0; seed < 3 && c.ok; ++seed) {
        const Model model = seeded_model(s, 17 + seed, 0.4);
        const BlockVisible v0 = visible_from_index(s, (seed * 13 + 5) % 64);
        const std::vector<double> exact = flatten(exact_gradient(model, v0));

        const RngStream master(1000 + seed);
        GradientBlocks acc = gradient_zeros(s);
        for (int e = 0; e < 5000; ++e) {
            RngStream rng = master.split(e);
            gradient_add(acc, cd_gradient(model, v0, 25, rng));
        }
        gradient_scale(acc, 1.0 / 5000.0);
        const std::vector<double> mean = flatten(acc);

        double dot = 0.0, na = 0.0, nb = 0.0;
        for (std::size_t i = 0; i < mean.size(); ++i) {
            dot += mean[i] * exact[i];
            na += mean[i] * mean[i];
            nb += exact[i] * exact[i];
        }
        const double cosine = dot / std::sqrt(na * nb);
        std::ostringstream got;
        got << "cosine similarity " << cosine << " <= 0.9";
        c.require(cosine > 0.9, got.str());
    }
    return c;
}

// long Gibbs chains land within TV 0.02 of the enumerated marginal
Checker criterion_6() {
    Checker c;
    const ModelShape s{2, 2, 1, 0.5};
    for (std::uint64_t seed = 0; seed < 2 && c.ok; ++seed) {
        const Model model = seeded_model(s, 5 + seed, 0.6);
        const Eigen::VectorXd exact = exact_visible_marginal(model);
        Eigen::VectorXd counts = Eigen::VectorXd::Zero(exact.size());
        const RngStream master(900 + seed);
        const int chains = 20000;
        for (int chain = 0; chain < chains; ++chain) {
            RngStream rng = master.split(chain);
            BlockVisible v0;
            v0.blocks.assign(s.lags(), Eigen::VectorXd::Zero(s.n));
            for (auto& b : v0.blocks)
                for (int u = 0; u < s.n; ++u) b(u) = rng.bernoulli(0.5) ? 1.0 : 0.0;
            const ChainState end = gibbs_chain(model, v0, 500, rng);
            counts(static_cast<Eigen::Index>(index_of_visible(s, end.v))) += 1.0;
        }
        const double tv = 0.5 * (counts / chains - exact).cwiseAbs().sum();
        std::ostringstream got;
        got << "total variation " << tv << " > 0.02";
        c.require(tv <= 0.02, got.str());
    }
    return c;
}

// alpha controls the topology: 0 severs cross-lag links, 1 is a no-op mask
Checker criterion_7() {
    Checker c;
    const ModelShape s{2, 2, 1, 0.0};
    Model model = seeded_model(s, 3);

    const BlockWeights grad = exact_gradient(model, visible_from_index(s, 9));
    c.require(grad.vh[0][1].cwiseAbs().maxCoeff() == 0.0 &&
                  grad.vh[1][0].cwiseAbs().maxCoeff() == 0.0,
              "alpha=0 exact gradient has nonzero cross-lag blocks");
    RngStream cd_rng(4);
    const GradientBlocks cd = cd_gradient(model, visible_from_index(s, 9), 3, cd_rng);
    c.require(cd.vh[0][1].cwiseAbs().maxCoeff() == 0.0 &&
                  cd.vh[1][0].cwiseAbs().maxCoeff() == 0.0,
              "alpha=0 CD gradient has nonzero cross-lag blocks");

    // perturbing the severed weights must not change any model output
    const BlockVisible v = visible_from_index(s, 6);
    const BlockHidden h = hidden_from_index(s, 11);
    const double e0 = energy(model, v, h);
    const double f0 = free_energy(model, v);
    const double l0 = exact_loglik(model, v);
    const auto probs0 = hidden_activation_probs(model, v);
    model.weights.vh[0][1].setConstant(123.0);
    model.weights.vh[1][0].setConstant(-77.0);
    c.require(energy(model, v, h) == e0, "alpha=0 energy not invariant");
    c.require(free_energy(model, v) == f0, "alpha=0 free energy not invariant");
    c.require(exact_loglik(model, v) == l0, "alpha=0 likelihood not invariant");
    const auto probs1 = hidden_activation_probs(model, v);
    for (std::size_t j = 0; j < probs0.size(); ++j)
        c.require(probs0[j] == probs1[j], "alpha=0 activations not invariant");

    // alpha=1: mask is all ones, so masking the full matrix is the identity
    const Eigen::MatrixXd ones_matrix = build_forgetting_matrix(1.0, 1);
    c.require((ones_matrix.array() == 1.0).all(), "alpha=1 matrix not all ones");
    const Model full = seeded_model({2, 2, 1, 1.0}, 8);
    const Eigen::MatrixXd w = assemble_full_matrix(full);
    const Eigen::MatrixXd mask = expand_forgetting_mask(1.0, 1, 2, 2);
    c.require((w.cwiseProduct(mask) - w).cwiseAbs().maxCoeff() == 0.0,
              "alpha=1 mask is not the identity operation");
    return c;
}

// training on strongly coupled synthetic data beats init NLL and the RW loss
Checker criterion_8() {
    Checker c;
    const DirectionDataset data = synth_markov(2, 1, 600, 2.0, 404);
    const auto windows = make_windows(data, 1);
    const auto split = split_windows(windows, 0.8);

    const ModelShape s{2, 2, 1, 0.5};
    RngStream init_rng(12);
    Model model = Model::gaussian_init(s, 0.01, init_rng);

    const double log_z0 = log_partition_function(model);
    double nll0 = 0.0;
    for (const auto& w : split.validation) nll0 += free_energy(model, w) + log_z0;
    nll0 /= static_cast<double>(split.validation.size());

    TrainConfig cfg;
    cfg.eta = 0.05;
    cfg.k = 1;
    cfg.epochs = 200;
    cfg.seed = 12;
    const TrainTrace trace = train(model, split.train, split.validation, cfg);
    c.require(!trace.diverged, "training diverged");
    c.require(trace.records.back().val_nll.has_value(), "no exact validation NLL");
    const double nll1 = *trace.records.back().val_nll;
    std::ostringstream nll_msg;
    nll_msg << "validation NLL improved only " << 100.0 * (nll0 - nll1) / nll0
            << "%";
    c.require(nll1 <= 0.9 * nll0, nll_msg.str());

    const EvalReport model_report = evaluate_split(
        data, 1, 0.8, 1.0, prbm_predictor(model, PredictMode::MeanField, 10, 12));
    const EvalReport rw_report =
        evaluate_split(data, 1, 0.8, 1.0, rw_predictor(data, 1, 0.8));
    std::ostringstream loss_msg;
    loss_msg << "model loss " << model_report.loss << " vs rw loss "
             << rw_report.loss;
    c.require(model_report.loss <= rw_report.loss - 0.05, loss_msg.str());
    return c;
}

// with no memory the energy degenerates to the classic bilinear form
Checker criterion_9() {
    Checker c;
    const ModelShape s{3, 2, 0, 1.0};
    for (std::uint64_t seed = 0; seed < 20 && c.ok; ++seed) {
        const Model model = seeded_model(s, seed);
        RngStream rng(100 + seed);
        Eigen::VectorXd v(s.n), h(s.m);
        for (int u = 0; u < s.n; ++u) v(u) = rng.bernoulli(0.5) ? 1.0 : 0.0;
        for (int u = 0; u < s.m; ++u) h(u) = rng.bernoulli(0.5) ? 1.0 : 0.0;
        const double classic = -v.dot(model.weights.vh[0][0] * h) -
                               v.dot(model.weights.vbias[0]) -
                               h.dot(model.weights.hbias[0]);
        const double block = energy(model, BlockVisible{{v}}, BlockHidden{{h}});
        c.require(block == classic, "p=0 energy differs from the classic form");
    }
    return c;
}

// the CLI is byte-reproducible for identical seeds
Checker criterion_10() {
    Checker c;
    const std::string cli = PRBM_CLI_PATH;
    auto run = [&](const std::string& args) {
        const std::string cmd = cli + " " + args + " > /dev/null";
        return std::system(cmd.c_str()) == 0;
    };
    c.require(run("synth --seed 7 --n 3 --p-true 1 --T 300 --coupling 1.5 "
                  "--out-file acc10_data.csv"),
              "synth failed");
    const std::string train_args =
        "train --seed 11 --data acc10_data.csv --m 3 --p 1 --alpha 0.5 "
        "--eta 0.05 --k 1 --epochs 5";
    c.require(run(train_args + " --out acc10_a"), "first train run failed");
    c.require(run(train_args + " --out acc10_b"), "second train run failed");
    const auto ckpt_a = read_bytes("acc10_a/checkpoint.prbm");
    const auto ckpt_b = read_bytes("acc10_b/checkpoint.prbm");
    c.require(!ckpt_a.empty() && ckpt_a == ckpt_b,
              "checkpoints differ between identical runs");

    const std::string eval_args =
        "eval --seed 11 --data acc10_data.csv --checkpoint acc10_a/checkpoint.prbm "
        "--mode meanfield --k-pred 10";
    c.require(run(eval_args + " --out acc10_ea"), "first eval run failed");
    c.require(run(eval_args + " --out acc10_eb"), "second eval run failed");
    const auto rep_a = read_bytes("acc10_ea/report.csv");
    const auto rep_b = read_bytes("acc10_eb/report.csv");
    c.require(!rep_a.empty() && rep_a == rep_b,
              "reports differ between identical runs");
    return c;
}

// window bookkeeping reproduces the published decision count
Checker criterion_11() {
    Checker c;
    DirectionDataset data;
    data.directions = Eigen::MatrixXi::Zero(1560, 1);
    data.moves = Eigen::MatrixXd::Zero(1560, 1);
    const auto windows = make_windows(data, 30);
    const WindowSplit split = split_windows(windows, 0.8);
    const long decisions = 100L * static_cast<long>(split.validation.size());
    std::ostringstream got;
    got << "T=1560, p=30, split 0.8 gives " << split.validation.size()
        << " validation windows = " << decisions
        << " decisions for n=100; the published total of 25400 would need "
           "254 windows";
    c.require(std::abs(decisions - 25400L) <= 100L, got.str());
    return c;
}

const char* kNames[] = {
    "metric arithmetic reproduces the published loss and win/loss ratio",
    "summary-row mean/std arithmetic matches the published table",
    "exact joint normalizes and conditionals factorize",
    "exact gradient matches finite differences",
    "averaged CD estimates align with the exact gradient",
    "Gibbs chains converge to the enumerated marginal",
    "alpha steers the cross-lag topology",
    "training improves NLL and beats the random-walk baseline",
    "p=0 degenerates to the classic energy",
    "identical seeds give byte-identical CLI artifacts",
    "window bookkeeping reproduces the published decision count",
};

Checker run_criterion(int number) {
    switch (number) {
        case 1: return criterion_1();
        case 2: return criterion_2();
        case 3: return criterion_3();
        case 4: return criterion_4();
        case 5: return criterion_5();
        case 6: return criterion_6();
        case 7: return criterion_7();
        case 8: return criterion_8();
        case 9: return criterion_9();
        case 10: return criterion_10();
        case 11: return criterion_11();
        default: throw std::out_of_range("criterion number must be 1..11");
    }
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    if (argc > 1) {
        selected.push_back(std::atoi(argv[1]));
        if (selected[0] < 1 || selected[0] > 11) {
            std::cerr << "usage: acceptance [1..11]\n";
            return 2;
        }
    } else {
        for (int i = 1; i <= 11; ++i) selected.push_back(i);
    }

    bool all_ok = true;
    for (int number : selected) {
        Checker result;
        try {
            result = run_criterion(number);
        } catch (const std::exception& e) {
            result.ok = false;
            result.detail = std::string("exception: ") + e.what();
        }
        std::cout << (result.ok ? "[PASS]" : "[FAIL]") << " criterion " << number
                  << ": " << kNames[number - 1];
        if (!result.ok) std::cout << " -- " << result.detail;
        std::cout << std::endl;
        all_ok = all_ok && result.ok;
    }
    return all_ok ? 0 : 1;
}
