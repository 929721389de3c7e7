#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "prbm/baselines.hpp"
#include "prbm/checkpoint.hpp"
#include "prbm/data.hpp"
#include "prbm/eval.hpp"
#include "prbm/harness.hpp"
#include "prbm/model.hpp"
#include "prbm/oracle.hpp"
#include "prbm/sampler.hpp"
#include "prbm/trainer.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOpts {
    std::uint64_t seed = 0;
    std::string out = ".";
};

prbm::PredictMode parse_mode(const std::string& mode) {
    if (mode == "meanfield") return prbm::PredictMode::MeanField;
    if (mode == "stochastic") return prbm::PredictMode::Stochastic;
    throw CLI::ValidationError("mode must be meanfield or stochastic");
}

void write_config_echo(const std::string& path,
                       const std::map<std::string, std::string>& kv) {
    std::ofstream out(path, std::ios::trunc);
    for (const auto& [k, v] : kv) out << k << "=" << v << "\n";
}

void ensure_out_dir(const std::string& out) {
    if (!out.empty()) fs::create_directories(out);
}

Eigen::MatrixXd read_window_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw prbm::DataError("predict: cannot open window file " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) row.push_back(std::stod(field));
        if (!rows.empty() && row.size() != rows.front().size())
            throw prbm::DataError("predict: ragged window file");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw prbm::DataError("predict: empty window file");
    Eigen::MatrixXd m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    return m;
}

int run(int argc, char** argv) {
    CLI::App app{"p-RBM: memory-augmented restricted Boltzmann machine for "
                 "multivariate binary direction sequences"};
    app.require_subcommand(1);
    app.fallthrough();  // accept --seed/--out after the subcommand name
    app.set_config("--config")->configurable(false);

    CommonOpts common;
    app.add_option("--seed", common.seed, "master seed")->configurable(true);
    app.add_option("--out", common.out, "output directory")->configurable(true);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic direction dataset");
    int synth_n = 4, synth_p_true = 2, synth_t = 2000;
    double synth_coupling = 1.5;
    std::string synth_file = "synthetic.csv";
    synth->add_option("--n", synth_n, "number of series");
    synth->add_option("--p-true", synth_p_true, "true Markov order");
    synth->add_option("--T", synth_t, "number of bars");
    synth->add_option("--coupling", synth_coupling, "coupling strength");
    synth->add_option("--out-file", synth_file, "output CSV path");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "validate and summarize a bar CSV");
    std::string ingest_data;
    ingest->add_option("--data", ingest_data, "input CSV")->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "train a p-RBM with CD-k");
    std::string train_data;
    int train_m = 8, train_p = 3, train_k = 1, train_epochs = 1, train_minibatch = 1;
    double train_alpha = 0.5, train_eta = 0.001, train_fraction = 0.8;
    bool train_shuffle = false;
    train_cmd->add_option("--data", train_data, "input CSV")->required();
    train_cmd->add_option("--m", train_m, "hidden units per step");
    train_cmd->add_option("--p", train_p, "memory depth");
    train_cmd->add_option("--alpha", train_alpha, "forgetting rate");
    train_cmd->add_option("--eta", train_eta, "learning rate");
    train_cmd->add_option("--k", train_k, "Gibbs mixing steps");
    train_cmd->add_option("--epochs", train_epochs, "training epochs");
    train_cmd->add_option("--minibatch", train_minibatch, "minibatch size");
    train_cmd->add_option("--train-fraction", train_fraction, "train split fraction");
    train_cmd->add_flag("--shuffle", train_shuffle, "shuffle windows each epoch");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "score a checkpoint on the validation split");
    std::string eval_data, eval_ckpt, eval_mode = "meanfield";
    int eval_k_pred = 10;
    double eval_fraction = 0.8, eval_notional = 1.0;
    eval_cmd->add_option("--data", eval_data, "input CSV")->required();
    eval_cmd->add_option("--checkpoint", eval_ckpt, "checkpoint path")->required();
    eval_cmd->add_option("--mode", eval_mode, "meanfield|stochastic");
    eval_cmd->add_option("--k-pred", eval_k_pred, "prediction Gibbs steps");
    eval_cmd->add_option("--train-fraction", eval_fraction, "train split fraction");
    eval_cmd->add_option("--notional", eval_notional, "notional per trade");

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "predict directions from p past rows");
    std::string pred_ckpt, pred_window, pred_mode = "meanfield",
                pred_file = "predictions.csv";
    int pred_k = 10;
    predict_cmd->add_option("--checkpoint", pred_ckpt, "checkpoint path")->required();
    predict_cmd->add_option("--window", pred_window, "CSV with exactly p past rows, oldest first")->required();
    predict_cmd->add_option("--mode", pred_mode, "meanfield|stochastic");
    predict_cmd->add_option("--k-pred", pred_k, "prediction Gibbs steps");
    predict_cmd->add_option("--out-file", pred_file, "output CSV path");

    // compare
    auto* compare_cmd = app.add_subcommand("compare", "p-RBM vs VAR(1) vs RW on one dataset");
    std::string cmp_data, cmp_mode = "meanfield";
    int cmp_m = 8, cmp_p = 3, cmp_k = 1, cmp_epochs = 1, cmp_iterations = 5,
        cmp_k_pred = 10, cmp_minibatch = 1;
    double cmp_alpha = 0.5, cmp_eta = 0.001, cmp_fraction = 0.8;
    compare_cmd->add_option("--data", cmp_data, "input CSV")->required();
    compare_cmd->add_option("--m", cmp_m, "hidden units per step");
    compare_cmd->add_option("--p", cmp_p, "memory depth");
    compare_cmd->add_option("--alpha", cmp_alpha, "forgetting rate");
    compare_cmd->add_option("--eta", cmp_eta, "learning rate");
    compare_cmd->add_option("--k", cmp_k, "Gibbs mixing steps");
    compare_cmd->add_option("--epochs", cmp_epochs, "training epochs");
    compare_cmd->add_option("--minibatch", cmp_minibatch, "minibatch size");
    compare_cmd->add_option("--iterations", cmp_iterations, "table iterations");
    compare_cmd->add_option("--k-pred", cmp_k_pred, "prediction Gibbs steps");
    compare_cmd->add_option("--mode", cmp_mode, "meanfield|stochastic");
    compare_cmd->add_option("--train-fraction", cmp_fraction, "train split fraction");

    CLI11_PARSE(app, argc, argv);

    if (*synth) {
        const prbm::DirectionDataset data = prbm::synth_markov(
            synth_n, synth_p_true, synth_t, synth_coupling, common.seed);
        prbm::write_bars_csv(synth_file, data);
        std::cout << "wrote " << synth_file << " rows=" << data.rows()
                  << " symbols=" << data.cols() << "\n";
        return 0;
    }

    if (*ingest) {
        const prbm::BarTable bars = prbm::load_bars(ingest_data);
        std::cout << "rows=" << bars.open.rows() << " symbols=" << bars.symbols.size()
                  << " dropped=" << bars.dropped_rows << "\n";
        return 0;
    }

    if (*train_cmd) {
        ensure_out_dir(common.out);
        const prbm::DirectionDataset data =
            prbm::directions(prbm::load_bars(train_data));
        const auto windows = prbm::make_windows(data, train_p);
        const auto split = prbm::split_windows(windows, train_fraction);

        prbm::ModelShape shape{data.cols(), train_m, train_p, train_alpha};
        prbm::RngStream init_rng(common.seed);
        prbm::Model model = prbm::Model::gaussian_init(shape, 0.01, init_rng);

        prbm::TrainConfig cfg;
        cfg.eta = train_eta;
        cfg.k = train_k;
        cfg.epochs = train_epochs;
        cfg.seed = common.seed;
        cfg.minibatch = train_minibatch;
        cfg.shuffle = train_shuffle;

        const prbm::TrainTrace trace =
            prbm::train(model, split.train, split.validation, cfg);
        if (trace.diverged)
            std::cerr << "warning: training diverged, checkpoint holds last finite weights\n";

        prbm::save_checkpoint((fs::path(common.out) / "checkpoint.prbm").string(), model);
        trace.write_csv((fs::path(common.out) / "trace.csv").string());
        write_config_echo(
            (fs::path(common.out) / "config_echo.txt").string(),
            {{"alpha", std::to_string(train_alpha)},
             {"data", train_data},
             {"epochs", std::to_string(train_epochs)},
             {"eta", std::to_string(train_eta)},
             {"k", std::to_string(train_k)},
             {"m", std::to_string(train_m)},
             {"minibatch", std::to_string(train_minibatch)},
             {"n", std::to_string(data.cols())},
             {"p", std::to_string(train_p)},
             {"seed", std::to_string(common.seed)},
             {"shuffle", train_shuffle ? "1" : "0"},
             {"train_fraction", std::to_string(train_fraction)}});
        std::cout << "wrote " << (fs::path(common.out) / "checkpoint.prbm").string()
                  << " epochs=" << trace.records.size() << "\n";
        return trace.diverged ? 1 : 0;
    }

    if (*eval_cmd) {
        ensure_out_dir(common.out);
        const prbm::Model model = prbm::load_checkpoint(eval_ckpt);
        const prbm::DirectionDataset data =
            prbm::directions(prbm::load_bars(eval_data));
        if (data.cols() != model.shape.n)
            throw prbm::DataError("eval: dataset width does not match checkpoint n");
        const prbm::EvalReport report = prbm::evaluate_split(
            data, model.shape.p, eval_fraction, eval_notional,
            prbm::prbm_predictor(model, parse_mode(eval_mode), eval_k_pred,
                                 common.seed));
        {
            std::ofstream out(fs::path(common.out) / "report.csv");
            prbm::write_report_csv(out, report);
        }
        {
            std::ofstream out(fs::path(common.out) / "report.txt");
            prbm::write_report_text(out, report);
        }
        prbm::write_report_text(std::cout, report);
        return 0;
    }

    if (*predict_cmd) {
        const prbm::Model model = prbm::load_checkpoint(pred_ckpt);
        const Eigen::MatrixXd window = read_window_csv(pred_window);
        if (window.rows() != model.shape.p || window.cols() != model.shape.n)
            throw prbm::DataError("predict: window must have exactly p rows and n columns");
        // oldest row first in the file; lag 1 is the last row
        std::vector<prbm::Block> past(model.shape.p);
        for (int lag = 1; lag <= model.shape.p; ++lag)
            past[lag - 1] = window.row(window.rows() - lag).transpose();
        prbm::RngStream rng(common.seed);
        const prbm::Prediction pred = prbm::predict_direction(
            model, past, pred_k, parse_mode(pred_mode), rng);
        std::ofstream out(pred_file, std::ios::trunc);
        out << "unit,probability,direction\n";
        out.precision(17);
        for (int u = 0; u < model.shape.n; ++u)
            out << u << ',' << pred.probabilities(u) << ',' << pred.direction(u)
                << '\n';
        std::cout << "wrote " << pred_file << "\n";
        return 0;
    }

    if (*compare_cmd) {
        ensure_out_dir(common.out);
        const prbm::DirectionDataset data =
            prbm::directions(prbm::load_bars(cmp_data));
        const auto windows = prbm::make_windows(data, cmp_p);
        const auto split = prbm::split_windows(windows, cmp_fraction);
        const prbm::PredictMode mode = parse_mode(cmp_mode);

        std::vector<prbm::NamedPredictor> models;
        models.push_back({"p-RBM", [&](std::uint64_t iter_seed) {
            prbm::ModelShape shape{data.cols(), cmp_m, cmp_p, cmp_alpha};
            prbm::RngStream init_rng(iter_seed);
            prbm::Model model = prbm::Model::gaussian_init(shape, 0.01, init_rng);
            prbm::TrainConfig cfg;
            cfg.eta = cmp_eta;
            cfg.k = cmp_k;
            cfg.epochs = cmp_epochs;
            cfg.seed = iter_seed;
            cfg.minibatch = cmp_minibatch;
            prbm::train(model, split.train, split.validation, cfg);
            return prbm::evaluate_split(
                       data, cmp_p, cmp_fraction, 1.0,
                       prbm::prbm_predictor(model, mode, cmp_k_pred, iter_seed))
                .loss;
        }});
        models.push_back({"VAR(1)", [&](std::uint64_t) {
            return prbm::evaluate_split(data, cmp_p, cmp_fraction, 1.0,
                                        prbm::var1_predictor(data, cmp_p, cmp_fraction))
                .loss;
        }});
        models.push_back({"RW", [&](std::uint64_t) {
            return prbm::evaluate_split(data, cmp_p, cmp_fraction, 1.0,
                                        prbm::rw_predictor(data, cmp_p, cmp_fraction))
                .loss;
        }});

        const prbm::ComparisonTable table =
            prbm::compare_models(models, cmp_iterations, common.seed);
        table.write_text(std::cout);
        {
            std::ofstream out(fs::path(common.out) / "comparison.txt");
            table.write_text(out);
        }
        {
            std::ofstream out(fs::path(common.out) / "comparison.csv");
            table.write_csv(out);
        }
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
