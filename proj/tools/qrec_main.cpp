// qrec: build, complete and evaluate rating databases of quantum evolutions.
//
// Exit codes: 0 success, 1 usage error, 2 I/O error, 3 flagged result
// (training divergence or a degenerate rating scale).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qrec/database.hpp"
#include "qrec/experiments.hpp"
#include "qrec/version.hpp"

namespace {

using namespace qrec;

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct GenDbArgs {
    int qubits = 2;
    int states = 100;
    int unitaries = 100;
    std::string measure = "entropy";
    std::string state_kind = "pure";
    std::string evolution = "unitary";
    std::uint64_t seed = 1;
    double scale_generator = 1.0;
    std::string part_p = "0,1";
    std::string out;
};

int cmd_gen_db(const GenDbArgs& args) {
    DatabaseSpec spec;
    spec.n_qubits = args.qubits;
    spec.n_states = args.states;
    spec.n_evolutions = args.unitaries;
    spec.measure = measure_from_string(args.measure);
    spec.state_kind = state_kind_from_string(args.state_kind);
    spec.evolution_kind = evolution_kind_from_string(args.evolution);
    spec.seed = args.seed;
    spec.unitary_scale = args.scale_generator;
    const auto comma = args.part_p.find(',');
    if (comma == std::string::npos)
        throw ArgumentError("--part-p expects two comma-separated qubit indices");
    spec.part_p = {std::stoi(args.part_p.substr(0, comma)),
                   std::stoi(args.part_p.substr(comma + 1))};
    const RatingDatabase db = build_database(spec);
    write_database(db, args.out);
    std::cout << "wrote " << args.out << ".csv (" << db.n_rows << "x" << db.n_cols << ", measure "
              << to_string(spec.measure) << ")\n";
    for (const auto& w : db.warnings)
        std::cerr << "warning: " << w << "\n";
    return 0;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"rating databases of quantum evolutions, completed by matrix factorization"};
    app.set_config("--config");
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    // gen-db
    GenDbArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-db", "generate a rating database");
    gen_cmd->add_option("--qubits", gen.qubits, "register size")->capture_default_str();
    gen_cmd->add_option("--states", gen.states, "number of states (rows)")->capture_default_str();
    gen_cmd->add_option("--unitaries", gen.unitaries, "number of evolutions (columns)")
        ->capture_default_str();
    gen_cmd->add_option("--measure", gen.measure, "entropy|negativity|discord|fidelity")
        ->capture_default_str();
    gen_cmd->add_option("--state-kind", gen.state_kind, "pure|bures-mixed")->capture_default_str();
    gen_cmd->add_option("--evolution", gen.evolution, "unitary|channel-pair|local-nonlocal-mix")
        ->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed, "master seed")->capture_default_str();
    gen_cmd->add_option("--scale-generator", gen.scale_generator,
                        "anti-Hermitian generator scale for random unitaries")
        ->capture_default_str();
    gen_cmd->add_option("--part-p", gen.part_p, "two-qubit part rated when qubits > 2")
        ->capture_default_str();
    gen_cmd->add_option("--out", gen.out, "output file prefix")->required();

    // mask
    std::string mask_db, mask_out;
    double mask_fraction = -1.0;
    std::int64_t mask_count = -1;
    std::uint64_t mask_seed = 1;
    auto* mask_cmd = app.add_subcommand("mask", "hide random cells of a database");
    mask_cmd->add_option("db", mask_db, "input database prefix")->required();
    mask_cmd->add_option("--fraction", mask_fraction, "fraction of cells to hide");
    mask_cmd->add_option("--count", mask_count, "number of cells to hide");
    mask_cmd->add_option("--seed", mask_seed, "mask seed")->capture_default_str();
    mask_cmd->add_option("--out", mask_out, "output database prefix")->required();

    // noise
    std::string noise_db, noise_out;
    double noise_eta = 0.0;
    std::uint64_t noise_seed = 1;
    auto* noise_cmd = app.add_subcommand("noise", "blend known cells with uniform noise");
    noise_cmd->add_option("db", noise_db, "input database prefix")->required();
    noise_cmd->add_option("--eta", noise_eta, "noise weight in [0,1]")->required();
    noise_cmd->add_option("--seed", noise_seed, "noise seed")->capture_default_str();
    noise_cmd->add_option("--out", noise_out, "output database prefix")->required();

    // train
    std::string train_db, model_out;
    TrainConfig tc;
    auto* train_cmd = app.add_subcommand("train", "fit the latent factor model");
    train_cmd->add_option("db", train_db, "input database prefix")->required();
    train_cmd->add_option("--latent", tc.latent_dim, "latent dimension f")->capture_default_str();
    train_cmd->add_option("--lambda", tc.lambda, "regularization weight")->capture_default_str();
    train_cmd->add_option("--alpha", tc.alpha, "gradient step size")->capture_default_str();
    train_cmd->add_option("--iters", tc.max_iters, "iteration cap K")->capture_default_str();
    train_cmd->add_option("--rel-tol", tc.rel_tol, "relative objective-change stop")
        ->capture_default_str();
    train_cmd->add_option("--seed", tc.seed, "initialization seed")->capture_default_str();
    train_cmd->add_option("--model-out", model_out, "output model JSON path")->required();

    // predict
    std::string pred_model, pred_db, pred_out;
    auto* pred_cmd = app.add_subcommand("predict", "predict the hidden cells of a database");
    pred_cmd->add_option("--model", pred_model, "model JSON path")->required();
    pred_cmd->add_option("--db", pred_db, "database prefix")->required();
    pred_cmd->add_option("--out", pred_out, "output CSV path")->required();

    // eval
    std::string eval_pred, eval_truth;
    bool eval_scaled = false;
    auto* eval_cmd = app.add_subcommand("eval", "RMS deviation between prediction and truth CSVs");
    eval_cmd->add_option("--pred", eval_pred, "predictions CSV")->required();
    eval_cmd->add_option("--truth", eval_truth, "truth CSV")->required();
    eval_cmd->add_flag("--scaled", eval_scaled, "also report the range-scaled deviation");

    // experiment / timing
    ExperimentConfig ecfg;
    std::vector<std::string> names = experiment_names();
    auto* exp_cmd = app.add_subcommand("experiment", "run a named desk-scale experiment");
    exp_cmd->add_option("--name", ecfg.name, "experiment name")
        ->required()
        ->check(CLI::IsMember(names));
    exp_cmd->add_option("--scale", ecfg.scale, "fraction of the full-size study databases")
        ->capture_default_str();
    exp_cmd->add_option("--seed", ecfg.seed, "master seed")->capture_default_str();
    exp_cmd->add_option("--out-dir", ecfg.out_dir, "report directory")->capture_default_str();
    exp_cmd->add_flag("--extended", ecfg.extended, "include the slow off-default cases");
    TrainConfig etc;
    bool any_train_flag = false;
    auto train_opt = [&](CLI::App* cmd) {
        cmd->add_option("--latent", etc.latent_dim, "override: latent dimension")
            ->each([&](const std::string&) { any_train_flag = true; });
        cmd->add_option("--lambda", etc.lambda, "override: regularization")
            ->each([&](const std::string&) { any_train_flag = true; });
        cmd->add_option("--alpha", etc.alpha, "override: step size")
            ->each([&](const std::string&) { any_train_flag = true; });
        cmd->add_option("--iters", etc.max_iters, "override: iteration cap")
            ->each([&](const std::string&) { any_train_flag = true; });
        cmd->add_option("--train-seed", etc.seed, "override: training seed")
            ->each([&](const std::string&) { any_train_flag = true; });
    };
    train_opt(exp_cmd);

    ExperimentConfig tcfg;
    auto* timing_cmd = app.add_subcommand("timing", "run the direct-vs-recommender timing study");
    timing_cmd->add_option("--scale", tcfg.scale, "fraction of the full-size study databases")
        ->capture_default_str();
    timing_cmd->add_option("--seed", tcfg.seed, "master seed")->capture_default_str();
    timing_cmd->add_option("--out-dir", tcfg.out_dir, "report directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints the message and usage hint
        return code == 0 ? 0 : 1;
    }

    if (gen_cmd->parsed())
        return cmd_gen_db(gen);

    if (mask_cmd->parsed()) {
        RatingDatabase db = read_database(mask_db);
        std::size_t n_r = 0;
        if (mask_count >= 0)
            n_r = static_cast<std::size_t>(mask_count);
        else if (mask_fraction >= 0.0)
            n_r = static_cast<std::size_t>(mask_fraction * static_cast<double>(db.ratings.size()));
        else
            throw ArgumentError("mask: give --fraction or --count");
        Rng rng(mask_seed);
        mask_random(db, n_r, rng);
        write_database(db, mask_out);
        std::cout << "masked " << n_r << " cells -> " << mask_out << ".csv\n";
        return 0;
    }

    if (noise_cmd->parsed()) {
        RatingDatabase db = read_database(noise_db);
        Rng rng(noise_seed);
        inject_noise(db, noise_eta, rng);
        write_database(db, noise_out);
        std::cout << "noise eta=" << noise_eta << " -> " << noise_out << ".csv\n";
        return 0;
    }

    if (train_cmd->parsed()) {
        const RatingDatabase db = read_database(train_db);
        if (db.known_cells().empty())
            throw ArgumentError("train: database has no known ratings");
        const TrainResult tr = train_model(db, tc);
        std::ofstream out(model_out);
        if (!out)
            throw IoError("cannot write " + model_out);
        out << model_to_json(tr.model, tc, tr.trace) << '\n';
        std::cout << "trained " << tr.trace.iterations << " iterations, stop "
                  << to_string(tr.trace.stop) << ", final J "
                  << format_value(tr.trace.objective.back()) << "\n";
        if (tr.trace.stop == StopReason::Diverged) {
            std::cerr << "warning: objective diverged\n";
            return 3;
        }
        return 0;
    }

    if (pred_cmd->parsed()) {
        std::ifstream in(pred_model);
        if (!in)
            throw IoError("cannot read " + pred_model);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        const FactorModel model = model_from_json(text);
        const RatingDatabase db = read_database(pred_db);
        write_cells_csv(predict_hidden(model, db), pred_out);
        std::cout << "wrote predictions -> " << pred_out << "\n";
        return 0;
    }

    if (eval_cmd->parsed()) {
        const std::vector<RatingCell> pred = read_cells_csv(eval_pred);
        const std::vector<RatingCell> truth = read_cells_csv(eval_truth);
        std::map<std::pair<int, int>, double> truth_map;
        for (const auto& c : truth)
            truth_map[{c.row, c.col}] = c.value;
        std::vector<double> pv, av;
        for (const auto& c : pred) {
            const auto it = truth_map.find({c.row, c.col});
            if (it == truth_map.end())
                throw ArgumentError("eval: prediction cell missing from the truth file");
            pv.push_back(c.value);
            av.push_back(it->second);
        }
        const double delta = rms_deviation(pv, av);
        std::cout << "delta=" << format_value(delta) << "\n";
        if (eval_scaled) {
            const ScaledRms s = scaled_rms(pv, av);
            std::cout << "delta_scaled=" << format_value(s.value)
                      << " degenerate=" << (s.degenerate ? 1 : 0) << "\n";
            if (s.degenerate)
                return 3;
        }
        return 0;
    }

    const bool is_timing = timing_cmd->parsed();
    if (exp_cmd->parsed() || is_timing) {
        ExperimentConfig cfg = is_timing ? tcfg : ecfg;
        if (is_timing)
            cfg.name = "fig6-timing";
        if (any_train_flag) {
            cfg.train = etc;
            cfg.train_overridden = true;
        }
        const EvalReport report = run_experiment(cfg);
        write_report(report, cfg.out_dir);
        for (const auto& run : report.runs) {
            std::cout << cfg.name << " " << run.label << ": n_r=" << run.n_r
                      << " delta=" << format_value(run.delta);
            if (run.delta_scaled)
                std::cout << " delta'=" << format_value(*run.delta_scaled);
            if (run.extras.count("ratio"))
                std::cout << " ratio=" << format_value(run.extras.at("ratio"));
            for (const auto& f : run.flags)
                std::cout << " [" << f << "]";
            std::cout << "\n";
        }
        std::cout << "report -> " << cfg.out_dir << "/report.json\n";
        return report_flagged(report) ? 3 : 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const qrec::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
