// robustboost: experiment runner over the robust-learning reductions.
//
// Subcommands: robustify, mistake-learn, pac-lb, mistake-lb, vc-verify,
// bounds, sweep. Exit codes: 0 ok, 2 config/schema error, 3 invariant
// violation, 4 brute-force guard tripped.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <robustboost/experiment.hpp>

namespace {

constexpr int kExitSchema = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitTooLarge = 4;

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
    auto* cfg = cmd->add_option("--config", opts.config_path, "experiment config (JSON)");
    if (config_required) cfg->required();
    cmd->add_option("--seed", opts.seed, "override master_seed");
    cmd->add_option("--trials", opts.trials, "override trial count");
    cmd->add_option("--out", opts.out_dir, "output directory");
}

robustboost::ExperimentConfig load(const CommonOpts& opts, const std::string& kind) {
    robustboost::ExperimentConfig cfg;
    if (!opts.config_path.empty()) {
        cfg = robustboost::load_config(opts.config_path);
        if (cfg.kind != kind)
            throw robustboost::SchemaError("config.kind: expected '" + kind + "', got '" +
                                           cfg.kind + "'");
    } else {
        cfg.kind = kind;
    }
    if (opts.seed) cfg.master_seed = *opts.seed;
    if (opts.trials) cfg.trials = *opts.trials;
    return cfg;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path.string());
    out << content;
}

int run_kind(const CommonOpts& opts, const std::string& kind) {
    const auto cfg = load(opts, kind);
    const auto result = robustboost::run_experiment(cfg);
    std::filesystem::create_directories(opts.out_dir);
    const auto base = std::filesystem::path(opts.out_dir) / kind;
    write_file(base.string() + ".jsonl", robustboost::jsonl_output(cfg, result));
    write_file(base.string() + ".csv", robustboost::csv_summary(cfg, result));
    std::cout << robustboost::csv_summary(cfg, result);
    return 0;
}

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> values;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            values.push_back(std::stod(item));
        } catch (...) {
            throw robustboost::SchemaError("--values: non-numeric entry '" + item + "'");
        }
    }
    if (values.empty()) throw robustboost::SchemaError("--values: empty list");
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"robust-learning reduction experiments"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string axis;
    std::string values_csv;

    for (const std::string& kind :
         {"robustify", "mistake-learn", "pac-lb", "mistake-lb", "vc-verify", "bounds"}) {
        auto* cmd = app.add_subcommand(kind, "run " + kind + " trials");
        add_common(cmd, opts, kind != "bounds");
        cmd->callback([&opts, kind] {
            if (run_kind(opts, kind) != 0) throw CLI::RuntimeError(1);
        });
    }

    auto* sweep = app.add_subcommand("sweep", "sweep one parameter of a config");
    add_common(sweep, opts);
    sweep->add_option("--axis", axis, "parameter to sweep")->required();
    sweep->add_option("--values", values_csv, "comma-separated axis values")->required();
    sweep->callback([&] {
        auto cfg = robustboost::load_config(opts.config_path);
        if (opts.seed) cfg.master_seed = *opts.seed;
        if (opts.trials) cfg.trials = *opts.trials;
        const std::string csv = robustboost::sweep_csv(cfg, axis, parse_values(values_csv));
        std::filesystem::create_directories(opts.out_dir);
        write_file(std::filesystem::path(opts.out_dir) / ("sweep_" + axis + ".csv"), csv);
        std::cout << csv;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const robustboost::SchemaError& e) {
        std::cerr << "schema error: " << e.what() << '\n';
        return kExitSchema;
    } catch (const robustboost::TooLarge& e) {
        std::cerr << "guard tripped: " << e.what()
                  << " (raise ROBUSTBOOST_GUARD_LIMIT to override)\n";
        return kExitTooLarge;
    } catch (const std::exception& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return kExitInvariant;
    }
    return 0;
}
