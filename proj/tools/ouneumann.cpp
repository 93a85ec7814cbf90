// Experiment runner for the Gaussian Ornstein-Uhlenbeck Neumann solver.
//
// Subcommands: solve, verify, sweep, equivalence, oracle. Each reads an
// optional JSON config file; command-line flags override file values, which
// override defaults. Artifacts (report.json, checks.csv, sweep.csv) land in
// the output directory and embed the config hash and library version.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "oun/experiment.hpp"

namespace {

struct FlagOverrides {
    std::string config_path;
    std::string out_dir;
    double lambda = 0.0;
    int resolution = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string dims;
    std::string format;
};

void add_common_flags(CLI::App* cmd, FlagOverrides& fo) {
    cmd->add_option("--config", fo.config_path, "JSON config file");
    cmd->add_option("--out", fo.out_dir, "output directory");
    cmd->add_option("--lambda", fo.lambda, "lambda > 0")->check(CLI::PositiveNumber);
    cmd->add_option("--resolution", fo.resolution, "grid/quadrature resolution per axis")
        ->check(CLI::Range(8, 1 << 20));
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&fo](const std::uint64_t& v) { fo.seed = v; fo.seed_set = true; },
        "RNG seed");
    cmd->add_option("--dims", fo.dims, "dimension range a..b for sweep");
    cmd->add_option("--format", fo.format, "tabular artifact format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

int apply_and_run(const std::string& command, const FlagOverrides& fo) {
    oun::ExperimentConfig cfg;
    if (!fo.config_path.empty()) {
        std::ifstream in(fo.config_path, std::ios::binary);
        if (!in) {
            std::cerr << "error: cannot read config file " << fo.config_path << "\n";
            return oun::kConfigError;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        cfg = oun::parse_config(ss.str());
    }
    cfg.command = command;
    if (!fo.out_dir.empty()) cfg.out_dir = fo.out_dir;
    if (fo.lambda > 0.0) cfg.lambda = fo.lambda;
    if (fo.resolution > 0) cfg.resolution = {fo.resolution};
    if (fo.seed_set) cfg.oracle.seed = fo.seed;
    if (!fo.format.empty()) cfg.format = fo.format;
    if (!fo.dims.empty()) {
        const auto sep = fo.dims.find("..");
        if (sep == std::string::npos)
            throw oun::ConfigError("--dims expects the form a..b");
        cfg.dims_lo = std::stoi(fo.dims.substr(0, sep));
        cfg.dims_hi = std::stoi(fo.dims.substr(sep + 2));
    }
    const int rc = oun::run_experiment(cfg);
    std::cout << command << ": " << (rc == oun::kOk ? "pass" : "FAIL") << " (exit " << rc
              << "), artifacts in " << cfg.out_dir << "\n";
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian-weighted Ornstein-Uhlenbeck Neumann problem: solver and estimate checks"};
    app.require_subcommand(1);

    FlagOverrides fo;
    std::string picked;
    for (const char* name : {"solve", "verify", "sweep", "equivalence", "oracle"}) {
        CLI::App* cmd = app.add_subcommand(name);
        add_common_flags(cmd, fo);
        cmd->callback([&picked, name] { picked = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : oun::kConfigError;
    }

    try {
        return apply_and_run(picked, fo);
    } catch (const oun::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return oun::kConfigError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config parse error: " << e.what() << "\n";
        return oun::kConfigError;
    } catch (const oun::CgError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return oun::kSolverError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return oun::kSolverError;
    }
}
