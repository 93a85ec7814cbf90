#pragma once

#include "oun/report_io.hpp"

namespace oun {

/// Exit codes of an experiment run.
enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2, kSolverError = 3 };

namespace detail {

inline int run_solve(const ExperimentConfig& cfg) {
    const ConvexDomain dom = cfg.domain.build();
    SolveReport rep;
    nlohmann::json extra;
    if (dom.kind() == DomainKind::Ball && dom.dim() >= 2) {
        const SolveResult res =
            radial_solve(dom, cfg.rhs.build_radial(), cfg.lambda, dom.dim(), cfg.n_radial);
        rep = res.report;
        extra["solver"] = "radial";
    } else {
        GridSpec spec;
        spec.resolution = cfg.resolution;
        spec.truncation = cfg.truncation;
        const AnalyticFunction f = cfg.rhs.build(dom.dim());
        const SolveResult res = solve(dom, f.as_fn(), cfg.lambda, spec);
        rep = res.report;
        extra["solver"] = "tensor";
    }
    extra["report"] = solve_report_to_json(rep);
    const bool pass = rep.r1 <= 1.05 && rep.r2 <= 1.05 && rep.r3 <= 1.05 && rep.w22_ratio <= 1.05;
    extra["pass"] = pass;
    write_text_file(std::filesystem::path(cfg.out_dir) / "report.json",
                    artifact(cfg, extra).dump(2) + "\n");
    return pass ? kOk : kCheckFailed;
}

inline int run_verify(const ExperimentConfig& cfg) {
    BatteryOptions opts;
    opts.resolution = cfg.quad_resolution;
    opts.seed = cfg.oracle.seed;
    opts.truncation = cfg.truncation;
    const BatteryReport rep = run_default_battery(opts);
    const std::string hash = config_hash(cfg);
    write_text_file(std::filesystem::path(cfg.out_dir) / "checks.csv",
                    battery_to_csv(rep, hash));
    if (cfg.format == "json")
        write_text_file(std::filesystem::path(cfg.out_dir) / "checks.json",
                        artifact(cfg, nlohmann::json{{"checks", battery_to_json(rep)["checks"]}})
                                .dump(2) +
                            "\n");
    write_text_file(std::filesystem::path(cfg.out_dir) / "report.json",
                    artifact(cfg, battery_to_json(rep)).dump(2) + "\n");
    return rep.all_pass ? kOk : kCheckFailed;
}

inline int run_sweep(const ExperimentConfig& cfg) {
    const ConvexDomain base = cfg.domain.kind == "cylinder" && cfg.domain.base
                                  ? cfg.domain.base->build()
                                  : cfg.domain.build();
    if (base.dim() != 1) throw ConfigError("sweep: base domain must be one-dimensional");
    const AnalyticFunction profile = cfg.rhs.build(1);
    std::vector<int> dims;
    for (int n = cfg.dims_lo; n <= cfg.dims_hi; ++n) dims.push_back(n);
    SweepOptions opts;
    opts.profile_resolution = cfg.profile_resolution;
    opts.free_resolution = cfg.free_resolution;
    opts.truncation = cfg.truncation;
    const std::vector<SweepEntry> entries = dimension_sweep(base, profile, dims, cfg.lambda, opts);

    double spread = 0.0;
    bool ratios_ok = true;
    for (auto field : {&SweepEntry::r1, &SweepEntry::r2, &SweepEntry::r3}) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const SweepEntry& e : entries) {
            lo = std::min(lo, e.*field);
            hi = std::max(hi, e.*field);
            ratios_ok = ratios_ok && (e.*field) <= 1.05 && e.w22_ratio <= 1.05;
        }
        if (hi > 0.0) spread = std::max(spread, (hi - lo) / hi);
    }
    const bool pass = ratios_ok && spread <= 1e-6;

    const std::string hash = config_hash(cfg);
    if (cfg.format == "json")
        write_text_file(std::filesystem::path(cfg.out_dir) / "sweep.json",
                        artifact(cfg, nlohmann::json{{"rows", sweep_to_json(entries)}}).dump(2) +
                            "\n");
    else
        write_text_file(std::filesystem::path(cfg.out_dir) / "sweep.csv",
                        sweep_to_csv(entries, hash));
    write_text_file(std::filesystem::path(cfg.out_dir) / "report.json",
                    artifact(cfg, nlohmann::json{{"rows", sweep_to_json(entries)},
                                                 {"relative_spread", spread},
                                                 {"pass", pass}})
                            .dump(2) +
                        "\n");
    return pass ? kOk : kCheckFailed;
}

inline int run_equivalence(const ExperimentConfig& cfg) {
    const ConvexDomain base = cfg.domain.build();
    const AnalyticFunction f = cfg.rhs.build(base.dim());
    GridSpec base_grid;
    base_grid.resolution = {cfg.resolution.front()};
    base_grid.truncation = cfg.truncation;
    GridSpec cyl_grid;
    const int cyl_res = cfg.resolution.size() > 1 ? cfg.resolution[1]
                                                  : std::max(9, cfg.resolution.front() / 2 + 1);
    cyl_grid.resolution.assign(static_cast<std::size_t>(base.dim() + cfg.extra_dims), cyl_res);
    cyl_grid.truncation = cfg.truncation;
    const EquivalenceReport rep =
        cylinder_equivalence(base, f.as_fn(), cfg.lambda, cfg.extra_dims, base_grid, cyl_grid);

    double h = 0.0;  // coarser spacing along the constrained axis
    {
        const FrameDecomp dec = axis_decompose(base, cfg.truncation);
        const double len = dec.axes[0].hi - dec.axes[0].lo;
        h = std::max(len / (base_grid.resolution[0] - 1), len / (cyl_res - 1));
    }
    const double tol = 5.0 * h * h;
    const bool pass = rep.l2_discrepancy <= tol;
    write_text_file(
        std::filesystem::path(cfg.out_dir) / "report.json",
        artifact(cfg, nlohmann::json{{"l2_discrepancy", rep.l2_discrepancy},
                                     {"tolerance", tol},
                                     {"max_report_diff", rep.max_report_diff},
                                     {"lift_clamps", rep.lift_clamps},
                                     {"base_report", solve_report_to_json(rep.base_report)},
                                     {"direct_report", solve_report_to_json(rep.direct_report)},
                                     {"pass", pass}})
                .dump(2) +
            "\n");
    return pass ? kOk : kCheckFailed;
}

inline int run_oracle(const ExperimentConfig& cfg) {
    const ConvexDomain dom = cfg.domain.build();
    const AnalyticFunction f = cfg.rhs.build(dom.dim());
    const double t_max = cfg.oracle.t_max > 0.0 ? cfg.oracle.t_max : 20.0 / cfg.lambda;
    FeynmanKacOptions fko;
    fko.antithetic = cfg.oracle.antithetic;
    fko.reflection = cfg.oracle.reflection == "projection" ? ReflectionScheme::Projection
                                                           : ReflectionScheme::Symmetrized;
    Point x0 = cfg.oracle.x0;
    x0.resize(static_cast<std::size_t>(dom.dim()), 0.0);
    const McEstimate est = feynman_kac(dom, f.as_fn(), cfg.lambda, x0, cfg.oracle.n_paths,
                                       cfg.oracle.dt, t_max, cfg.oracle.seed, fko);

    nlohmann::json payload{{"estimate", mc_to_json(est)}, {"x0", x0}};
    bool pass = true;
    const FrameDecomp dec = axis_decompose(dom, cfg.truncation);
    if (cfg.oracle.compare_pde && dec.tensorable) {
        GridSpec spec;
        spec.resolution = cfg.resolution;
        spec.truncation = cfg.truncation;
        const SolveResult pde = solve(dom, f.as_fn(), cfg.lambda, spec);
        const double ref = pde.u.eval_physical(x0, Interp::Cubic);
        const double budget = 3.0 * est.std_error + fk_bias_budget(cfg.oracle.dt, x0);
        pass = std::abs(est.value - ref) <= budget;
        payload["pde_reference"] = ref;
        payload["abs_diff"] = std::abs(est.value - ref);
        payload["budget"] = budget;
    }
    payload["pass"] = pass;
    write_text_file(std::filesystem::path(cfg.out_dir) / "report.json",
                    artifact(cfg, payload).dump(2) + "\n");
    return pass ? kOk : kCheckFailed;
}

}  // namespace detail

/// Runs one experiment; writes artifacts under cfg.out_dir and returns the
/// process exit code (0 pass, 1 check failure, 2 config error, 3 solver
/// failure).
inline int run_experiment(const ExperimentConfig& cfg) {
    try {
        cfg.validate();
    } catch (const ConfigError&) {
        throw;
    }
    try {
        if (cfg.command == "solve") return detail::run_solve(cfg);
        if (cfg.command == "verify") return detail::run_verify(cfg);
        if (cfg.command == "sweep") return detail::run_sweep(cfg);
        if (cfg.command == "equivalence") return detail::run_equivalence(cfg);
        if (cfg.command == "oracle") return detail::run_oracle(cfg);
    } catch (const ConfigError&) {
        throw;
    } catch (const CgError&) {
        return kSolverError;
    } catch (const std::invalid_argument&) {
        return kSolverError;
    }
    throw ConfigError("unknown command '" + cfg.command + "'");
}

}  // namespace oun
