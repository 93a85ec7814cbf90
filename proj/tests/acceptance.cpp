// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oun/experiment.hpp"
#include "oun/oracle.hpp"
#include "oun/verify.hpp"

using namespace oun;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id, what.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double now_s() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

// 1. Manufactured-solution convergence on the slab, order >= 1.9, under 1 s.
void criterion_1() {
    const double t0 = now_s();
    const auto slab = ConvexDomain::slab({1.0}, 1.0);
    const PointFn f = apply_operator(fn_cubic_neumann(1, 0), 1.0);
    std::vector<double> errs;
    for (int m : {65, 129, 257, 513}) {  // h = 1/32 .. 1/256
        GridSpec spec;
        spec.resolution = {m};
        const SolveResult res = solve(slab, f, 1.0, spec);
        const TensorGrid& g = res.u.tensor_grid();
        double maxerr = 0.0;
        for (int i = 0; i < m; ++i) {
            const double x = g.axes[0].node(i);
            maxerr = std::max(maxerr,
                              std::abs(res.u.values()[static_cast<std::size_t>(i)] -
                                       (x * x * x - 3.0 * x)));
        }
        errs.push_back(maxerr);
    }
    double min_order = 1e9;
    for (std::size_t i = 1; i < errs.size(); ++i)
        min_order = std::min(min_order, std::log2(errs[i - 1] / errs[i]));
    const double dt = now_s() - t0;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "order=%.3f, err(h=1/256)=%.2e, runtime=%.2fs", min_order,
                  errs.back(), dt);
    report(1, min_order >= 1.9 && dt < 1.0, "manufactured-solution convergence", buf);
}

// 2-4. Battery of estimate ratios, the f=1 equality case, the dimension-free
// constant and the sweep flatness.
void criteria_2_3_4() {
    const BatteryReport battery = run_default_battery();
    int cases = 0;
    double max_r1 = 0.0, max_r2 = 0.0, max_r3 = 0.0, max_w22 = 0.0;
    for (const CheckResult& c : battery.results) {
        if (c.name.rfind("estimate/", 0) != 0) continue;
        if (c.name.find("/r1") != std::string::npos) {
            ++cases;
            max_r1 = std::max(max_r1, c.lhs);
        }
        if (c.name.find("/r2") != std::string::npos) max_r2 = std::max(max_r2, c.lhs);
        if (c.name.find("/r3") != std::string::npos) max_r3 = std::max(max_r3, c.lhs);
        if (c.name.find("/w22_ratio") != std::string::npos) max_w22 = std::max(max_w22, c.lhs);
    }

    const auto slab = ConvexDomain::slab({1.0}, 1.0);
    GridSpec spec;
    spec.resolution = {257};
    const SolveResult one = solve(slab, [](PointView) { return 1.0; }, 1.0, spec);
    const double r1_dev = std::abs(one.report.r1 - 1.0);

    char buf[200];
    std::snprintf(buf, sizeof(buf), "%d cases, max r1=%.4f, max r2=%.4f, |r1(f=1)-1|=%.1e", cases,
                  max_r1, max_r2, r1_dev);
    report(2, cases >= 20 && max_r1 <= 1.05 && max_r2 <= 1.05 && r1_dev <= 1e-8,
           "a-priori estimates r1, r2 over the battery", buf);

    std::snprintf(buf, sizeof(buf), "max r3=%.4f over %d cases", max_r3, cases);
    report(3, max_r3 <= 1.05, "second-derivative bound r3 over the battery", buf);

    // dimension sweep 1..5 at each lambda; flat ratios and bounded aggregate
    const double t0 = now_s();
    const auto hs = ConvexDomain::half_space({1.0}, 0.0);
    double max_spread = 0.0, max_sweep_w22 = 0.0;
    for (double lam : {0.1, 1.0, 10.0}) {
        const auto entries = dimension_sweep(hs, fn_cubic_neumann(1, 0), {1, 2, 3, 4, 5}, lam);
        for (auto field : {&SweepEntry::r1, &SweepEntry::r2, &SweepEntry::r3}) {
            double lo = 1e300, hi = -1e300;
            for (const SweepEntry& e : entries) {
                lo = std::min(lo, e.*field);
                hi = std::max(hi, e.*field);
            }
            if (hi > 0.0) max_spread = std::max(max_spread, (hi - lo) / hi);
        }
        for (const SweepEntry& e : entries) max_sweep_w22 = std::max(max_sweep_w22, e.w22_ratio);
    }
    const double dt = now_s() - t0;
    std::snprintf(buf, sizeof(buf),
                  "max w22 ratio=%.4f (battery %.4f), sweep spread=%.2e, sweep runtime=%.1fs",
                  max_sweep_w22, max_w22, max_spread, dt);
    report(4,
           max_w22 <= 1.05 && max_sweep_w22 <= 1.05 && max_spread <= 1e-6 && dt < 120.0,
           "dimension-free constant and sweep flatness", buf);
}

// 5. Solve-and-lift equivalence on slab x R.
void criterion_5() {
    const auto slab = ConvexDomain::slab({1.0}, 1.0);
    const PointFn f = apply_operator(fn_cubic_neumann(1, 0), 1.0);
    GridSpec bg;
    bg.resolution = {65};
    GridSpec cg;
    cg.resolution = {33, 33};
    const EquivalenceReport manufactured = cylinder_equivalence(slab, f, 1.0, 1, bg, cg);
    const double h = 2.0 / 32.0;
    const EquivalenceReport constant =
        cylinder_equivalence(slab, [](PointView) { return 1.0; }, 1.0, 1, bg, cg);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "discrepancy=%.2e (tol %.2e), f=1 case=%.2e",
                  manufactured.l2_discrepancy, 5.0 * h * h, constant.l2_discrepancy);
    report(5, manufactured.l2_discrepancy <= 5.0 * h * h && constant.l2_discrepancy <= 1e-12,
           "solve-and-lift equivalence", buf);
}

// 6. Neumann trace decay under refinement on three battery cases.
void criterion_6() {
    struct Case {
        const char* name;
        ConvexDomain dom;
        PointFn f;
    };
    const std::vector<Case> cases = {
        {"slab cubic", ConvexDomain::slab({1.0}, 1.0), apply_operator(fn_cubic_neumann(1, 0), 1.0)},
        {"halfspace quadratic", ConvexDomain::half_space({1.0}, 0.0),
         apply_operator(fn_square(1, 0), 1.0)},
        {"slab bump", ConvexDomain::slab({1.0}, 1.0), fn_gauss_bump({0.2}, 0.5).as_fn()},
    };
    bool ok = true;
    std::string detail;
    for (const Case& c : cases) {
        std::vector<double> flux;
        for (int m : {65, 129, 257}) {
            GridSpec spec;
            spec.resolution = {m};
            flux.push_back(solve(c.dom, c.f, 1.0, spec).report.flux_norm);
        }
        const double order = std::min(std::log2(flux[0] / flux[1]), std::log2(flux[1] / flux[2]));
        ok = ok && order >= 1.0 && flux.back() <= 1e-3;
        char buf[80];
        std::snprintf(buf, sizeof(buf), "%s[order %.2f, finest %.1e] ", c.name, order, flux.back());
        detail += buf;
    }
    report(6, ok, "Neumann trace decay", detail);
}

// 7. Convexity lemma on the disk with 256 boundary nodes.
void criterion_7() {
    const auto ball2 = ConvexDomain::ball({0.0, 0.0}, 1.0);
    const Quadrature qb = boundary_quadrature(ball2, 256);
    const CheckResult c = check_convexity_lemma(ball2, fn_disk_neumann(), qb, 1e-8);
    char buf[120];
    std::snprintf(buf, sizeof(buf), "max boundary expression=%.3e at %zu nodes", c.lhs, qb.size());
    report(7, c.pass && qb.size() == 256, "convexity boundary lemma on the disk", buf);
}

// 8. Integration by parts: closed-form half-space identity and the 2-D ball.
void criterion_8() {
    const auto hs = ConvexDomain::half_space({1.0}, 0.0);
    const Quadrature qi = interior_quadrature(hs, 256);
    const Quadrature qb = boundary_quadrature(hs, 256);
    const CheckResult closed = check_ibp(hs, fn_one(1), fn_one(1), 0, qi, &qb, 1e-10);

    const auto ball2 = ConvexDomain::ball({0.0, 0.0}, 1.0);
    const Quadrature qi2 = interior_quadrature(ball2, 256);
    const Quadrature qb2 = boundary_quadrature(ball2, 256);
    const CheckResult ball = check_ibp(ball2, fn_coord(2, 0), fn_coord(2, 1), 0, qi2, &qb2, 1e-6);

    char buf[120];
    std::snprintf(buf, sizeof(buf), "half-space residual=%.2e, ball residual=%.2e",
                  closed.residual_or_slack, ball.residual_or_slack);
    report(8, closed.pass && ball.pass, "integration by parts with surface term", buf);
}

// 9. Log-Sobolev slack over the battery (normalized, constant 2); literal
// evaluation recorded.
void criterion_9() {
    const BatteryReport battery = run_default_battery();
    double min_slack = 1e300;
    bool literal_recorded = true;
    int n = 0;
    for (const CheckResult& c : battery.results) {
        if (c.name.rfind("logsob/", 0) != 0) continue;
        ++n;
        min_slack = std::min(min_slack, c.residual_or_slack);
        literal_recorded = literal_recorded && c.extra.count("literal_slack") > 0;
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "%d cases, min slack=%.2e, literal recorded=%s", n, min_slack,
                  literal_recorded ? "yes" : "no");
    report(9, n >= 3 && min_slack >= -1e-8 && literal_recorded, "log-Sobolev inequality", buf);
}

// 10. Oracle agreement on five 1-D/2-D cases at the stated budget.
void criterion_10() {
    struct Case {
        const char* name;
        ConvexDomain dom;
        PointFn f;
        double lam;
        Point x0;
        std::vector<int> grid;
    };
    const std::vector<Case> cases = {
        {"halfspace x^2 @-1", ConvexDomain::half_space({1.0}, 0.0),
         [](PointView x) { return x[0] * x[0]; }, 1.0, Point{-1.0}, {1025}},
        {"halfspace x @-0.5", ConvexDomain::half_space({1.0}, 0.0),
         [](PointView x) { return x[0]; }, 1.0, Point{-0.5}, {1025}},
        {"slab cubic @0.5", ConvexDomain::slab({1.0}, 1.0),
         [](PointView x) { return 4.0 * x[0] * x[0] * x[0] - 12.0 * x[0]; }, 1.0, Point{0.5},
         {1025}},
        {"ball1 x^2 @0", ConvexDomain::ball({0.0}, 1.0),
         [](PointView x) { return x[0] * x[0]; }, 1.0, Point{0.0}, {1025}},
        {"slab2 cubic @(0.5,0.3)", ConvexDomain::slab({1.0, 0.0}, 1.0),
         [](PointView x) { return 4.0 * x[0] * x[0] * x[0] - 12.0 * x[0]; }, 1.0,
         Point{0.5, 0.3}, {257, 129}},
    };
    FeynmanKacOptions opts;
    opts.antithetic = true;
    const double dt = 1e-3;
    bool ok = true;
    std::string detail;
    for (const Case& c : cases) {
        const double t0 = now_s();
        GridSpec spec;
        spec.resolution = c.grid;
        const SolveResult pde = solve(c.dom, c.f, c.lam, spec);
        const double ref = pde.u.eval_physical(c.x0, Interp::Cubic);
        const McEstimate est =
            feynman_kac(c.dom, c.f, c.lam, c.x0, 100000, dt, 20.0 / c.lam, 20260809, opts);
        const double budget = 3.0 * est.std_error + fk_bias_budget(dt, c.x0);
        const double dt_case = now_s() - t0;
        const bool pass = std::abs(est.value - ref) <= budget && dt_case < 120.0;
        ok = ok && pass;
        char buf[120];
        std::snprintf(buf, sizeof(buf), "%s[|d|=%.1e<=%.1e, %.0fs] ", c.name,
                      std::abs(est.value - ref), budget, dt_case);
        detail += buf;
    }
    report(10, ok, "Feynman-Kac oracle agreement", detail);
}

// 11. Byte-identical verify artifacts for a fixed seed.
void criterion_11() {
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const fs::path base = fs::temp_directory_path() / "oun_acceptance_det";
    fs::remove_all(base);
    ExperimentConfig cfg;
    cfg.command = "verify";
    cfg.oracle.seed = 314159;

    cfg.out_dir = (base / "a").string();
    const int rc_a = run_experiment(cfg);
    cfg.out_dir = (base / "b").string();
    const int rc_b = run_experiment(cfg);

    const bool checks_same = slurp(base / "a" / "checks.csv") == slurp(base / "b" / "checks.csv");
    const bool report_same = slurp(base / "a" / "report.json") == slurp(base / "b" / "report.json");
    char buf[120];
    std::snprintf(buf, sizeof(buf), "exit=(%d,%d), checks.csv %s, report.json %s", rc_a, rc_b,
                  checks_same ? "identical" : "DIFFER", report_same ? "identical" : "DIFFER");
    report(11, rc_a == kOk && rc_b == kOk && checks_same && report_same,
           "deterministic verify artifacts", buf);
}

}  // namespace

int main() {
    std::printf("acceptance suite (library %s)\n", kVersion);
    criterion_1();
    criteria_2_3_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "OK" : "FAILED", g_failures);
    return g_failures;
}
