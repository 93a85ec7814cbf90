#include <catch_amalgamated.hpp>

#include "oun/cylinder.hpp"
#include "oracles.hpp"

using namespace oun;
using Catch::Approx;

TEST_CASE("coordinate projection", "[cylinder]") {
    CHECK(project(Point{3.0, 7.0}, {Point{1.0, 0.0}})[0] == Approx(3.0));

    const double s2 = std::numbers::sqrt2 / 2.0;
    CHECK(project(Point{1.0, 1.0}, {Point{s2, s2}})[0] == Approx(std::numbers::sqrt2));

    // project after embed is the identity for axis-aligned directions
    const std::vector<Point> G = {Point{1.0, 0.0, 0.0}, Point{0.0, 1.0, 0.0}};
    const Point t{0.4, -1.7};
    const Point x{t[0], t[1], 9.9};
    const Point back = project(x, G);
    CHECK(back[0] == Approx(t[0]));
    CHECK(back[1] == Approx(t[1]));

    CHECK_THROWS_AS(project(Point{1.0, 1.0}, {Point{1.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("projection is an isometry on the span", "[cylinder][property]") {
    const double s2 = std::numbers::sqrt2 / 2.0;
    const std::vector<Point> G = {Point{s2, s2, 0.0}, Point{0.0, 0.0, 1.0}};
    auto rng = oracles::test_rng(37);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int rep = 0; rep < 20; ++rep) {
        const double a = u(rng), b = u(rng);
        Point x(3, 0.0);
        for (int k = 0; k < 3; ++k) x[k] = a * G[0][k] + b * G[1][k];
        CHECK(norm2(project(x, G)) == Approx(norm2(x)).margin(1e-12));
    }
}

TEST_CASE("lift of constants and measure preservation", "[cylinder]") {
    const auto slab = ConvexDomain::slab({1.0}, 1.0);
    GridSpec spec;
    spec.resolution = {65};
    const SolveResult base = solve(slab, [](PointView) { return 1.0; }, 2.0, spec);
    const LiftedFunction u = lift(base.u, {Point{1.0, 0.0}}, 2);
    for (double x0 : {-0.9, 0.0, 0.7})
        for (double x1 : {-3.0, 0.0, 5.0}) CHECK(u(Point{x0, x1}) == Approx(0.5).margin(1e-12));

    // || lift(v) ||^2 over the cylinder equals || v ||^2 over the base
    const PointFn f = apply_operator(fn_cubic_neumann(1, 0), 1.0);
    const SolveResult vres = solve(slab, f, 1.0, spec);
    const LiftedFunction lv = lift(vres.u, {Point{1.0, 0.0}}, 2);
    const auto cyl = ConvexDomain::cylinder(slab, 1);
    const Quadrature qc = interior_quadrature(cyl, std::vector<int>{128, 32});
    const Quadrature qb = interior_quadrature(slab, 128);
    const double cyl_norm = integrate(qc, [&](PointView x) { return lv(x) * lv(x); });
    const double base_norm =
        integrate(qb, [&](PointView x) { return vres.u.eval_physical(x, Interp::Cubic) *
                                                 vres.u.eval_physical(x, Interp::Cubic); });
    CHECK(cyl_norm == Approx(base_norm).epsilon(1e-8));
}

TEST_CASE("lifting commutes with the operator on analytic profiles", "[cylinder][property]") {
    const double s2 = std::numbers::sqrt2 / 2.0;
    const CylindricalFunction cf({Point{s2, s2}}, fn_cubic_neumann(1, 0), 2);
    const AnalyticFunction ambient = cf.as_analytic();
    const PointFn applied_ambient = apply_operator(ambient, 1.5);
    const PointFn applied_profile = apply_operator(fn_cubic_neumann(1, 0), 1.5);
    auto rng = oracles::test_rng(41);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int rep = 0; rep < 25; ++rep) {
        const Point x{u(rng), u(rng)};
        const Point t = cf.coords(x);
        CHECK(applied_ambient(x) == Approx(applied_profile(t)).margin(1e-10));
    }
}

TEST_CASE("solve-and-lift equals the direct cylinder solve", "[cylinder]") {
    const auto slab = ConvexDomain::slab({1.0}, 1.0);
    const PointFn f = apply_operator(fn_cubic_neumann(1, 0), 1.0);
    GridSpec bg;
    bg.resolution = {65};
    GridSpec cg;
    cg.resolution = {33, 33};

    SECTION("manufactured data within 5 h^2 of the coarser grid") {
        const EquivalenceReport rep = cylinder_equivalence(slab, f, 1.0, 1, bg, cg);
        const double h = 2.0 / 32.0;
        CHECK(rep.l2_discrepancy <= 5.0 * h * h);
        CHECK(rep.lift_clamps == 0);
        // Hessian norm carried by the profile coordinate only
        CHECK(rep.base_report.hs_hess ==
              Approx(rep.direct_report.hs_hess).epsilon(0.02));
    }

    SECTION("constant data is exact") {
        const EquivalenceReport rep =
            cylinder_equivalence(slab, [](PointView) { return 1.0; }, 1.0, 1, bg, cg);
        CHECK(rep.l2_discrepancy <= 1e-12);
    }
}

TEST_CASE("a rotated direction set sees the same profile", "[cylinder]") {
    // direct solve on the 45-degree slab in the plane vs the lifted 1-D solve
    const double s2 = std::numbers::sqrt2 / 2.0;
    const Point a{s2, s2};
    const auto slab_rot = ConvexDomain::slab(a, 1.0);
    const CylindricalFunction f_rot({a}, fn_poly1d(1, 0, {0.0, -12.0, 0.0, 4.0}), 2);
    GridSpec spec2;
    spec2.resolution = {65, 33};
    const SolveResult direct = solve(slab_rot, f_rot.as_analytic().as_fn(), 1.0, spec2);

    const auto slab1 = ConvexDomain::slab({1.0}, 1.0);
    const PointFn f1 = apply_operator(fn_cubic_neumann(1, 0), 1.0);
    GridSpec spec1;
    spec1.resolution = {65};
    const SolveResult base = solve(slab1, f1, 1.0, spec1);
    const LiftedFunction u = lift(base.u, {a}, 2);

    const Quadrature qi = interior_quadrature(slab_rot, std::vector<int>{128, 64});
    const double disc2 = integrate(qi, [&](PointView x) {
        const double d = u(x) - direct.u.eval_physical(x, Interp::Cubic);
        return d * d;
    });
    CHECK(std::sqrt(disc2) <= 5.0 * (2.0 / 32.0) * (2.0 / 32.0));
}

TEST_CASE("dimension sweep ratios are flat", "[cylinder][sweep]") {
    const auto hs = ConvexDomain::half_space({1.0}, 0.0);

    SECTION("constant data reports (1, 0, 0) in every dimension") {
        const auto entries = dimension_sweep(hs, fn_one(1), {1, 2, 3}, 1.0);
        for (const SweepEntry& e : entries) {
            CHECK(e.r1 == Approx(1.0).margin(1e-10));
            CHECK(e.r2 == Approx(0.0).margin(1e-10));
            CHECK(e.r3 == Approx(0.0).margin(1e-10));
        }
    }

    SECTION("cylindrical cubic data: relative spread within 1e-6") {
        const auto entries =
            dimension_sweep(hs, fn_cubic_neumann(1, 0), {1, 2, 3, 4}, 1.0);
        auto spread = [&](double SweepEntry::*field) {
            double lo = 1e300, hi = -1e300;
            for (const SweepEntry& e : entries) {
                lo = std::min(lo, e.*field);
                hi = std::max(hi, e.*field);
            }
            return (hi - lo) / hi;
        };
        CHECK(spread(&SweepEntry::r1) <= 1e-6);
        CHECK(spread(&SweepEntry::r2) <= 1e-6);
        CHECK(spread(&SweepEntry::r3) <= 1e-6);
        for (const SweepEntry& e : entries) {
            CHECK(e.r1 <= 1.05);
            CHECK(e.r2 <= 1.05);
            CHECK(e.r3 <= 1.05);
            CHECK(e.w22_ratio <= 1.05);
        }
    }

    SECTION("bad inputs") {
        CHECK_THROWS_AS(dimension_sweep(ConvexDomain::slab({1.0, 0.0}, 1.0), fn_one(1), {2}, 1.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(dimension_sweep(hs, fn_one(1), {7}, 1.0), std::invalid_argument);
    }
}
