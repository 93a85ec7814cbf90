#include <catch_amalgamated.hpp>

#include "oun/oracle.hpp"
#include "oun/solver.hpp"
#include "oracles.hpp"

using namespace oun;
using Catch::Approx;

TEST_CASE("reflected step: drift, projection, diffusion coefficient", "[oracle]") {
    const auto ball = ConvexDomain::ball({0.0, 0.0}, 1.0);

    SECTION("zero noise contracts toward the origin and stays interior") {
        const Point x{0.4, -0.2};
        const Point y = reflected_ou_step(x, 0.01, Point{0.0, 0.0}, ball);
        CHECK(y[0] == Approx(0.4 * 0.99));
        CHECK(y[1] == Approx(-0.2 * 0.99));
        CHECK(ball.contains(y));
    }

    SECTION("outward noise from the boundary lands on the boundary") {
        const Point x{1.0, 0.0};
        const Point y = reflected_ou_step(x, 1e-3, Point{5.0, 0.0}, ball);
        CHECK(std::abs(ball.g(y)) <= 1e-12);
    }

    SECTION("step variance is 2 dt per coordinate on the whole space") {
        const auto ws = ConvexDomain::whole_space(2);
        const double dt = 0.01;
        Rng rng(2024, 0);
        const std::size_t n = 100000;
        double sum0 = 0.0, sum20 = 0.0, sum1 = 0.0, sum21 = 0.0;
        const Point x{0.3, -1.0};
        Point noise(2);
        for (std::size_t i = 0; i < n; ++i) {
            noise[0] = rng.next_normal();
            noise[1] = rng.next_normal();
            const Point y = reflected_ou_step(x, dt, noise, ws);
            const double d0 = y[0] - x[0] * (1.0 - dt);
            const double d1 = y[1] - x[1] * (1.0 - dt);
            sum0 += d0;
            sum20 += d0 * d0;
            sum1 += d1;
            sum21 += d1 * d1;
        }
        const double var0 = sum20 / n - (sum0 / n) * (sum0 / n);
        const double var1 = sum21 / n - (sum1 / n) * (sum1 / n);
        const double se = 2.0 * dt * std::sqrt(2.0 / n);  // sd of a chi^2-ish variance estimate
        CHECK(std::abs(var0 - 2.0 * dt) <= 3.0 * se);
        CHECK(std::abs(var1 - 2.0 * dt) <= 3.0 * se);
    }
}

TEST_CASE("feynman_kac integrates constants to 1/lambda", "[oracle]") {
    const auto ball = ConvexDomain::ball({0.0}, 1.0);
    const McEstimate est =
        feynman_kac(ball, [](PointView) { return 1.0; }, 1.0, Point{0.2}, 200, 1e-3, 20.0, 5);
    // left-endpoint Riemann sum bias of e^{-t} is about dt/2
    CHECK(est.value == Approx(1.0).margin(3.0 * est.std_error + 1e-3));
}

TEST_CASE("feynman_kac is bit-reproducible for a fixed seed", "[oracle]") {
    const auto hs = ConvexDomain::half_space({1.0}, 0.0);
    const PointFn f = [](PointView x) { return x[0] * x[0]; };
    const McEstimate a = feynman_kac(hs, f, 1.0, Point{-1.0}, 500, 2e-3, 10.0, 99);
    const McEstimate b = feynman_kac(hs, f, 1.0, Point{-1.0}, 500, 2e-3, 10.0, 99);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    const McEstimate c = feynman_kac(hs, f, 1.0, Point{-1.0}, 500, 2e-3, 10.0, 100);
    CHECK(a.value != c.value);
}

TEST_CASE("dt halving shrinks the discretization error", "[oracle]") {
    const auto hs = ConvexDomain::half_space({1.0}, 0.0);
    const PointFn f = [](PointView x) { return x[0] * x[0]; };
    FeynmanKacOptions opts;
    opts.antithetic = true;
    opts.reflection = ReflectionScheme::Projection;
    const Point x0{-1.0};
    std::vector<double> est;
    for (double dt : {8e-3, 4e-3, 2e-3})
        est.push_back(feynman_kac(hs, f, 1.0, x0, 30000, dt, 20.0, 4242, opts).value);
    const double d1 = std::abs(est[0] - est[1]);
    const double d2 = std::abs(est[1] - est[2]);
    CAPTURE(est, d1, d2);
    CHECK(d2 < d1);
}

TEST_CASE("oracle agrees with the deterministic solver", "[oracle][agreement]") {
    struct Case {
        const char* name;
        ConvexDomain dom;
        PointFn f;
        double lam;
        Point x0;
    };
    const std::vector<Case> cases = {
        {"halfspace x^2", ConvexDomain::half_space({1.0}, 0.0),
         [](PointView x) { return x[0] * x[0]; }, 1.0, Point{-1.0}},
        {"slab cubic", ConvexDomain::slab({1.0}, 1.0),
         [](PointView x) { return 4.0 * x[0] * x[0] * x[0] - 12.0 * x[0]; }, 1.0, Point{0.5}},
        {"ball1 x^2", ConvexDomain::ball({0.0}, 1.0),
         [](PointView x) { return x[0] * x[0]; }, 1.0, Point{0.0}},
        {"slab2 cubic", ConvexDomain::slab({1.0, 0.0}, 1.0),
         [](PointView x) { return 4.0 * x[0] * x[0] * x[0] - 12.0 * x[0]; }, 1.0,
         Point{0.5, 0.3}},
    };
    FeynmanKacOptions opts;
    opts.antithetic = true;
    const double dt = 4e-3;
    for (const Case& c : cases) {
        GridSpec spec;
        spec.resolution = c.dom.dim() == 1 ? std::vector<int>{513} : std::vector<int>{129, 65};
        const SolveResult pde = solve(c.dom, c.f, c.lam, spec);
        const double ref = pde.u.eval_physical(c.x0, Interp::Cubic);
        const McEstimate est =
            feynman_kac(c.dom, c.f, c.lam, c.x0, 20000, dt, 20.0 / c.lam, 314, opts);
        const double budget = 3.0 * est.std_error + fk_bias_budget(dt, c.x0);
        CAPTURE(c.name, est.value, ref, budget);
        CHECK(std::abs(est.value - ref) <= budget);
    }
}

TEST_CASE("disk: radial solver and Monte-Carlo oracle agree", "[oracle][agreement]") {
    const auto ball2 = ConvexDomain::ball({0.0, 0.0}, 1.0);
    auto f_r = [](double r) { return r * r; };
    const SolveResult pde = radial_solve(ball2, f_r, 1.0, 2, 257);
    const Point x0{0.3, 0.4};  // radius 0.5
    const double ref = pde.u.eval_physical(x0, Interp::Cubic);
    FeynmanKacOptions opts;
    opts.antithetic = true;
    const PointFn f = [](PointView x) { return x[0] * x[0] + x[1] * x[1]; };
    const double dt = 4e-3;
    const McEstimate est = feynman_kac(ball2, f, 1.0, x0, 20000, dt, 20.0, 271828, opts);
    CHECK(std::abs(est.value - ref) <= 3.0 * est.std_error + fk_bias_budget(dt, x0));
}

TEST_CASE("whole-space quadratic: solver is the reference", "[oracle]") {
    const auto ws = ConvexDomain::whole_space(1);
    const PointFn f = [](PointView x) { return x[0] * x[0]; };
    GridSpec spec;
    spec.resolution = {1025};
    const SolveResult pde = solve(ws, f, 1.0, spec);
    const double ref = pde.u.eval_physical(Point{0.0}, Interp::Cubic);
    CHECK(ref == Approx(2.0 / 3.0).margin(2e-4));  // analytic u(x) = (x^2 + 2)/3
    FeynmanKacOptions opts;
    opts.antithetic = true;
    const McEstimate est = feynman_kac(ws, f, 1.0, Point{0.0}, 20000, 2e-3, 20.0, 11, opts);
    CHECK(std::abs(est.value - ref) <= 3.0 * est.std_error + fk_bias_budget(2e-3, Point{0.0}));
}

TEST_CASE("feynman_kac validates inputs", "[oracle]") {
    const auto ball = ConvexDomain::ball({0.0}, 1.0);
    const PointFn one = [](PointView) { return 1.0; };
    CHECK_THROWS_AS(feynman_kac(ball, one, 0.0, Point{0.0}, 10, 1e-3, 1.0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(feynman_kac(ball, one, 1.0, Point{0.0}, 0, 1e-3, 1.0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(feynman_kac(ball, one, 1.0, Point{0.0, 0.0}, 10, 1e-3, 1.0, 1),
                    std::invalid_argument);
}
