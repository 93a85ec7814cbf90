#include <catch_amalgamated.hpp>

#include "oun/cylinder.hpp"
#include "oun/functions.hpp"
#include "oracles.hpp"

using namespace oun;
using Catch::Approx;

namespace {

void check_derivatives(const AnalyticFunction& f, std::initializer_list<Point> points) {
    for (const Point& x : points) {
        const auto g_fd = oracles::fd_gradient(f.value, x);
        const Point g = f.gradient(x);
        for (std::size_t k = 0; k < x.size(); ++k)
            CHECK(g[k] == Approx(g_fd[k]).margin(1e-6).epsilon(1e-5));
        const auto h_fd = oracles::fd_hessian(f.value, x);
        const auto h = f.hessian(x);
        for (std::size_t k = 0; k < h.size(); ++k)
            CHECK(h[k] == Approx(h_fd[k]).margin(2e-4).epsilon(5e-4));
    }
}

}  // namespace

TEST_CASE("catalogue derivatives agree with finite differences", "[functions]") {
    check_derivatives(fn_one(2), {Point{0.3, -0.8}});
    check_derivatives(fn_coord(2, 1), {Point{0.3, -0.8}});
    check_derivatives(fn_square(2, 0), {Point{0.7, 0.1}});
    check_derivatives(fn_cubic_neumann(1, 0), {Point{0.5}, Point{-1.2}});
    check_derivatives(fn_poly1d(2, 1, {1.0, -2.0, 0.5, 3.0, -0.25}),
                      {Point{0.4, 0.9}, Point{-1.0, -0.3}});
    check_derivatives(fn_monomial({2, 1}), {Point{0.8, -0.6}, Point{-0.5, 1.1}});
    check_derivatives(fn_monomial({1, 3}), {Point{0.8, -0.6}});
    check_derivatives(fn_gauss_bump({0.2, -0.4}, 0.7), {Point{0.5, 0.1}, Point{-0.7, -0.9}});
    check_derivatives(fn_exp_linear({0.5, -0.3}), {Point{0.2, 0.6}});
    check_derivatives(fn_affine({1.5, 0.25}, 2.0), {Point{0.2, 0.6}});
    check_derivatives(fn_disk_neumann(), {Point{0.3, 0.4}, Point{-0.8, 0.2}});
    check_derivatives(fn_sum(fn_square(2, 0), fn_gauss_bump({0.0, 0.0}, 1.0), 0.5),
                      {Point{0.4, -0.2}});
}

TEST_CASE("polynomial evaluation matches Horner by hand", "[functions]") {
    const auto p = fn_poly1d(1, 0, {2.0, -1.0, 3.0});  // 2 - x + 3x^2
    CHECK(p.value(Point{2.0}) == Approx(12.0));
    CHECK(p.gradient(Point{2.0})[0] == Approx(11.0));
    CHECK(p.hessian(Point{2.0})[0] == Approx(6.0));
}

TEST_CASE("disk test function has vanishing radial derivative on the unit circle",
          "[functions]") {
    const auto u = fn_disk_neumann();
    for (double th = 0.1; th < 6.3; th += 0.37) {
        const Point x{std::cos(th), std::sin(th)};
        const Point g = u.gradient(x);
        CHECK(std::abs(g[0] * x[0] + g[1] * x[1]) < 1e-13);
    }
}

TEST_CASE("cylindrical functions are constant across orthogonal translations",
          "[functions][cylinder]") {
    const double s2 = std::numbers::sqrt2 / 2.0;
    const CylindricalFunction f({Point{s2, s2, 0.0}}, fn_cubic_neumann(1, 0), 3);
    auto rng = oracles::test_rng(23);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int rep = 0; rep < 20; ++rep) {
        const Point x{u(rng), u(rng), u(rng)};
        // translations orthogonal to the direction: (1,-1,0)/sqrt(2) and e3
        const double a = u(rng), b = u(rng);
        const Point y{x[0] + a * s2, x[1] - a * s2, x[2] + b};
        CHECK(f(x) == Approx(f(y)).margin(1e-12));
    }
    check_derivatives(f.as_analytic(), {Point{0.4, -0.2, 1.0}});
}

TEST_CASE("cylindrical construction validates orthonormality", "[functions][cylinder]") {
    CHECK_THROWS_AS(CylindricalFunction({Point{1.0, 1.0}}, fn_one(1), 2), std::invalid_argument);
    CHECK_THROWS_AS(CylindricalFunction({Point{1.0, 0.0}, Point{1.0, 0.0}}, fn_one(2), 2),
                    std::invalid_argument);
}
