#pragma once

// Independent oracles for expected values: closed forms from the error
// function, a plain Simpson integrator, central finite differences and
// Gaussian moments. Nothing here touches the library's quadrature or solver
// paths, so these can sit on the other side of every comparison.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace oracles {

inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// E X^{2k} for X ~ N(0,1) via the double-factorial recursion.
inline double gaussian_even_moment(int k) {
    double m = 1.0;
    for (int j = 1; j <= k; ++j) m *= (2.0 * j - 1.0);
    return m;
}

/// Composite Simpson on [a, b] with n panels (independent integrator).
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Central-difference gradient, O(h^2).
inline std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& f,
                                       std::vector<double> x, double h = 1e-5) {
    std::vector<double> g(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double xk = x[k];
        x[k] = xk + h;
        const double fp = f(x);
        x[k] = xk - h;
        const double fm = f(x);
        x[k] = xk;
        g[k] = (fp - fm) / (2.0 * h);
    }
    return g;
}

/// Central-difference Hessian, O(h^2); row-major n x n.
inline std::vector<double> fd_hessian(const std::function<double(std::span<const double>)>& f,
                                      std::vector<double> x, double h = 1e-4) {
    const std::size_t n = x.size();
    std::vector<double> hess(n * n);
    const double f0 = f(x);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double v;
            if (i == j) {
                const double xi = x[i];
                x[i] = xi + h;
                const double fp = f(x);
                x[i] = xi - h;
                const double fm = f(x);
                x[i] = xi;
                v = (fp - 2.0 * f0 + fm) / (h * h);
            } else {
                const double xi = x[i], xj = x[j];
                x[i] = xi + h;
                x[j] = xj + h;
                const double fpp = f(x);
                x[j] = xj - h;
                const double fpm = f(x);
                x[i] = xi - h;
                x[j] = xj + h;
                const double fmp = f(x);
                x[j] = xj - h;
                const double fmm = f(x);
                x[i] = xi;
                x[j] = xj;
                v = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            }
            hess[i * n + j] = v;
            hess[j * n + i] = v;
        }
    }
    return hess;
}

inline std::mt19937_64 test_rng(std::uint64_t seed = 0x5eed) { return std::mt19937_64(seed); }

}  // namespace oracles
