#pragma once

#include <string>

#include "oun/common.hpp"

namespace oun {

/// Scalar function with hand-coded gradient and Hessian. Derivative
/// correctness is load-bearing for the Hessian norms, so right-hand sides are
/// drawn from this compiled-in catalogue instead of a runtime expression
/// parser, and every entry is unit-tested against finite differences.
struct AnalyticFunction {
    std::string name;
    int dim = 0;  // expected input dimension (0 = any)
    std::function<double(PointView)> value;
    std::function<void(PointView, std::span<double>)> grad;
    std::function<void(PointView, std::span<double>)> hess;  // row-major n x n

    double operator()(PointView x) const { return value(x); }

    Point gradient(PointView x) const {
        Point g(x.size());
        grad(x, g);
        return g;
    }

    std::vector<double> hessian(PointView x) const {
        std::vector<double> h(x.size() * x.size());
        hess(x, h);
        return h;
    }

    double laplacian(PointView x) const {
        const std::vector<double> h = hessian(x);
        double tr = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) tr += h[i * x.size() + i];
        return tr;
    }

    PointFn as_fn() const { return value; }
};

inline AnalyticFunction fn_one(int dim) {
    AnalyticFunction f;
    f.name = "one";
    f.dim = dim;
    f.value = [](PointView) { return 1.0; };
    f.grad = [](PointView x, std::span<double> g) { std::fill(g.begin(), g.begin() + x.size(), 0.0); };
    f.hess = [](PointView x, std::span<double> h) {
        std::fill(h.begin(), h.begin() + x.size() * x.size(), 0.0);
    };
    return f;
}

/// Polynomial in a single coordinate: sum_j coeffs[j] * x_axis^j.
inline AnalyticFunction fn_poly1d(int dim, int axis, std::vector<double> coeffs,
                                  std::string name = "poly1d") {
    if (axis < 0 || axis >= dim) throw std::invalid_argument("fn_poly1d: axis out of range");
    AnalyticFunction f;
    f.name = std::move(name);
    f.dim = dim;
    auto horner = [coeffs](double t, int deriv) {
        double s = 0.0;
        for (int j = static_cast<int>(coeffs.size()) - 1; j >= deriv; --j) {
            double c = coeffs[static_cast<std::size_t>(j)];
            for (int d = 0; d < deriv; ++d) c *= (j - d);
            s = s * t + c;
        }
        return s;
    };
    f.value = [horner, axis](PointView x) { return horner(x[axis], 0); };
    f.grad = [horner, axis](PointView x, std::span<double> g) {
        std::fill(g.begin(), g.begin() + x.size(), 0.0);
        g[axis] = horner(x[axis], 1);
    };
    f.hess = [horner, axis, dim](PointView x, std::span<double> h) {
        std::fill(h.begin(), h.begin() + x.size() * x.size(), 0.0);
        h[static_cast<std::size_t>(axis) * dim + axis] = horner(x[axis], 2);
    };
    return f;
}

inline AnalyticFunction fn_coord(int dim, int axis) {
    return fn_poly1d(dim, axis, {0.0, 1.0}, "coord" + std::to_string(axis));
}

inline AnalyticFunction fn_square(int dim, int axis) {
    return fn_poly1d(dim, axis, {0.0, 0.0, 1.0}, "square" + std::to_string(axis));
}

/// x^3 - 3x in one coordinate; zero derivative at x = +-1, so it satisfies
/// the Neumann condition on the unit slab.
inline AnalyticFunction fn_cubic_neumann(int dim, int axis) {
    return fn_poly1d(dim, axis, {0.0, -3.0, 0.0, 1.0}, "cubic_neumann" + std::to_string(axis));
}

/// Product of coordinate powers: prod_k x_k^{exps[k]}.
inline AnalyticFunction fn_monomial(std::vector<int> exps, std::string name = "monomial") {
    const int dim = static_cast<int>(exps.size());
    AnalyticFunction f;
    f.name = std::move(name);
    f.dim = dim;
    auto powi = [](double x, int e) {
        double r = 1.0;
        for (int i = 0; i < e; ++i) r *= x;
        return r;
    };
    auto dpow = [powi](double x, int e, int deriv) {
        if (e < deriv) return 0.0;
        double c = 1.0;
        for (int d = 0; d < deriv; ++d) c *= (e - d);
        return c * powi(x, e - deriv);
    };
    f.value = [exps, powi](PointView x) {
        double v = 1.0;
        for (std::size_t k = 0; k < exps.size(); ++k) v *= powi(x[k], exps[k]);
        return v;
    };
    f.grad = [exps, powi, dpow](PointView x, std::span<double> g) {
        for (std::size_t k = 0; k < exps.size(); ++k) {
            double v = dpow(x[k], exps[k], 1);
            for (std::size_t l = 0; l < exps.size(); ++l)
                if (l != k) v *= powi(x[l], exps[l]);
            g[k] = v;
        }
    };
    f.hess = [exps, powi, dpow, dim](PointView x, std::span<double> h) {
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                double v = 1.0;
                if (i == j) {
                    v = dpow(x[i], exps[static_cast<std::size_t>(i)], 2);
                    for (int l = 0; l < dim; ++l)
                        if (l != i) v *= powi(x[l], exps[static_cast<std::size_t>(l)]);
                } else {
                    v = dpow(x[i], exps[static_cast<std::size_t>(i)], 1) *
                        dpow(x[j], exps[static_cast<std::size_t>(j)], 1);
                    for (int l = 0; l < dim; ++l)
                        if (l != i && l != j) v *= powi(x[l], exps[static_cast<std::size_t>(l)]);
                }
                h[static_cast<std::size_t>(i) * dim + j] = v;
            }
        }
    };
    return f;
}

/// Gaussian bump exp(-|x - c|^2 / (2 w^2)).
inline AnalyticFunction fn_gauss_bump(Point center, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("fn_gauss_bump: width must be positive");
    const int dim = static_cast<int>(center.size());
    AnalyticFunction f;
    f.name = "gauss_bump";
    f.dim = dim;
    const double iw2 = 1.0 / (width * width);
    auto val = [center, iw2](PointView x) {
        double s = 0.0;
        for (std::size_t k = 0; k < center.size(); ++k) {
            const double d = x[k] - center[k];
            s += d * d;
        }
        return std::exp(-0.5 * s * iw2);
    };
    f.value = val;
    f.grad = [center, iw2, val](PointView x, std::span<double> g) {
        const double v = val(x);
        for (std::size_t k = 0; k < center.size(); ++k) g[k] = -v * (x[k] - center[k]) * iw2;
    };
    f.hess = [center, iw2, val, dim](PointView x, std::span<double> h) {
        const double v = val(x);
        for (int i = 0; i < dim; ++i) {
            const double di = (x[i] - center[static_cast<std::size_t>(i)]) * iw2;
            for (int j = 0; j < dim; ++j) {
                const double dj = (x[j] - center[static_cast<std::size_t>(j)]) * iw2;
                h[static_cast<std::size_t>(i) * dim + j] = v * (di * dj - (i == j ? iw2 : 0.0));
            }
        }
    };
    return f;
}

/// exp(<c, x>); with c = e_1/2 this is the classical extremal direction of
/// the Gaussian log-Sobolev inequality.
inline AnalyticFunction fn_exp_linear(Point c) {
    const int dim = static_cast<int>(c.size());
    AnalyticFunction f;
    f.name = "exp_linear";
    f.dim = dim;
    auto val = [c](PointView x) { return std::exp(dot(c, x)); };
    f.value = val;
    f.grad = [c, val](PointView x, std::span<double> g) {
        const double v = val(x);
        for (std::size_t k = 0; k < c.size(); ++k) g[k] = c[k] * v;
    };
    f.hess = [c, val, dim](PointView x, std::span<double> h) {
        const double v = val(x);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                h[static_cast<std::size_t>(i) * dim + j] =
                    c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(j)] * v;
    };
    return f;
}

/// 1 + <c, x>, affine and positive near the origin; log-Sobolev test data.
inline AnalyticFunction fn_affine(Point c, double c0 = 1.0) {
    const int dim = static_cast<int>(c.size());
    AnalyticFunction f;
    f.name = "affine";
    f.dim = dim;
    f.value = [c, c0](PointView x) { return c0 + dot(c, x); };
    f.grad = [c](PointView x, std::span<double> g) {
        for (std::size_t k = 0; k < c.size(); ++k) g[k] = c[k];
        (void)x;
    };
    f.hess = [dim](PointView, std::span<double> h) {
        std::fill(h.begin(), h.begin() + static_cast<std::size_t>(dim) * dim, 0.0);
    };
    return f;
}

/// 2(x^2-y^2) - (x^2-y^2)(x^2+y^2) on the plane; expands to
/// (2x^2 - x^4) - (2y^2 - y^4). Its radial derivative vanishes on the unit
/// circle, which makes it the canonical test for the convexity boundary
/// inequality on the disk.
inline AnalyticFunction fn_disk_neumann() {
    AnalyticFunction f;
    f.name = "disk_neumann";
    f.dim = 2;
    f.value = [](PointView x) {
        auto p = [](double t) { return 2.0 * t * t - t * t * t * t; };
        return p(x[0]) - p(x[1]);
    };
    f.grad = [](PointView x, std::span<double> g) {
        g[0] = 4.0 * x[0] - 4.0 * x[0] * x[0] * x[0];
        g[1] = -4.0 * x[1] + 4.0 * x[1] * x[1] * x[1];
    };
    f.hess = [](PointView x, std::span<double> h) {
        h[0] = 4.0 - 12.0 * x[0] * x[0];
        h[1] = h[2] = 0.0;
        h[3] = -4.0 + 12.0 * x[1] * x[1];
    };
    return f;
}

/// Smooth bump supported exactly in the ball |x - c| < w:
/// exp(-1/(1 - |x-c|^2/w^2)) inside, identically zero outside.
inline AnalyticFunction fn_compact_bump(Point center, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("fn_compact_bump: width must be positive");
    const int dim = static_cast<int>(center.size());
    AnalyticFunction f;
    f.name = "compact_bump";
    f.dim = dim;
    const double iw2 = 1.0 / (width * width);
    // below t = 1 - 1e-3 the factor exp(-1/(1-t)) already underflows to zero
    auto tval = [center, iw2](PointView x) {
        double s = 0.0;
        for (std::size_t k = 0; k < center.size(); ++k) {
            const double d = x[k] - center[k];
            s += d * d;
        }
        return s * iw2;
    };
    f.value = [tval](PointView x) {
        const double t = tval(x);
        return t >= 1.0 - 1e-3 ? 0.0 : std::exp(-1.0 / (1.0 - t));
    };
    f.grad = [tval, center, iw2](PointView x, std::span<double> g) {
        const double t = tval(x);
        if (t >= 1.0 - 1e-3) {
            std::fill(g.begin(), g.begin() + x.size(), 0.0);
            return;
        }
        const double v = std::exp(-1.0 / (1.0 - t));
        const double dvdt = -v / ((1.0 - t) * (1.0 - t));
        for (std::size_t k = 0; k < center.size(); ++k)
            g[k] = dvdt * 2.0 * (x[k] - center[k]) * iw2;
    };
    f.hess = [tval, center, iw2, dim](PointView x, std::span<double> h) {
        const double t = tval(x);
        if (t >= 1.0 - 1e-3) {
            std::fill(h.begin(), h.begin() + x.size() * x.size(), 0.0);
            return;
        }
        const double v = std::exp(-1.0 / (1.0 - t));
        const double om = 1.0 - t;
        const double dvdt = -v / (om * om);
        const double d2vdt2 = v / (om * om * om * om) - 2.0 * v / (om * om * om);
        for (int i = 0; i < dim; ++i) {
            const double ti = 2.0 * (x[i] - center[static_cast<std::size_t>(i)]) * iw2;
            for (int j = 0; j < dim; ++j) {
                const double tj = 2.0 * (x[j] - center[static_cast<std::size_t>(j)]) * iw2;
                h[static_cast<std::size_t>(i) * dim + j] =
                    d2vdt2 * ti * tj + (i == j ? dvdt * 2.0 * iw2 : 0.0);
            }
        }
    };
    return f;
}

/// f + scale * g pointwise; derivatives combine linearly.
inline AnalyticFunction fn_sum(const AnalyticFunction& a, const AnalyticFunction& b,
                               double scale = 1.0) {
    AnalyticFunction f;
    f.name = a.name + "+" + b.name;
    f.dim = a.dim;
    f.value = [a, b, scale](PointView x) { return a.value(x) + scale * b.value(x); };
    f.grad = [a, b, scale](PointView x, std::span<double> g) {
        a.grad(x, g);
        Point gb(x.size());
        b.grad(x, gb);
        for (std::size_t k = 0; k < x.size(); ++k) g[k] += scale * gb[k];
    };
    f.hess = [a, b, scale](PointView x, std::span<double> h) {
        a.hess(x, h);
        std::vector<double> hb(x.size() * x.size());
        b.hess(x, hb);
        for (std::size_t k = 0; k < hb.size(); ++k) h[k] += scale * hb[k];
    };
    return f;
}

}  // namespace oun
