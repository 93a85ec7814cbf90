#pragma once

#include "oun/domain.hpp"
#include "oun/rng.hpp"

namespace oun {

/// Monte-Carlo estimate with its sampling error and discretization settings.
struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    double dt = 0.0;
    double t_max = 0.0;
};

/// One Euler–Maruyama step of dX = -X dt + sqrt(2) dW followed by metric
/// projection onto the closed domain (projection-type reflection).
inline Point reflected_ou_step(PointView x, double dt, PointView noise, const ConvexDomain& dom) {
    if (x.size() != noise.size()) throw std::invalid_argument("reflected_ou_step: size mismatch");
    Point out(x.size());
    const double s = std::sqrt(2.0 * dt);
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * (1.0 - dt) + s * noise[i];
    dom.project_in_place(out);
    return out;
}

/// How excursions outside the domain are brought back:
///   Projection:  x <- P(x), the metric projection (weak order ~1/2).
///   Symmetrized: x <- 2 P(x) - x, mirrored across the boundary (weak order
///                ~1 on convex domains), falling back to projection if the
///                mirror point still lies outside.
enum class ReflectionScheme { Projection, Symmetrized };

struct FeynmanKacOptions {
    bool antithetic = false;
    ReflectionScheme reflection = ReflectionScheme::Symmetrized;
};

/// Estimates u(x0) = E int_0^infty e^{-lambda t} f(X_t) dt for the
/// Ornstein–Uhlenbeck diffusion reflected normally at the boundary, by a
/// left-endpoint Riemann sum over Euler paths. Paths are seeded per index
/// from (seed, path), so the estimate is independent of scheduling and
/// bit-reproducible for a fixed seed. With antithetic pairing the standard
/// error is taken over the independent pair averages.
inline McEstimate feynman_kac(const ConvexDomain& dom, const PointFn& f, double lam, PointView x0,
                              std::size_t n_paths, double dt, double t_max, std::uint64_t seed,
                              const FeynmanKacOptions& opts = {}) {
    if (!(lam > 0.0)) throw std::invalid_argument("feynman_kac: lambda must be positive");
    if (!(dt > 0.0) || n_paths == 0) throw std::invalid_argument("feynman_kac: bad dt or n_paths");
    const int n = dom.dim();
    if (static_cast<int>(x0.size()) != n) throw std::invalid_argument("feynman_kac: x0 dimension");
    const std::size_t steps = static_cast<std::size_t>(std::llround(t_max / dt));
    const double decay = std::exp(-lam * dt);
    const Point start = dom.project_to_closure(x0);

    const bool anti = opts.antithetic;
    const bool mirror = opts.reflection == ReflectionScheme::Symmetrized;
    const std::size_t n_samples = anti ? (n_paths + 1) / 2 : n_paths;
    std::vector<double> samples(n_samples);

    parallel_for(n_samples, [&](std::size_t s_idx) {
        Rng rng(seed, s_idx);
        Point xp(start), xm(start), z(static_cast<std::size_t>(n)), proj(static_cast<std::size_t>(n));
        double acc_p = 0.0, acc_m = 0.0, disc = 1.0;
        const double sn = std::sqrt(2.0 * dt);
        const bool pair = anti && !(s_idx == n_samples - 1 && n_paths % 2 == 1);
        auto reflect = [&](Point& x) {
            if (!mirror) {
                dom.project_in_place(x);
                return;
            }
            if (dom.g(x) > 0.0) {
                proj = x;
                dom.project_in_place(proj);
                for (int k = 0; k < n; ++k)
                    x[static_cast<std::size_t>(k)] =
                        2.0 * proj[static_cast<std::size_t>(k)] - x[static_cast<std::size_t>(k)];
                if (dom.g(x) > 0.0) dom.project_in_place(x);
            }
        };
        for (std::size_t j = 0; j < steps; ++j) {
            acc_p += disc * f(xp);
            if (pair) acc_m += disc * f(xm);
            disc *= decay;
            for (int k = 0; k < n; ++k) z[static_cast<std::size_t>(k)] = rng.next_normal();
            for (int k = 0; k < n; ++k)
                xp[static_cast<std::size_t>(k)] =
                    xp[static_cast<std::size_t>(k)] * (1.0 - dt) + sn * z[static_cast<std::size_t>(k)];
            reflect(xp);
            if (pair) {
                for (int k = 0; k < n; ++k)
                    xm[static_cast<std::size_t>(k)] =
                        xm[static_cast<std::size_t>(k)] * (1.0 - dt) - sn * z[static_cast<std::size_t>(k)];
                reflect(xm);
            }
        }
        samples[s_idx] = pair ? 0.5 * (acc_p + acc_m) * dt : acc_p * dt;
    });

    const double mean = pairwise_sum(samples) / static_cast<double>(n_samples);
    std::vector<double> dev2(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double d = samples[i] - mean;
        dev2[i] = d * d;
    }
    const double var =
        n_samples > 1 ? pairwise_sum(dev2) / static_cast<double>(n_samples - 1) : 0.0;

    McEstimate est;
    est.value = mean;
    est.std_error = std::sqrt(var / static_cast<double>(n_samples));
    est.n_paths = n_paths;
    est.dt = dt;
    est.t_max = t_max;
    return est;
}

/// Bias budget used by the oracle-vs-solver agreement battery.
inline double fk_bias_budget(double dt, PointView x0) {
    return 5.0 * dt * (1.0 + dot(x0, x0));
}

}  // namespace oun
