#pragma once

#include <atomic>
#include <chrono>

#include "oun/solver.hpp"

namespace oun {

namespace detail {

inline void check_orthonormal(const std::vector<Point>& dirs, double tol = 1e-12) {
    for (std::size_t i = 0; i < dirs.size(); ++i)
        for (std::size_t j = i; j < dirs.size(); ++j) {
            const double want = (i == j) ? 1.0 : 0.0;
            if (std::abs(dot(dirs[i], dirs[j]) - want) > tol)
                throw std::invalid_argument("directions are not orthonormal");
        }
}

}  // namespace detail

/// Coordinate vector (<l_1,x>, ..., <l_q,x>) of x against an orthonormal
/// direction list.
inline Point project(PointView x, const std::vector<Point>& directions) {
    detail::check_orthonormal(directions);
    Point t(directions.size());
    for (std::size_t i = 0; i < directions.size(); ++i) t[i] = dot(directions[i], x);
    return t;
}

/// f(x) = w(<l_1,x>, ..., <l_k,x>): a function of finitely many linear
/// coordinates, with derivatives pushed forward from the profile.
struct CylindricalFunction {
    std::vector<Point> directions;  // orthonormal, each of length ambient_dim
    AnalyticFunction profile;       // on R^k
    int ambient_dim = 0;

    CylindricalFunction(std::vector<Point> dirs, AnalyticFunction prof, int ambient)
        : directions(std::move(dirs)), profile(std::move(prof)), ambient_dim(ambient) {
        for (const Point& d : directions)
            if (static_cast<int>(d.size()) != ambient_dim)
                throw std::invalid_argument("CylindricalFunction: direction dimension mismatch");
        detail::check_orthonormal(directions);
    }

    double operator()(PointView x) const { return profile.value(coords(x)); }

    Point coords(PointView x) const {
        Point t(directions.size());
        for (std::size_t i = 0; i < directions.size(); ++i) t[i] = dot(directions[i], x);
        return t;
    }

    /// View as a full AnalyticFunction on the ambient space.
    AnalyticFunction as_analytic() const {
        const auto self = *this;
        const int n = ambient_dim;
        const int k = static_cast<int>(directions.size());
        AnalyticFunction f;
        f.name = "cylindrical(" + profile.name + ")";
        f.dim = n;
        f.value = [self](PointView x) { return self.profile.value(self.coords(x)); };
        f.grad = [self, n, k](PointView x, std::span<double> g) {
            const Point t = self.coords(x);
            Point gw(static_cast<std::size_t>(k));
            self.profile.grad(t, gw);
            std::fill(g.begin(), g.begin() + n, 0.0);
            for (int i = 0; i < k; ++i)
                for (int a = 0; a < n; ++a)
                    g[static_cast<std::size_t>(a)] +=
                        gw[static_cast<std::size_t>(i)] * self.directions[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)];
        };
        f.hess = [self, n, k](PointView x, std::span<double> h) {
            const Point t = self.coords(x);
            std::vector<double> hw(static_cast<std::size_t>(k) * k);
            self.profile.hess(t, hw);
            std::fill(h.begin(), h.begin() + static_cast<std::size_t>(n) * n, 0.0);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) {
                    const double hij = hw[static_cast<std::size_t>(i) * k + j];
                    if (hij == 0.0) continue;
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b)
                            h[static_cast<std::size_t>(a) * n + b] +=
                                hij * self.directions[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] *
                                self.directions[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)];
                }
        };
        return f;
    }
};

/// u(x) = v(pi_G(x)): a low-dimensional grid solution lifted to the ambient
/// space through the coordinate projection. Interpolation is cubic; points
/// projecting outside the base grid are clamped and counted.
class LiftedFunction {
  public:
    LiftedFunction(GridFunction v, std::vector<Point> directions, int ambient_dim)
        : v_(std::move(v)), directions_(std::move(directions)), ambient_dim_(ambient_dim),
          clamp_count_(std::make_shared<std::atomic<std::size_t>>(0)) {
        detail::check_orthonormal(directions_);
        if (static_cast<int>(directions_.size()) != v_.tensor_grid().dim())
            throw std::invalid_argument("lift: direction count must match base grid dimension");
    }

    double operator()(PointView x) const {
        Point t(directions_.size());
        for (std::size_t i = 0; i < directions_.size(); ++i) t[i] = dot(directions_[i], x);
        const TensorGrid& g = v_.tensor_grid();
        Point y(g.dim());
        g.frame.to_frame(t, y);
        bool clamped = false;
        const double val = v_.eval_frame(y, Interp::Cubic, &clamped);
        if (clamped) clamp_count_->fetch_add(1, std::memory_order_relaxed);
        return val;
    }

    std::size_t clamp_count() const { return clamp_count_->load(std::memory_order_relaxed); }
    int ambient_dim() const { return ambient_dim_; }
    const GridFunction& base() const { return v_; }

    PointFn as_fn() const {
        auto self = *this;
        return [self](PointView x) { return self(x); };
    }

  private:
    GridFunction v_;
    std::vector<Point> directions_;
    int ambient_dim_ = 0;
    std::shared_ptr<std::atomic<std::size_t>> clamp_count_;
};

inline LiftedFunction lift(GridFunction v, std::vector<Point> directions, int ambient_dim) {
    return LiftedFunction(std::move(v), std::move(directions), ambient_dim);
}

/// Solves on the base, lifts to the cylinder, solves the full problem
/// directly, and reports how far apart the two routes land.
struct EquivalenceReport {
    SolveReport base_report;
    SolveReport direct_report;
    double l2_discrepancy = 0.0;     // || lift(v) - u_direct ||_{L^2(cylinder,gamma)}
    double max_report_diff = 0.0;    // largest difference over the norm fields
    std::size_t lift_clamps = 0;
};

inline EquivalenceReport cylinder_equivalence(const ConvexDomain& base, const PointFn& f_base,
                                              double lam, int extra_dims,
                                              const GridSpec& base_grid, const GridSpec& cyl_grid,
                                              const SolveOptions& opts = {}) {
    const int q = base.dim();
    const int n = q + extra_dims;

    SolveResult vres = solve(base, f_base, lam, base_grid, opts);

    std::vector<Point> dirs;
    for (int i = 0; i < q; ++i) {
        Point e(static_cast<std::size_t>(n), 0.0);
        e[static_cast<std::size_t>(i)] = 1.0;
        dirs.push_back(std::move(e));
    }
    LiftedFunction u_lift = lift(vres.u, dirs, n);

    const ConvexDomain cyl = ConvexDomain::cylinder(base, extra_dims);
    const PointFn f_cyl = [f_base, q](PointView x) { return f_base(x.first(q)); };
    SolveResult dres = solve(cyl, f_cyl, lam, cyl_grid, opts);

    const TensorGrid& dgrid = dres.u.tensor_grid();
    std::vector<int> qres(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) qres[static_cast<std::size_t>(k)] = std::max(8, dgrid.axes[static_cast<std::size_t>(k)].m);
    const Quadrature qi = interior_quadrature(cyl, qres, cyl_grid.truncation);
    const double disc2 = integrate(qi, [&](PointView x) {
        const double d = u_lift(x) - dres.u.eval_physical(x, Interp::Cubic);
        return d * d;
    });

    EquivalenceReport rep;
    rep.base_report = vres.report;
    rep.direct_report = dres.report;
    rep.l2_discrepancy = std::sqrt(std::max(0.0, disc2));
    rep.lift_clamps = u_lift.clamp_count();
    auto fields = [](const SolveReport& r) {
        return std::array<double, 5>{r.l2_u, r.l2_grad, r.hs_hess, r.drift_norm, r.flux_norm};
    };
    const auto fb = fields(vres.report), fd = fields(dres.report);
    for (std::size_t i = 0; i < fb.size(); ++i)
        rep.max_report_diff = std::max(rep.max_report_diff, std::abs(fb[i] - fd[i]));
    return rep;
}

/// One row of the dimension-sweep experiment.
struct SweepEntry {
    int n = 0;
    double lambda = 0.0;
    double r1 = 0.0, r2 = 0.0, r3 = 0.0, w22_ratio = 0.0;
    int cg_iterations = 0;
    double wall_time_ms = 0.0;
};

struct SweepOptions {
    int profile_resolution = 65;  // nodes along the constrained axis
    int free_resolution = 9;      // nodes along each free axis
    double truncation = 8.0;
    SolveOptions solve;
};

/// Numerical analogue of the n -> infinity argument: solves on cylinders
/// over a 1-D base with cylindrical data f(x) = w(x_1) for each ambient
/// dimension and records the estimate ratios, which tensorization keeps
/// independent of the dimension.
inline std::vector<SweepEntry> dimension_sweep(const ConvexDomain& base_1d,
                                               const AnalyticFunction& profile,
                                               const std::vector<int>& dims, double lam,
                                               const SweepOptions& opts = {}) {
    if (base_1d.dim() != 1)
        throw std::invalid_argument("dimension_sweep: base domain must be one-dimensional");
    std::vector<SweepEntry> entries(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) {
        const int n = dims[i];
        if (n < 1 || n > 6) throw std::invalid_argument("dimension_sweep: dims must lie in 1..6");
        const auto t0 = std::chrono::steady_clock::now();
        const ConvexDomain dom = (n == 1) ? base_1d : ConvexDomain::cylinder(base_1d, n - 1);
        Point e1(static_cast<std::size_t>(n), 0.0);
        e1[0] = 1.0;
        const CylindricalFunction f(std::vector<Point>{e1}, profile, n);
        GridSpec spec;
        spec.truncation = opts.truncation;
        spec.resolution.assign(static_cast<std::size_t>(n), opts.free_resolution);
        spec.resolution[0] = opts.profile_resolution;
        SolveOptions sopts = opts.solve;
        if (sopts.boundary_resolution == 0) sopts.boundary_resolution = opts.free_resolution;
        const PointFn fn = [f](PointView x) { return f(x); };
        const SolveResult res = solve(dom, fn, lam, spec, sopts);
        const auto t1 = std::chrono::steady_clock::now();
        entries[i] = SweepEntry{n,
                                lam,
                                res.report.r1,
                                res.report.r2,
                                res.report.r3,
                                res.report.w22_ratio,
                                res.report.cg_iterations,
                                std::chrono::duration<double, std::milli>(t1 - t0).count()};
    }
    return entries;
}

}  // namespace oun
