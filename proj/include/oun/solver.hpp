#pragma once

#include "oun/functions.hpp"
#include "oun/grid.hpp"
#include "oun/quadrature.hpp"

namespace oun {

/// Norms, estimate ratios and solver diagnostics produced by one solve of
/// lambda u - Lu = f with natural Neumann boundary conditions.
struct SolveReport {
    double lambda = 0.0;
    double l2_u = 0.0;        // ||u||_{L^2(O,mu)}
    double l2_grad = 0.0;     // || |grad u| ||_{L^2}
    double hs_hess = 0.0;     // (int Tr[(D^2 u)^2] dmu)^{1/2}
    double l2_f = 0.0;        // ||f||_{L^2}
    double drift_norm = 0.0;  // ||<x, grad u>||_{L^2}
    double flux_norm = 0.0;   // (int_boundary <grad u, nu>^2 dsigma)^{1/2}
    int cg_iterations = 0;
    double cg_residual = 0.0;
    double r1 = 0.0, r2 = 0.0, r3 = 0.0;
    double w22_ratio = 0.0;
};

struct GridSpec {
    std::vector<int> resolution{65};  // per frame axis; single entry broadcasts
    double truncation = 8.0;
};

struct SolveOptions {
    double cg_tol = 1e-10;
    double cg_maxit_factor = 50.0;
    bool compute_norms = true;
    std::vector<int> norm_resolution;  // empty: match the grid axis counts
    int boundary_resolution = 0;       // 0: chosen from the dimension
    Interp norm_interp = Interp::Linear;
};

struct SolveResult {
    GridFunction u;
    SolveReport report;
};

/// Manufactured-solution generator: x -> lambda*u(x) - Laplace(u)(x) + <x, grad u(x)>.
inline PointFn apply_operator(const AnalyticFunction& u, double lam) {
    return [u, lam](PointView x) {
        const Point g = u.gradient(x);
        return lam * u.value(x) - u.laplacian(x) + dot(x, g);
    };
}

/// r1 = lambda^2 |u|^2 / |f|^2, r2 = lambda |grad u|^2 / |f|^2,
/// r3 = |Hess u|^2 / (2 |f|^2); all three are <= 1 for exact solutions.
inline void estimate_ratios(SolveReport& rep) {
    if (rep.l2_f == 0.0) throw std::domain_error("estimate_ratios: l2_f is zero");
    const double f2 = rep.l2_f * rep.l2_f;
    rep.r1 = rep.lambda * rep.lambda * rep.l2_u * rep.l2_u / f2;
    rep.r2 = rep.lambda * rep.l2_grad * rep.l2_grad / f2;
    rep.r3 = rep.hs_hess * rep.hs_hess / (2.0 * f2);
    const double c_lambda = 1.0 / (rep.lambda * rep.lambda) + 1.0 / rep.lambda + 2.0;
    rep.w22_ratio =
        (rep.l2_u * rep.l2_u + rep.l2_grad * rep.l2_grad + rep.hs_hess * rep.hs_hess) /
        (c_lambda * f2);
}

namespace detail {

/// One axis of the flux-form discretization: face conductances and cell
/// masses of the one-dimensional weight (Gaussian density, or r^{n-1} times
/// the Gaussian for the radial solver).
struct AxisOps {
    std::vector<double> face_c;  // size m-1: weight(mid) / h
    std::vector<double> cell_w;  // size m: integral of the weight over the cell
};

inline AxisOps cartesian_axis_ops(const AxisGrid& ax) {
    AxisOps ops;
    ops.face_c.resize(static_cast<std::size_t>(ax.m) - 1);
    ops.cell_w.resize(static_cast<std::size_t>(ax.m));
    for (int i = 0; i + 1 < ax.m; ++i)
        ops.face_c[static_cast<std::size_t>(i)] = gauss_density_1d(ax.node(i) + 0.5 * ax.h) / ax.h;
    for (int i = 0; i < ax.m; ++i) {
        const double a = (i == 0) ? ax.node(0) : ax.node(i) - 0.5 * ax.h;
        const double b = (i == ax.m - 1) ? ax.node(ax.m - 1) : ax.node(i) + 0.5 * ax.h;
        ops.cell_w[static_cast<std::size_t>(i)] = gauss_cdf(b) - gauss_cdf(a);
    }
    return ops;
}

inline double radial_weight(double r, int n_dim) {
    return std::pow(r, n_dim - 1) * std::exp(-0.5 * r * r);
}

inline AxisOps radial_axis_ops(const RadialGrid& g) {
    AxisOps ops;
    ops.face_c.resize(static_cast<std::size_t>(g.m) - 1);
    ops.cell_w.resize(static_cast<std::size_t>(g.m));
    for (int i = 0; i + 1 < g.m; ++i)
        ops.face_c[static_cast<std::size_t>(i)] =
            radial_weight(g.node(i) + 0.5 * g.h, g.ambient_dim) / g.h;
    const Rule1D gl = legendre_rule(4);
    for (int i = 0; i < g.m; ++i) {
        const double a = (i == 0) ? 0.0 : g.node(i) - 0.5 * g.h;
        const double b = (i == g.m - 1) ? g.radius : g.node(i) + 0.5 * g.h;
        double s = 0.0;
        for (std::size_t q = 0; q < gl.x.size(); ++q)
            s += gl.w[q] * radial_weight(0.5 * (a + b) + 0.5 * (b - a) * gl.x[q], g.ambient_dim);
        ops.cell_w[static_cast<std::size_t>(i)] = 0.5 * (b - a) * s;
    }
    return ops;
}

/// Kronecker-sum discretization of the weighted operator W(lambda I - L_h).
/// Zero-flux closure at every outer face imposes the Neumann condition and
/// keeps the system symmetric positive definite.
struct Discretization {
    std::vector<AxisOps> axes;
    std::vector<int> extents;
    std::vector<std::size_t> strides;
    std::vector<double> W;  // flat cell masses (product over axes)
    std::size_t n_nodes = 0;

    void finalize() {
        const int n = static_cast<int>(axes.size());
        strides.assign(static_cast<std::size_t>(n), 1);
        for (int k = n - 2; k >= 0; --k)
            strides[static_cast<std::size_t>(k)] =
                strides[static_cast<std::size_t>(k) + 1] * static_cast<std::size_t>(extents[k + 1]);
        n_nodes = strides[0] * static_cast<std::size_t>(extents[0]);
        W.assign(n_nodes, 1.0);
        for (int k = 0; k < n; ++k) {
            const std::size_t s = strides[static_cast<std::size_t>(k)];
            const int m = extents[static_cast<std::size_t>(k)];
            const std::size_t block = s * static_cast<std::size_t>(m);
            for (std::size_t b = 0; b < n_nodes / block; ++b)
                for (int i = 0; i < m; ++i) {
                    const double cw = axes[static_cast<std::size_t>(k)].cell_w[static_cast<std::size_t>(i)];
                    double* base = W.data() + b * block + static_cast<std::size_t>(i) * s;
                    for (std::size_t post = 0; post < s; ++post) base[post] *= cw;
                }
        }
    }

    /// out = lambda * W .* u + sum_axes face-difference stiffness.
    void apply(double lam, const std::vector<double>& u, std::vector<double>& out) const {
        const std::size_t n = n_nodes;
        parallel_for((n + 8191) / 8192, [&](std::size_t c) {
            const std::size_t lo = c * 8192, hi = std::min(n, lo + 8192);
            for (std::size_t i = lo; i < hi; ++i) out[i] = lam * W[i] * u[i];
        });
        for (std::size_t k = 0; k < axes.size(); ++k) {
            const std::size_t s = strides[k];
            const int m = extents[k];
            const std::size_t block = s * static_cast<std::size_t>(m);
            const std::size_t n_lines = (n_nodes / block) * s;
            const AxisOps& ops = axes[k];
            parallel_for(n_lines, [&](std::size_t line) {
                const std::size_t b = line / s, post = line % s;
                const std::size_t off = b * block + post;
                const double outer = W[off] / ops.cell_w[0];
                const double* uu = u.data() + off;
                double* oo = out.data() + off;
                for (int i = 0; i + 1 < m; ++i) {
                    const double c = outer * ops.face_c[static_cast<std::size_t>(i)];
                    const double d = c * (uu[static_cast<std::size_t>(i) * s] -
                                          uu[(static_cast<std::size_t>(i) + 1) * s]);
                    oo[static_cast<std::size_t>(i) * s] += d;
                    oo[(static_cast<std::size_t>(i) + 1) * s] -= d;
                }
            });
        }
    }

    std::vector<double> jacobi_diagonal(double lam) const {
        std::vector<double> M(n_nodes);
        for (std::size_t i = 0; i < n_nodes; ++i) M[i] = lam * W[i];
        for (std::size_t k = 0; k < axes.size(); ++k) {
            const std::size_t s = strides[k];
            const int m = extents[k];
            const std::size_t block = s * static_cast<std::size_t>(m);
            const AxisOps& ops = axes[k];
            for (std::size_t b = 0; b < n_nodes / block; ++b)
                for (std::size_t post = 0; post < s; ++post) {
                    const std::size_t off = b * block + post;
                    const double outer = W[off] / ops.cell_w[0];
                    for (int i = 0; i < m; ++i) {
                        double c = 0.0;
                        if (i > 0) c += ops.face_c[static_cast<std::size_t>(i) - 1];
                        if (i + 1 < m) c += ops.face_c[static_cast<std::size_t>(i)];
                        M[off + static_cast<std::size_t>(i) * s] += outer * c;
                    }
                }
        }
        return M;
    }
};

inline double dot_seq(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

struct CgStats {
    int iterations = 0;
    double rel_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradient on W(lambda I - L_h) u = W f.
/// The initial guess solves the constant mode exactly, so constant data is
/// reproduced without iteration.
inline CgStats pcg_solve(const Discretization& dis, double lam, const std::vector<double>& rhs_f,
                         std::vector<double>& x, double tol, double maxit_factor) {
    const std::size_t n = dis.n_nodes;
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = dis.W[i] * rhs_f[i];

    const double sum_g = pairwise_sum(g);
    const double sum_w = pairwise_sum(dis.W);
    const double mean_shift = sum_g / sum_w / lam;
    x.assign(n, mean_shift);

    const double g_norm = std::sqrt(dot_seq(g, g));
    CgStats stats;
    if (g_norm == 0.0) {
        x.assign(n, 0.0);
        return stats;
    }

    std::vector<double> r(n), z(n), p(n), q(n);
    dis.apply(lam, x, q);
    for (std::size_t i = 0; i < n; ++i) r[i] = g[i] - q[i];
    double r_norm = std::sqrt(dot_seq(r, r));
    stats.rel_residual = r_norm / g_norm;
    if (stats.rel_residual <= tol) return stats;

    const std::vector<double> M = dis.jacobi_diagonal(lam);
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / M[i];
    p = z;
    double rz = dot_seq(r, z);
    const int maxit = static_cast<int>(maxit_factor * std::sqrt(static_cast<double>(n))) + 10;
    for (int it = 1; it <= maxit; ++it) {
        dis.apply(lam, p, q);
        const double alpha = rz / dot_seq(p, q);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        r_norm = std::sqrt(dot_seq(r, r));
        stats.iterations = it;
        stats.rel_residual = r_norm / g_norm;
        if (stats.rel_residual <= tol) return stats;
        for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / M[i];
        const double rz_new = dot_seq(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw CgError("conjugate gradient did not converge: relative residual " +
                      fmt17(stats.rel_residual) + " after " + std::to_string(stats.iterations) +
                      " iterations",
                  stats.rel_residual, stats.iterations);
}

inline int auto_boundary_resolution(int dim) {
    if (dim <= 2) return 129;
    if (dim == 3) return 33;
    return 9;
}

}  // namespace detail

struct NormSet {
    double l2_u = 0.0, l2_grad = 0.0, hs_hess = 0.0, drift_norm = 0.0, flux_norm = 0.0;
};

/// Norms of a discrete solution measured against quadratures: values and
/// recovered derivative fields are interpolated (bilinearly by default) at
/// the quadrature nodes.
inline NormSet norms(const GridFunction& u, const ConvexDomain& dom, const Quadrature& interior,
                     const Quadrature* boundary = nullptr, Interp interp = Interp::Linear) {
    NormSet out;
    if (u.is_radial()) {
        // Radial path: Tr[(D^2 u)^2] = u''^2 + (n-1)(u'/r)^2 with u'/r -> u''(0).
        const RadialGrid& g = u.radial_grid();
        const int n_dim = g.ambient_dim;
        const detail::AxisOps ops = detail::radial_axis_ops(g);
        const double c_n = std::pow(2.0, 1.0 - 0.5 * n_dim) / std::tgamma(0.5 * n_dim);
        const int m = g.m;
        std::vector<double> du(static_cast<std::size_t>(m)), ddu(static_cast<std::size_t>(m));
        detail::diff1_line(u.values().data(), du.data(), m, g.h, 1);
        detail::diff2_line(u.values().data(), ddu.data(), m, g.h, 1);
        std::vector<double> a_u(du.size()), a_g(du.size()), a_h(du.size()), a_d(du.size());
        for (int i = 0; i < m; ++i) {
            const double r = g.node(i);
            const double w = c_n * ops.cell_w[static_cast<std::size_t>(i)];
            const double uor = (i == 0) ? ddu[0] : du[static_cast<std::size_t>(i)] / r;
            const double ui = u.values()[static_cast<std::size_t>(i)];
            a_u[static_cast<std::size_t>(i)] = w * ui * ui;
            a_g[static_cast<std::size_t>(i)] = w * du[static_cast<std::size_t>(i)] * du[static_cast<std::size_t>(i)];
            a_h[static_cast<std::size_t>(i)] =
                w * (ddu[static_cast<std::size_t>(i)] * ddu[static_cast<std::size_t>(i)] +
                     (n_dim - 1) * uor * uor);
            const double drift = r * du[static_cast<std::size_t>(i)];
            a_d[static_cast<std::size_t>(i)] = w * drift * drift;
        }
        out.l2_u = std::sqrt(pairwise_sum(a_u));
        out.l2_grad = std::sqrt(pairwise_sum(a_g));
        out.hs_hess = std::sqrt(pairwise_sum(a_h));
        out.drift_norm = std::sqrt(pairwise_sum(a_d));
        const double flux2 = du[static_cast<std::size_t>(m) - 1] * du[static_cast<std::size_t>(m) - 1] *
                             c_n * detail::radial_weight(g.radius, n_dim);
        out.flux_norm = std::sqrt(flux2);
        (void)dom;
        return out;
    }

    const TensorGrid& grid = u.tensor_grid();
    const int n = grid.dim();
    const std::vector<GridFunction> grads = recover_gradient(u);
    const std::vector<GridFunction> hessians = recover_hessian(u);
    std::vector<const GridFunction*> fields;
    fields.push_back(&u);
    for (const auto& gcomp : grads) fields.push_back(&gcomp);
    for (const auto& hcomp : hessians) fields.push_back(&hcomp);

    constexpr std::size_t kChunk = 8192;
    const std::size_t n_chunks = (interior.size() + kChunk - 1) / kChunk;
    std::vector<double> s_u(n_chunks, 0.0), s_g(n_chunks, 0.0), s_h(n_chunks, 0.0), s_d(n_chunks, 0.0);
    parallel_for(n_chunks, [&](std::size_t ci) {
        const std::size_t lo = ci * kChunk, hi = std::min(interior.size(), lo + kChunk);
        std::vector<double> vals(fields.size());
        Point y(n);
        std::vector<double> b_u, b_g, b_h, b_d;
        b_u.reserve(hi - lo);
        b_g.reserve(hi - lo);
        b_h.reserve(hi - lo);
        b_d.reserve(hi - lo);
        for (std::size_t i = lo; i < hi; ++i) {
            grid.frame.to_frame(interior.node(i), y);
            eval_many_frame(fields, y, vals, interp);
            const double w = interior.weights[i];
            const double uv = vals[0];
            double g2 = 0.0, drift = 0.0;
            for (int k = 0; k < n; ++k) {
                const double gk = vals[static_cast<std::size_t>(1 + k)];
                g2 += gk * gk;
                drift += y[k] * gk;
            }
            double h2 = 0.0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    const double hv = vals[static_cast<std::size_t>(1 + n + sym_index(a, b, n))];
                    h2 += hv * hv;
                }
            b_u.push_back(w * uv * uv);
            b_g.push_back(w * g2);
            b_h.push_back(w * h2);
            b_d.push_back(w * drift * drift);
        }
        s_u[ci] = pairwise_sum(b_u);
        s_g[ci] = pairwise_sum(b_g);
        s_h[ci] = pairwise_sum(b_h);
        s_d[ci] = pairwise_sum(b_d);
    });
    out.l2_u = std::sqrt(std::max(0.0, pairwise_sum(s_u)));
    out.l2_grad = std::sqrt(std::max(0.0, pairwise_sum(s_g)));
    out.hs_hess = std::sqrt(std::max(0.0, pairwise_sum(s_h)));
    out.drift_norm = std::sqrt(std::max(0.0, pairwise_sum(s_d)));

    if (boundary != nullptr && boundary->size() > 0) {
        std::vector<const GridFunction*> gfields;
        for (const auto& gcomp : grads) gfields.push_back(&gcomp);
        std::vector<double> contrib(boundary->size());
        parallel_for(boundary->size(), [&](std::size_t i) {
            Point y(n), nu_f(n);
            std::vector<double> gv(gfields.size());
            const PointView xb = boundary->node(i);
            grid.frame.to_frame(xb, y);
            eval_many_frame(gfields, y, gv, interp);
            const Point nu = dom.normal(xb);
            grid.frame.to_frame(nu, nu_f);
            const double fl = dot(gv, nu_f);
            contrib[i] = boundary->weights[i] * fl * fl;
        });
        out.flux_norm = std::sqrt(std::max(0.0, pairwise_sum(contrib)));
    }
    return out;
}

/// Weak-form residual |int (lambda u phi + <grad u, grad phi>) dmu - int f phi dmu|
/// for an analytic test function phi.
inline double weak_residual(const GridFunction& u, const ConvexDomain& dom, const PointFn& f,
                            double lam, const AnalyticFunction& phi, const Quadrature& interior,
                            Interp interp = Interp::Linear) {
    (void)dom;  // the quadrature already encodes the domain
    const TensorGrid& grid = u.tensor_grid();
    const int n = grid.dim();
    const std::vector<GridFunction> grads = recover_gradient(u);
    std::vector<const GridFunction*> fields;
    fields.push_back(&u);
    for (const auto& gcomp : grads) fields.push_back(&gcomp);
    std::vector<double> contrib(interior.size());
    parallel_for(interior.size(), [&](std::size_t i) {
        Point y(n), gphi_f(n);
        std::vector<double> vals(fields.size());
        const PointView x = interior.node(i);
        grid.frame.to_frame(x, y);
        eval_many_frame(fields, y, vals, interp);
        const Point gphi = phi.gradient(x);
        grid.frame.to_frame(gphi, gphi_f);
        double gg = 0.0;
        for (int k = 0; k < n; ++k) gg += vals[static_cast<std::size_t>(1 + k)] * gphi_f[k];
        const double pv = phi.value(x);
        contrib[i] = interior.weights[i] * (lam * vals[0] * pv + gg - f(x) * pv);
    });
    return std::abs(pairwise_sum(contrib));
}

/// Discrete weak solution of lambda u - Lu = f on the domain, flux form.
/// The operator is written Lu = N^{-1} div(N grad u); per axis the half-node
/// Gaussian fluxes are differenced, boundary faces carry zero flux, and the
/// resulting SPD system is solved matrix-free by preconditioned CG.
inline SolveResult solve(const ConvexDomain& dom, const PointFn& f, double lam,
                         const GridSpec& spec, const SolveOptions& opts = {}) {
    if (!(lam > 0.0)) throw std::invalid_argument("solve: lambda must be positive");
    const FrameDecomp dec = axis_decompose(dom, spec.truncation);
    if (!dec.tensorable)
        throw std::invalid_argument(
            "solve: domain is not tensor-resolvable (balls above 1-D are served by radial_solve)");
    const int n = static_cast<int>(dec.axes.size());
    int bounded_axes = 0;
    for (const AxisSpec& ax : dec.axes)
        if (!ax.unbounded) ++bounded_axes;
    if (bounded_axes > 4)
        throw std::invalid_argument("solve: tensor grids cap at 4 bounded axes");

    std::vector<AxisGrid> axes(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const int m = spec.resolution.size() == 1 ? spec.resolution[0]
                                                  : spec.resolution.at(static_cast<std::size_t>(k));
        if (m < 8) throw std::invalid_argument("solve: resolution too small (need >= 8 nodes/axis)");
        const AxisSpec& ax = dec.axes[static_cast<std::size_t>(k)];
        axes[static_cast<std::size_t>(k)] =
            AxisGrid{ax.lo, ax.hi, (ax.hi - ax.lo) / (m - 1), m, ax.boundary_lo, ax.boundary_hi};
    }
    auto grid = std::make_shared<TensorGrid>(TensorGrid::build(std::move(axes), dec.frame));

    detail::Discretization dis;
    dis.extents.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        dis.axes.push_back(detail::cartesian_axis_ops(grid->axes[static_cast<std::size_t>(k)]));
        dis.extents[static_cast<std::size_t>(k)] = grid->axes[static_cast<std::size_t>(k)].m;
    }
    dis.finalize();

    std::vector<double> rhs(dis.n_nodes);
    parallel_for(dis.n_nodes, [&](std::size_t i) { rhs[i] = f(grid->node_physical(i)); });

    std::vector<double> x;
    const detail::CgStats stats = detail::pcg_solve(dis, lam, rhs, x, opts.cg_tol, opts.cg_maxit_factor);

    SolveResult res{GridFunction(grid, std::move(x)), SolveReport{}};
    res.report.lambda = lam;
    res.report.cg_iterations = stats.iterations;
    res.report.cg_residual = stats.rel_residual;

    if (opts.compute_norms) {
        std::vector<int> nres = opts.norm_resolution;
        if (nres.empty()) {
            nres.resize(static_cast<std::size_t>(n));
            for (int k = 0; k < n; ++k) nres[static_cast<std::size_t>(k)] = grid->axes[static_cast<std::size_t>(k)].m;
        }
        const Quadrature qi = interior_quadrature(dom, nres, spec.truncation);
        Quadrature qb;
        const bool has_boundary = dom.kind() != DomainKind::WholeSpace;
        if (has_boundary) {
            const int bres = opts.boundary_resolution > 0 ? opts.boundary_resolution
                                                          : detail::auto_boundary_resolution(dom.dim());
            qb = boundary_quadrature(dom, bres);
        }
        const NormSet ns = norms(res.u, dom, qi, has_boundary ? &qb : nullptr, opts.norm_interp);
        res.report.l2_u = ns.l2_u;
        res.report.l2_grad = ns.l2_grad;
        res.report.hs_hess = ns.hs_hess;
        res.report.drift_norm = ns.drift_norm;
        res.report.flux_norm = ns.flux_norm;
        std::vector<double> f2(qi.size());
        parallel_for(qi.size(), [&](std::size_t i) {
            const double v = f(qi.node(i));
            f2[i] = qi.weights[i] * v * v;
        });
        res.report.l2_f = std::sqrt(std::max(0.0, pairwise_sum(f2)));
        if (res.report.l2_f > 0.0) estimate_ratios(res.report);
    }
    return res;
}

/// Radial solve in a centered ball: lambda u - u'' - ((n-1)/r - r) u' = f
/// against the weight r^{n-1} e^{-r^2/2}, with u'(0) = 0 (regularity) and
/// u'(R) = 0 (Neumann).
inline SolveResult radial_solve(const ConvexDomain& ball, const std::function<double(double)>& f,
                                double lam, int n_dim, int n_r, const SolveOptions& opts = {}) {
    if (!(lam > 0.0)) throw std::invalid_argument("radial_solve: lambda must be positive");
    if (ball.kind() != DomainKind::Ball)
        throw std::invalid_argument("radial_solve: domain must be a ball");
    for (double c : ball.center())
        if (std::abs(c) > 1e-14)
            throw std::invalid_argument("radial_solve: ball must be centered at the origin");
    if (n_dim < 1) throw std::invalid_argument("radial_solve: ambient dimension must be >= 1");
    if (n_r < 32) throw std::invalid_argument("radial_solve: resolution too small (need n_r >= 32)");

    auto grid = std::make_shared<RadialGrid>();
    grid->radius = ball.radius();
    grid->m = n_r;
    grid->h = ball.radius() / (n_r - 1);
    grid->ambient_dim = n_dim;

    detail::Discretization dis;
    dis.axes.push_back(detail::radial_axis_ops(*grid));
    dis.extents = {n_r};
    dis.finalize();

    std::vector<double> rhs(static_cast<std::size_t>(n_r));
    for (int i = 0; i < n_r; ++i) rhs[static_cast<std::size_t>(i)] = f(grid->node(i));

    std::vector<double> x;
    const detail::CgStats stats = detail::pcg_solve(dis, lam, rhs, x, opts.cg_tol, opts.cg_maxit_factor);

    SolveResult res{GridFunction(grid, std::move(x)), SolveReport{}};
    res.report.lambda = lam;
    res.report.cg_iterations = stats.iterations;
    res.report.cg_residual = stats.rel_residual;

    if (opts.compute_norms) {
        Quadrature dummy;
        const NormSet ns = norms(res.u, ball, dummy, nullptr);
        res.report.l2_u = ns.l2_u;
        res.report.l2_grad = ns.l2_grad;
        res.report.hs_hess = ns.hs_hess;
        res.report.drift_norm = ns.drift_norm;
        res.report.flux_norm = ns.flux_norm;
        const double c_n = std::pow(2.0, 1.0 - 0.5 * n_dim) / std::tgamma(0.5 * n_dim);
        std::vector<double> f2(static_cast<std::size_t>(n_r));
        for (int i = 0; i < n_r; ++i) {
            const double v = f(grid->node(i));
            f2[static_cast<std::size_t>(i)] = c_n * dis.axes[0].cell_w[static_cast<std::size_t>(i)] * v * v;
        }
        res.report.l2_f = std::sqrt(std::max(0.0, pairwise_sum(f2)));
        if (res.report.l2_f > 0.0) estimate_ratios(res.report);
    }
    return res;
}

}  // namespace oun
