#pragma once

#include <optional>

#include "oun/frame.hpp"
#include "oun/rng.hpp"

namespace oun {

/// Weighted node set approximating either the Gaussian measure restricted to
/// the interior of a domain or the weighted surface measure N dH^{n-1} on its
/// boundary. Nodes are stored flattened (node i occupies [i*dim, (i+1)*dim)).
struct Quadrature {
    enum class Target { Interior, Boundary };

    struct McInfo {
        std::uint64_t seed = 0;
        std::size_t n_proposals = 0;
        double mass_std_error = 0.0;
    };

    int dim = 0;
    Target target = Target::Interior;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::optional<McInfo> mc;

    std::size_t size() const { return weights.size(); }
    PointView node(std::size_t i) const {
        return PointView(nodes.data() + i * static_cast<std::size_t>(dim), dim);
    }
    double total_weight() const { return pairwise_sum(weights); }
};

namespace detail {

struct Rule1D {
    std::vector<double> x, w;
};

/// Probabilists' Gauss–Hermite rule: exact for polynomials of degree 2m-1
/// against N(0,1); weights sum to 1. Newton iteration on the orthonormal
/// recurrence with the classical asymptotic initial guesses.
inline Rule1D hermite_rule(int m) {
    if (m < 1) throw std::invalid_argument("hermite_rule: node count must be >= 1");
    Rule1D r;
    r.x.assign(m, 0.0);
    r.w.assign(m, 0.0);
    const double pim4 = 0.7511255444649425;  // pi^{-1/4}
    const int half = (m + 1) / 2;
    double z = 0.0, pp = 0.0;
    for (int i = 0; i < half; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * m + 1.0) - 1.85575 * std::pow(2.0 * m + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(m), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * r.x[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * r.x[1];
        else
            z = 2.0 * z - r.x[i - 2];
        for (int it = 0; it < 64; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 1; j <= m; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * m) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15 * (1.0 + std::abs(z))) break;
        }
        r.x[i] = z;  // descending physicists' roots
        r.x[m - 1 - i] = -z;
        r.w[i] = 2.0 / (pp * pp);
        r.w[m - 1 - i] = r.w[i];
    }
    // convert: probabilists' node = sqrt(2) * physicists' node, total mass 1
    const double wnorm = 1.0 / std::sqrt(std::numbers::pi);
    for (int i = 0; i < m; ++i) {
        r.x[i] *= -std::numbers::sqrt2;  // flip to ascending order
        r.w[i] *= wnorm;
    }
    return r;
}

/// Gauss–Legendre rule on [-1, 1].
inline Rule1D legendre_rule(int m) {
    if (m < 1) throw std::invalid_argument("legendre_rule: node count must be >= 1");
    Rule1D r;
    r.x.assign(m, 0.0);
    r.w.assign(m, 0.0);
    const int half = (m + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 64; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= m; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = m * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15) break;
        }
        r.x[i] = -z;
        r.x[m - 1 - i] = z;
        r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.w[m - 1 - i] = r.w[i];
    }
    return r;
}

/// Composite Gauss–Legendre with 4-point panels covering [lo, hi]; at least
/// `count` nodes in total. Plain Lebesgue weights (no density folded in yet).
inline Rule1D composite_legendre(double lo, double hi, int count) {
    const int per_panel = 4;
    const int panels = std::max(1, (count + per_panel - 1) / per_panel);
    const Rule1D base = legendre_rule(per_panel);
    Rule1D r;
    r.x.reserve(static_cast<std::size_t>(panels) * per_panel);
    r.w.reserve(static_cast<std::size_t>(panels) * per_panel);
    const double width = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        const double a = lo + p * width;
        const double mid = a + 0.5 * width, hw = 0.5 * width;
        for (int i = 0; i < per_panel; ++i) {
            r.x.push_back(mid + hw * base.x[i]);
            r.w.push_back(hw * base.w[i]);
        }
    }
    return r;
}

/// Per-axis interior rule with the 1-D Gaussian density folded into the
/// weights. Unbounded axes use Gauss–Hermite (exact for polynomial data).
inline Rule1D axis_interior_rule(const AxisSpec& ax, int resolution) {
    if (ax.unbounded) return hermite_rule(resolution);
    Rule1D r = composite_legendre(ax.lo, ax.hi, resolution);
    for (std::size_t i = 0; i < r.x.size(); ++i) r.w[i] *= gauss_density_1d(r.x[i]);
    return r;
}

/// Tensor product of per-axis rules, mapped through the frame.
inline Quadrature tensor_quadrature(const Frame& frame, const std::vector<Rule1D>& rules,
                                    Quadrature::Target target) {
    const int n = static_cast<int>(rules.size());
    std::size_t total = 1;
    for (const auto& r : rules) total *= r.x.size();
    Quadrature q;
    q.dim = frame.dim;
    q.target = target;
    q.nodes.resize(total * static_cast<std::size_t>(frame.dim));
    q.weights.resize(total);
    std::vector<std::size_t> idx(n, 0);
    Point y(n);
    for (std::size_t flat = 0; flat < total; ++flat) {
        double w = 1.0;
        for (int k = 0; k < n; ++k) {
            y[k] = rules[k].x[idx[k]];
            w *= rules[k].w[idx[k]];
        }
        frame.to_physical(y, std::span<double>(q.nodes.data() + flat * frame.dim, frame.dim));
        q.weights[flat] = w;
        for (int k = n - 1; k >= 0; --k) {
            if (++idx[k] < rules[k].x.size()) break;
            idx[k] = 0;
        }
    }
    return q;
}

/// Appends the product of `extra` with every node of `q` (cylinder free
/// directions). Base coordinates come first, free coordinates after.
inline Quadrature product_with_free_dims(const Quadrature& base, const std::vector<Rule1D>& extra,
                                         int total_dim) {
    if (extra.empty()) {
        Quadrature q = base;
        q.dim = total_dim;
        return q;
    }
    std::size_t free_total = 1;
    for (const auto& r : extra) free_total *= r.x.size();
    const int q_dim = base.dim;
    const int d = static_cast<int>(extra.size());
    Quadrature out;
    out.dim = total_dim;
    out.target = base.target;
    out.nodes.resize(base.size() * free_total * static_cast<std::size_t>(total_dim));
    out.weights.resize(base.size() * free_total);
    std::vector<std::size_t> idx(d, 0);
    std::size_t flat = 0;
    for (std::size_t i = 0; i < base.size(); ++i) {
        std::fill(idx.begin(), idx.end(), 0);
        for (std::size_t j = 0; j < free_total; ++j, ++flat) {
            double* node = out.nodes.data() + flat * total_dim;
            PointView bn = base.node(i);
            for (int k = 0; k < q_dim; ++k) node[k] = bn[k];
            double w = base.weights[i];
            for (int k = 0; k < d; ++k) {
                node[q_dim + k] = extra[k].x[idx[k]];
                w *= extra[k].w[idx[k]];
            }
            out.weights[flat] = w;
            for (int k = d - 1; k >= 0; --k) {
                if (++idx[k] < extra[k].x.size()) break;
                idx[k] = 0;
            }
        }
    }
    return out;
}

/// Polar rule for the interior of a 2-D ball.
inline Quadrature ball2_interior(const ConvexDomain& dom, int radial_res, int angular_res) {
    const Rule1D rad = composite_legendre(0.0, dom.radius(), radial_res);
    const int n_ang = std::max(8, angular_res);
    Quadrature q;
    q.dim = 2;
    q.target = Quadrature::Target::Interior;
    q.nodes.reserve(rad.x.size() * n_ang * 2);
    q.weights.reserve(rad.x.size() * n_ang);
    const double dtheta = 2.0 * std::numbers::pi / n_ang;
    for (std::size_t i = 0; i < rad.x.size(); ++i) {
        const double s = rad.x[i];
        for (int j = 0; j < n_ang; ++j) {
            const double th = (j + 0.5) * dtheta;
            const double x0 = dom.center()[0] + s * std::cos(th);
            const double x1 = dom.center()[1] + s * std::sin(th);
            q.nodes.push_back(x0);
            q.nodes.push_back(x1);
            const double nx[2] = {x0, x1};
            q.weights.push_back(gauss_density(PointView(nx, 2)) * s * rad.w[i] * dtheta);
        }
    }
    return q;
}

/// Spherical rule for the interior of a 3-D ball.
inline Quadrature ball3_interior(const ConvexDomain& dom, int radial_res, int polar_res,
                                 int angular_res) {
    const Rule1D rad = composite_legendre(0.0, dom.radius(), radial_res);
    const Rule1D polar = legendre_rule(std::max(8, polar_res / 2));
    const int n_phi = std::max(8, angular_res);
    Quadrature q;
    q.dim = 3;
    q.target = Quadrature::Target::Interior;
    const double dphi = 2.0 * std::numbers::pi / n_phi;
    for (std::size_t i = 0; i < rad.x.size(); ++i) {
        const double s = rad.x[i];
        for (std::size_t l = 0; l < polar.x.size(); ++l) {
            const double u = polar.x[l];
            const double su = std::sqrt(std::max(0.0, 1.0 - u * u));
            for (int j = 0; j < n_phi; ++j) {
                const double phi = (j + 0.5) * dphi;
                const double p[3] = {dom.center()[0] + s * su * std::cos(phi),
                                     dom.center()[1] + s * su * std::sin(phi),
                                     dom.center()[2] + s * u};
                q.nodes.insert(q.nodes.end(), p, p + 3);
                q.weights.push_back(gauss_density(PointView(p, 3)) * s * s * rad.w[i] * polar.w[l] * dphi);
            }
        }
    }
    return q;
}

inline Quadrature ball_boundary(const ConvexDomain& dom, int resolution) {
    const int n = dom.dim();
    const double r = dom.radius();
    Quadrature q;
    q.dim = n;
    q.target = Quadrature::Target::Boundary;
    if (n == 1) {
        for (double s : {-r, r}) {
            const double x = dom.center()[0] + s;
            q.nodes.push_back(x);
            q.weights.push_back(gauss_density_1d(x));
        }
        return q;
    }
    if (n == 2) {
        const int m = std::max(8, resolution);
        const double dtheta = 2.0 * std::numbers::pi / m;
        for (int j = 0; j < m; ++j) {
            const double th = (j + 0.5) * dtheta;
            const double p[2] = {dom.center()[0] + r * std::cos(th),
                                 dom.center()[1] + r * std::sin(th)};
            q.nodes.insert(q.nodes.end(), p, p + 2);
            q.weights.push_back(gauss_density(PointView(p, 2)) * r * dtheta);
        }
        return q;
    }
    if (n == 3) {
        const Rule1D polar = legendre_rule(std::max(8, resolution / 2));
        const int n_phi = std::max(8, resolution);
        const double dphi = 2.0 * std::numbers::pi / n_phi;
        for (std::size_t l = 0; l < polar.x.size(); ++l) {
            const double u = polar.x[l];
            const double su = std::sqrt(std::max(0.0, 1.0 - u * u));
            for (int j = 0; j < n_phi; ++j) {
                const double phi = (j + 0.5) * dphi;
                const double p[3] = {dom.center()[0] + r * su * std::cos(phi),
                                     dom.center()[1] + r * su * std::sin(phi),
                                     dom.center()[2] + r * u};
                q.nodes.insert(q.nodes.end(), p, p + 3);
                q.weights.push_back(gauss_density(PointView(p, 3)) * r * r * polar.w[l] * dphi);
            }
        }
        return q;
    }
    throw std::invalid_argument("boundary_quadrature: ball boundary supported in dimensions 1-3 only");
}

/// Hyperplane sheet <a,x> = b parametrized over the tangential frame axes.
inline void hyperplane_sheet(Quadrature& q, const Frame& frame, double b, int resolution, int dim) {
    const double sheet_density = gauss_density_1d(b);
    if (dim == 1) {
        Point x = frame.to_physical(Point{b});
        q.nodes.insert(q.nodes.end(), x.begin(), x.end());
        q.weights.push_back(sheet_density);
        return;
    }
    std::vector<Rule1D> tang(static_cast<std::size_t>(dim) - 1, hermite_rule(resolution));
    std::vector<std::size_t> idx(dim - 1, 0);
    std::size_t total = 1;
    for (const auto& r : tang) total *= r.x.size();
    Point y(dim);
    Point x(dim);
    for (std::size_t flat = 0; flat < total; ++flat) {
        y[0] = b;
        double w = sheet_density;
        for (int k = 0; k < dim - 1; ++k) {
            y[k + 1] = tang[k].x[idx[k]];
            w *= tang[k].w[idx[k]];
        }
        frame.to_physical(y, x);
        q.nodes.insert(q.nodes.end(), x.begin(), x.end());
        q.weights.push_back(w);
        for (int k = dim - 2; k >= 0; --k) {
            if (++idx[k] < tang[k].x.size()) break;
            idx[k] = 0;
        }
    }
}

}  // namespace detail

/// Probabilists' Gauss–Hermite rule as a 1-D quadrature object: exact for
/// polynomials of degree <= 2m-1 against N(0,1); weights sum to 1.
inline Quadrature gauss_hermite_1d(int m) {
    const detail::Rule1D r = detail::hermite_rule(m);
    Quadrature q;
    q.dim = 1;
    q.target = Quadrature::Target::Interior;
    q.nodes = r.x;
    q.weights = r.w;
    return q;
}

namespace detail {

inline int res_at(const std::vector<int>& res, std::size_t k) {
    return res.size() == 1 ? res[0] : res.at(k);
}

}  // namespace detail

/// Tensor/polar rule for the Gaussian measure restricted to the domain.
/// Bounded directions use composite Gauss–Legendre panels split exactly at
/// the boundary coordinate; unbounded (whole-space or cylinder free)
/// directions use Gauss–Hermite. Balls in 2-D/3-D use polar rules.
///
/// `resolution` holds per-axis node counts in frame order (a single entry
/// broadcasts to every axis). For polar balls the entries are radial then
/// angular counts.
inline Quadrature interior_quadrature(const ConvexDomain& dom, std::vector<int> resolution,
                                      double truncation = 8.0) {
    if (resolution.empty()) throw std::invalid_argument("interior_quadrature: no resolution given");
    for (int r : resolution)
        if (r < 8) throw std::invalid_argument("interior_quadrature: resolution must be >= 8 per axis");
    if (dom.kind() == DomainKind::Ball && dom.dim() >= 2) {
        const int rad = detail::res_at(resolution, 0);
        const int ang = resolution.size() > 1 ? resolution[1] : rad;
        if (dom.dim() == 2) return detail::ball2_interior(dom, rad, ang);
        if (dom.dim() == 3)
            return detail::ball3_interior(dom, rad, resolution.size() > 2 ? resolution[2] : ang, ang);
        throw std::invalid_argument("interior_quadrature: tensor balls supported in dimensions 1-3 only");
    }
    if (dom.kind() == DomainKind::Cylinder && !axis_decompose(dom, truncation).tensorable) {
        // polar base times Hermite free directions
        const int q = dom.base().dim();
        std::vector<int> base_res(resolution.begin(),
                                  resolution.size() == 1 ? resolution.end()
                                                         : resolution.begin() + std::min<std::size_t>(q, resolution.size()));
        const Quadrature base = interior_quadrature(dom.base(), base_res, truncation);
        std::vector<detail::Rule1D> extra;
        for (int k = 0; k < dom.extra_dims(); ++k)
            extra.push_back(detail::hermite_rule(detail::res_at(resolution, static_cast<std::size_t>(q) + k)));
        return detail::product_with_free_dims(base, extra, dom.dim());
    }
    const FrameDecomp dec = axis_decompose(dom, truncation);
    if (!dec.tensorable)
        throw std::invalid_argument("interior_quadrature: unsupported domain kind");
    int bounded_axes = 0;
    for (const AxisSpec& ax : dec.axes)
        if (!ax.unbounded) ++bounded_axes;
    if (bounded_axes > 4)
        throw std::invalid_argument("interior_quadrature: full tensor grids cap at dimension 4");
    std::vector<detail::Rule1D> rules;
    rules.reserve(dec.axes.size());
    std::size_t total = 1;
    for (std::size_t k = 0; k < dec.axes.size(); ++k) {
        rules.push_back(detail::axis_interior_rule(dec.axes[k], detail::res_at(resolution, k)));
        total *= rules.back().x.size();
    }
    if (total > 50'000'000)
        throw std::invalid_argument("interior_quadrature: rule exceeds the node budget");
    return detail::tensor_quadrature(dec.frame, rules, Quadrature::Target::Interior);
}

inline Quadrature interior_quadrature(const ConvexDomain& dom, int resolution,
                                      double truncation = 8.0) {
    return interior_quadrature(dom, std::vector<int>{resolution}, truncation);
}

/// Nodes on the domain boundary with weights carrying N(x) times the surface
/// element. Supported: half-spaces and slabs (hyperplane sheets, Hermite in
/// the tangential directions), balls in dimensions 1-3, cylinders over those.
inline Quadrature boundary_quadrature(const ConvexDomain& dom, int resolution) {
    switch (dom.kind()) {
        case DomainKind::WholeSpace:
            throw std::invalid_argument("boundary_quadrature: whole space has no boundary");
        case DomainKind::Ball:
            return detail::ball_boundary(dom, resolution);
        case DomainKind::HalfSpace: {
            Quadrature q;
            q.dim = dom.dim();
            q.target = Quadrature::Target::Boundary;
            const Frame frame = detail::frame_from_direction(dom.direction());
            detail::hyperplane_sheet(q, frame, dom.offset(), resolution, dom.dim());
            return q;
        }
        case DomainKind::Slab: {
            Quadrature q;
            q.dim = dom.dim();
            q.target = Quadrature::Target::Boundary;
            const Frame frame = detail::frame_from_direction(dom.direction());
            detail::hyperplane_sheet(q, frame, -dom.offset(), resolution, dom.dim());
            detail::hyperplane_sheet(q, frame, dom.offset(), resolution, dom.dim());
            return q;
        }
        case DomainKind::Cylinder: {
            const Quadrature base = boundary_quadrature(dom.base(), resolution);
            std::vector<detail::Rule1D> extra(static_cast<std::size_t>(dom.extra_dims()),
                                              detail::hermite_rule(resolution));
            Quadrature q = detail::product_with_free_dims(base, extra, dom.dim());
            q.target = Quadrature::Target::Boundary;
            return q;
        }
    }
    throw std::invalid_argument("boundary_quadrature: unsupported domain kind");
}

/// Rejection-sampled interior rule: standard normal proposals, keep samples
/// inside the domain, weight 1/n_proposals each. Works in any dimension;
/// tagged with the standard error of the captured mass.
inline Quadrature mc_interior_quadrature(const ConvexDomain& dom, std::size_t n_samples,
                                         std::uint64_t seed) {
    if (n_samples == 0) throw std::invalid_argument("mc_interior_quadrature: need n_samples > 0");
    Quadrature q;
    q.dim = dom.dim();
    q.target = Quadrature::Target::Interior;
    Rng rng(seed, /*stream=*/0x4d43u);  // "MC"
    Point x(dom.dim());
    std::size_t accepted = 0;
    const double w = 1.0 / static_cast<double>(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        for (double& xi : x) xi = rng.next_normal();
        if (dom.contains(x)) {
            ++accepted;
            q.nodes.insert(q.nodes.end(), x.begin(), x.end());
            q.weights.push_back(w);
        }
    }
    const double p = static_cast<double>(accepted) / static_cast<double>(n_samples);
    q.mc = Quadrature::McInfo{seed, n_samples,
                              std::sqrt(std::max(0.0, p * (1.0 - p) / static_cast<double>(n_samples)))};
    return q;
}

/// Sum of w_i * fn(x_i). Node evaluation may run on several threads; the
/// reduction is chunked pairwise in fixed order, so results are identical
/// run to run.
template <typename F>
double integrate(const Quadrature& q, F&& fn) {
    const std::size_t n = q.size();
    constexpr std::size_t kChunk = 8192;
    const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
    std::vector<double> chunk_sums(n_chunks, 0.0);
    parallel_for(n_chunks, [&](std::size_t ci) {
        const std::size_t lo = ci * kChunk, hi = std::min(n, lo + kChunk);
        std::vector<double> vals(hi - lo);
        for (std::size_t i = lo; i < hi; ++i) vals[i - lo] = q.weights[i] * fn(q.node(i));
        chunk_sums[ci] = pairwise_sum(vals);
    });
    return pairwise_sum(chunk_sums);
}

}  // namespace oun
