#pragma once

#include "oun/domain.hpp"

namespace oun {

/// Orthonormal coordinate frame: physical x = R y, frame y = R^T x.
/// Identity frames skip the matrix product entirely.
struct Frame {
    int dim = 0;
    bool identity = true;
    std::vector<double> rot;  // row-major dim x dim; columns are frame axes

    static Frame make_identity(int n) { return Frame{n, true, {}}; }

    /// Column j of R, i.e. the physical direction of frame axis j.
    Point axis(int j) const {
        Point a(dim, 0.0);
        if (identity) {
            a[j] = 1.0;
        } else {
            for (int i = 0; i < dim; ++i) a[i] = rot[static_cast<std::size_t>(i) * dim + j];
        }
        return a;
    }

    void to_physical(PointView y, std::span<double> x) const {
        if (identity) {
            for (int i = 0; i < dim; ++i) x[i] = y[i];
            return;
        }
        for (int i = 0; i < dim; ++i) {
            double s = 0.0;
            for (int j = 0; j < dim; ++j) s += rot[static_cast<std::size_t>(i) * dim + j] * y[j];
            x[i] = s;
        }
    }

    void to_frame(PointView x, std::span<double> y) const {
        if (identity) {
            for (int i = 0; i < dim; ++i) y[i] = x[i];
            return;
        }
        for (int j = 0; j < dim; ++j) {
            double s = 0.0;
            for (int i = 0; i < dim; ++i) s += rot[static_cast<std::size_t>(i) * dim + j] * x[i];
            y[j] = s;
        }
    }

    Point to_physical(PointView y) const {
        Point x(dim);
        to_physical(y, x);
        return x;
    }
    Point to_frame_point(PointView x) const {
        Point y(dim);
        to_frame(x, y);
        return y;
    }
};

/// One axis of a tensor decomposition in frame coordinates.
struct AxisSpec {
    double lo = 0.0;
    double hi = 0.0;
    bool boundary_lo = false;  // endpoint lies on the domain boundary
    bool boundary_hi = false;
    bool unbounded = false;  // direction carries the full Gaussian line (Hermite-eligible)
};

/// Tensor decomposition of a domain: after rotating into `frame`, the domain
/// is a product of per-axis intervals. Balls above one dimension are not
/// tensor-resolvable (tensorable = false) and are served by polar rules and
/// the radial solver instead.
struct FrameDecomp {
    Frame frame;
    std::vector<AxisSpec> axes;
    bool tensorable = true;
};

namespace detail {

/// Orthonormal basis with prescribed first column, completed from the
/// standard basis by Gram–Schmidt (deterministic pivoting).
inline Frame frame_from_direction(const Point& a) {
    const int n = static_cast<int>(a.size());
    bool is_e1 = std::abs(a[0] - 1.0) < 1e-15;
    for (int i = 1; i < n && is_e1; ++i) is_e1 = std::abs(a[i]) < 1e-15;
    if (is_e1) return Frame::make_identity(n);

    std::vector<Point> cols;
    cols.push_back(a);
    for (int j = 0; j < n && static_cast<int>(cols.size()) < n; ++j) {
        Point v(n, 0.0);
        v[j] = 1.0;
        for (const Point& c : cols) {
            const double p = dot(c, v);
            for (int i = 0; i < n; ++i) v[i] -= p * c[i];
        }
        const double m = norm2(v);
        if (m > 0.5) {
            for (double& vi : v) vi /= m;
            cols.push_back(std::move(v));
        }
    }
    Frame f;
    f.dim = n;
    f.identity = false;
    f.rot.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) f.rot[static_cast<std::size_t>(i) * n + j] = cols[j][i];
    return f;
}

}  // namespace detail

/// Axis-resolves a domain: rotates the defining direction onto the first
/// frame axis and describes the per-axis intervals within truncation T.
inline FrameDecomp axis_decompose(const ConvexDomain& dom, double truncation = 8.0) {
    const int n = dom.dim();
    const double T = truncation;
    FrameDecomp d;
    switch (dom.kind()) {
        case DomainKind::WholeSpace: {
            d.frame = Frame::make_identity(n);
            d.axes.assign(n, AxisSpec{-T, T, false, false, true});
            return d;
        }
        case DomainKind::HalfSpace: {
            d.frame = detail::frame_from_direction(dom.direction());
            const double b = dom.offset();
            d.axes.push_back(AxisSpec{std::min(-T, b - T), b, false, true, false});
            for (int k = 1; k < n; ++k) d.axes.push_back(AxisSpec{-T, T, false, false, false});
            return d;
        }
        case DomainKind::Slab: {
            d.frame = detail::frame_from_direction(dom.direction());
            const double b = dom.offset();
            if (b <= T)
                d.axes.push_back(AxisSpec{-b, b, true, true, false});
            else
                d.axes.push_back(AxisSpec{-T, T, false, false, false});
            for (int k = 1; k < n; ++k) d.axes.push_back(AxisSpec{-T, T, false, false, false});
            return d;
        }
        case DomainKind::Ball: {
            if (n == 1) {
                d.frame = Frame::make_identity(1);
                const double c = dom.center()[0], r = dom.radius();
                d.axes.push_back(AxisSpec{c - r, c + r, true, true, false});
                return d;
            }
            d.frame = Frame::make_identity(n);
            d.tensorable = false;
            return d;
        }
        case DomainKind::Cylinder: {
            FrameDecomp base = axis_decompose(dom.base(), truncation);
            const int q = dom.base().dim();
            d.tensorable = base.tensorable;
            d.axes = std::move(base.axes);
            for (int k = 0; k < dom.extra_dims(); ++k)
                d.axes.push_back(AxisSpec{-T, T, false, false, true});
            if (base.frame.identity) {
                d.frame = Frame::make_identity(n);
            } else {
                d.frame.dim = n;
                d.frame.identity = false;
                d.frame.rot.assign(static_cast<std::size_t>(n) * n, 0.0);
                for (int i = 0; i < q; ++i)
                    for (int j = 0; j < q; ++j)
                        d.frame.rot[static_cast<std::size_t>(i) * n + j] =
                            base.frame.rot[static_cast<std::size_t>(i) * q + j];
                for (int i = q; i < n; ++i) d.frame.rot[static_cast<std::size_t>(i) * n + i] = 1.0;
            }
            return d;
        }
    }
    return d;
}

}  // namespace oun
