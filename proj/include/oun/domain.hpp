#pragma once

#include <memory>
#include <utility>

#include "oun/common.hpp"

namespace oun {

/// Tolerance for deciding that a point sits on {g = 0} after projection.
inline constexpr double kBoundaryTol = 1e-10;
/// Below this gradient magnitude the exterior normal is undefined.
inline constexpr double kGradientFloor = 1e-8;

enum class DomainKind { HalfSpace, Ball, Slab, Cylinder, WholeSpace };

/// Open convex set O = {x : g(x) < 0} with a smooth convex defining function.
///
/// Supported shapes and their defining functions:
///   HalfSpace(a, b):  g = <a,x> - b         (a a unit vector)
///   Ball(c, r):       g = |x - c|^2 - r^2
///   Slab(a, b):       g = <a,x>^2 - b^2     (smooth, convex, |grad g| = 2b on the boundary)
///   Cylinder(base,d): g = base.g(first q coordinates)
///   WholeSpace(n):    g = -1
///
/// All geometry (gradient, Hessian, normal, metric projection) is analytic.
class ConvexDomain {
  public:
    static ConvexDomain half_space(Point a, double b) {
        normalize_direction(a);
        ConvexDomain d;
        d.kind_ = DomainKind::HalfSpace;
        d.dim_ = static_cast<int>(a.size());
        d.vec_ = std::move(a);
        d.scalar_ = b;
        return d;
    }

    static ConvexDomain ball(Point c, double r) {
        if (!(r > 0.0)) throw std::invalid_argument("ball: radius must be positive");
        ConvexDomain d;
        d.kind_ = DomainKind::Ball;
        d.dim_ = static_cast<int>(c.size());
        d.vec_ = std::move(c);
        d.scalar_ = r;
        return d;
    }

    static ConvexDomain slab(Point a, double b) {
        if (!(b > 0.0)) throw std::invalid_argument("slab: half-width must be positive");
        normalize_direction(a);
        ConvexDomain d;
        d.kind_ = DomainKind::Slab;
        d.dim_ = static_cast<int>(a.size());
        d.vec_ = std::move(a);
        d.scalar_ = b;
        return d;
    }

    static ConvexDomain cylinder(ConvexDomain base, int extra_dims) {
        if (extra_dims < 1) throw std::invalid_argument("cylinder: extra_dims must be >= 1");
        if (base.kind() == DomainKind::WholeSpace)
            return whole_space(base.dim() + extra_dims);
        ConvexDomain d;
        d.kind_ = DomainKind::Cylinder;
        d.dim_ = base.dim() + extra_dims;
        d.extra_dims_ = extra_dims;
        d.base_ = std::make_shared<ConvexDomain>(std::move(base));
        return d;
    }

    static ConvexDomain whole_space(int n) {
        if (n < 1) throw std::invalid_argument("whole_space: dimension must be >= 1");
        ConvexDomain d;
        d.kind_ = DomainKind::WholeSpace;
        d.dim_ = n;
        return d;
    }

    DomainKind kind() const { return kind_; }
    int dim() const { return dim_; }

    /// Direction a for HalfSpace/Slab, center c for Ball.
    const Point& direction() const { return vec_; }
    const Point& center() const { return vec_; }
    /// Offset b for HalfSpace, half-width b for Slab, radius r for Ball.
    double offset() const { return scalar_; }
    double radius() const { return scalar_; }
    const ConvexDomain& base() const { return *base_; }
    int extra_dims() const { return extra_dims_; }

    double g(PointView x) const {
        check_dim(x);
        switch (kind_) {
            case DomainKind::HalfSpace:
                return dot(vec_, x) - scalar_;
            case DomainKind::Ball: {
                double q = 0.0;
                for (int i = 0; i < dim_; ++i) {
                    const double d = x[i] - vec_[i];
                    q += d * d;
                }
                return q - scalar_ * scalar_;
            }
            case DomainKind::Slab: {
                const double t = dot(vec_, x);
                return t * t - scalar_ * scalar_;
            }
            case DomainKind::Cylinder:
                return base_->g(x.first(base_->dim()));
            case DomainKind::WholeSpace:
                return -1.0;
        }
        return 0.0;
    }

    Point grad_g(PointView x) const {
        check_dim(x);
        Point grad(dim_, 0.0);
        switch (kind_) {
            case DomainKind::HalfSpace:
                for (int i = 0; i < dim_; ++i) grad[i] = vec_[i];
                break;
            case DomainKind::Ball:
                for (int i = 0; i < dim_; ++i) grad[i] = 2.0 * (x[i] - vec_[i]);
                break;
            case DomainKind::Slab: {
                const double t = dot(vec_, x);
                for (int i = 0; i < dim_; ++i) grad[i] = 2.0 * t * vec_[i];
                break;
            }
            case DomainKind::Cylinder: {
                const Point gb = base_->grad_g(x.first(base_->dim()));
                for (int i = 0; i < base_->dim(); ++i) grad[i] = gb[i];
                break;
            }
            case DomainKind::WholeSpace:
                break;
        }
        return grad;
    }

    /// Hessian of g, row-major dim x dim. Positive semi-definite for every kind.
    std::vector<double> hess_g(PointView x) const {
        check_dim(x);
        std::vector<double> h(static_cast<std::size_t>(dim_) * dim_, 0.0);
        switch (kind_) {
            case DomainKind::HalfSpace:
            case DomainKind::WholeSpace:
                break;
            case DomainKind::Ball:
                for (int i = 0; i < dim_; ++i) h[static_cast<std::size_t>(i) * dim_ + i] = 2.0;
                break;
            case DomainKind::Slab:
                for (int i = 0; i < dim_; ++i)
                    for (int j = 0; j < dim_; ++j)
                        h[static_cast<std::size_t>(i) * dim_ + j] = 2.0 * vec_[i] * vec_[j];
                break;
            case DomainKind::Cylinder: {
                const int q = base_->dim();
                const std::vector<double> hb = base_->hess_g(x.first(q));
                for (int i = 0; i < q; ++i)
                    for (int j = 0; j < q; ++j)
                        h[static_cast<std::size_t>(i) * dim_ + j] = hb[static_cast<std::size_t>(i) * q + j];
                break;
            }
        }
        return h;
    }

    bool contains(PointView x) const { return g(x) < 0.0; }

    /// Unit exterior normal grad g / |grad g| at a boundary point. The query
    /// point is projected onto the closure first; if it does not land within
    /// kBoundaryTol of {g = 0} the point is not a boundary point.
    Point normal(PointView x) const {
        Point xp = project_to_closure(x);
        if (std::abs(g(xp)) > kBoundaryTol)
            throw NotOnBoundaryError("normal: point is not on the boundary (|g| = " +
                                     std::to_string(std::abs(g(xp))) + ")");
        Point grad = grad_g(xp);
        const double m = norm2(grad);
        if (m < kGradientFloor)
            throw DegenerateGradientError("normal: |grad g| below " + std::to_string(kGradientFloor));
        for (double& v : grad) v /= m;
        return grad;
    }

    /// Euclidean metric projection onto the closed set {g <= 0}.
    Point project_to_closure(PointView x) const {
        Point p(x.begin(), x.end());
        project_in_place(p);
        return p;
    }

    /// In-place projection; the workhorse behind project_to_closure and the
    /// reflected-diffusion stepper.
    void project_in_place(std::span<double> x) const {
        check_dim(x);
        switch (kind_) {
            case DomainKind::HalfSpace: {
                const double s = dot(vec_, x) - scalar_;
                if (s > 0.0)
                    for (int i = 0; i < dim_; ++i) x[i] -= s * vec_[i];
                break;
            }
            case DomainKind::Ball: {
                double q = 0.0;
                for (int i = 0; i < dim_; ++i) {
                    const double d = x[i] - vec_[i];
                    q += d * d;
                }
                const double dist = std::sqrt(q);
                if (dist > scalar_) {
                    const double scale = scalar_ / dist;
                    for (int i = 0; i < dim_; ++i) x[i] = vec_[i] + scale * (x[i] - vec_[i]);
                }
                break;
            }
            case DomainKind::Slab: {
                const double t = dot(vec_, x);
                const double tc = std::clamp(t, -scalar_, scalar_);
                if (tc != t)
                    for (int i = 0; i < dim_; ++i) x[i] += (tc - t) * vec_[i];
                break;
            }
            case DomainKind::Cylinder:
                base_->project_in_place(x.first(base_->dim()));
                break;
            case DomainKind::WholeSpace:
                break;
        }
    }

  private:
    ConvexDomain() = default;

    static void normalize_direction(Point& a) {
        const double m = norm2(a);
        if (m < 1e-14) throw std::invalid_argument("direction vector must be nonzero");
        for (double& v : a) v /= m;
    }

    void check_dim(PointView x) const {
        if (static_cast<int>(x.size()) != dim_)
            throw std::invalid_argument("point dimension " + std::to_string(x.size()) +
                                        " does not match domain dimension " + std::to_string(dim_));
    }
    void check_dim(std::span<double> x) const { check_dim(PointView(x.data(), x.size())); }

    DomainKind kind_ = DomainKind::WholeSpace;
    int dim_ = 1;
    Point vec_;
    double scalar_ = 0.0;
    std::shared_ptr<const ConvexDomain> base_;
    int extra_dims_ = 0;
};

}  // namespace oun
