#pragma once

#include <memory>

#include "oun/frame.hpp"

namespace oun {

struct AxisGrid {
    double lo = 0.0, hi = 0.0, h = 0.0;
    int m = 0;
    bool boundary_lo = false, boundary_hi = false;
    double node(int i) const { return lo + i * h; }
};

/// Uniform tensor grid in frame coordinates. Axis 0 varies slowest in the
/// flat index; boundary-fitted endpoints land exactly on the domain boundary.
struct TensorGrid {
    std::vector<AxisGrid> axes;
    Frame frame;
    std::vector<std::size_t> strides;
    std::size_t n_nodes = 0;

    int dim() const { return static_cast<int>(axes.size()); }

    static TensorGrid build(std::vector<AxisGrid> axes, Frame frame) {
        TensorGrid g;
        g.axes = std::move(axes);
        g.frame = std::move(frame);
        const int n = g.dim();
        g.strides.assign(n, 1);
        for (int k = n - 2; k >= 0; --k)
            g.strides[k] = g.strides[k + 1] * static_cast<std::size_t>(g.axes[k + 1].m);
        g.n_nodes = g.strides[0] * static_cast<std::size_t>(g.axes[0].m);
        return g;
    }

    void node_frame(std::size_t flat, std::span<double> y) const {
        for (int k = 0; k < dim(); ++k) {
            const std::size_t i = (flat / strides[k]) % static_cast<std::size_t>(axes[k].m);
            y[k] = axes[k].node(static_cast<int>(i));
        }
    }

    Point node_physical(std::size_t flat) const {
        Point y(dim()), x(dim());
        node_frame(flat, y);
        frame.to_physical(y, x);
        return x;
    }
};

/// Uniform radial grid on [0, R] for rotation-invariant problems in a ball.
struct RadialGrid {
    double radius = 0.0;
    double h = 0.0;
    int m = 0;
    int ambient_dim = 1;
    double node(int i) const { return i * h; }
};

enum class Interp { Linear, Cubic };

/// Discrete scalar field on a tensor or radial grid.
class GridFunction {
  public:
    GridFunction() = default;
    GridFunction(std::shared_ptr<const TensorGrid> grid, std::vector<double> values)
        : tensor_(std::move(grid)), values_(std::move(values)) {
        if (values_.size() != tensor_->n_nodes)
            throw std::invalid_argument("GridFunction: value count does not match grid");
    }
    GridFunction(std::shared_ptr<const RadialGrid> grid, std::vector<double> values)
        : radial_(std::move(grid)), values_(std::move(values)) {
        if (values_.size() != static_cast<std::size_t>(radial_->m))
            throw std::invalid_argument("GridFunction: value count does not match grid");
    }

    bool is_radial() const { return radial_ != nullptr; }
    const TensorGrid& tensor_grid() const {
        if (!tensor_) throw std::logic_error("GridFunction: not a tensor-grid function");
        return *tensor_;
    }
    std::shared_ptr<const TensorGrid> tensor_grid_ptr() const { return tensor_; }
    const RadialGrid& radial_grid() const {
        if (!radial_) throw std::logic_error("GridFunction: not a radial-grid function");
        return *radial_;
    }
    std::shared_ptr<const RadialGrid> radial_grid_ptr() const { return radial_; }

    int dim() const { return radial_ ? radial_->ambient_dim : tensor_->dim(); }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    /// Interpolates at a point given in frame coordinates. Points outside the
    /// grid box are clamped onto it; `clamped` reports when that happened.
    double eval_frame(PointView y, Interp order = Interp::Linear, bool* clamped = nullptr) const {
        const TensorGrid& g = tensor_grid();
        const int n = g.dim();
        int base[8];
        double wts[8][4];
        int npts[8];
        for (int k = 0; k < n; ++k) {
            const AxisGrid& ax = g.axes[k];
            double t = (y[k] - ax.lo) / ax.h;
            if (t < 0.0 || t > ax.m - 1.0) {
                if (clamped) *clamped = true;
                t = std::clamp(t, 0.0, static_cast<double>(ax.m - 1));
            }
            if (order == Interp::Cubic && ax.m >= 4) {
                int b = static_cast<int>(std::floor(t)) - 1;
                b = std::clamp(b, 0, ax.m - 4);
                const double s = t - b;
                base[k] = b;
                npts[k] = 4;
                // 4-point Lagrange basis at offsets 0..3
                wts[k][0] = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
                wts[k][1] = s * (s - 2.0) * (s - 3.0) / 2.0;
                wts[k][2] = -s * (s - 1.0) * (s - 3.0) / 2.0;
                wts[k][3] = s * (s - 1.0) * (s - 2.0) / 6.0;
            } else {
                int b = static_cast<int>(std::floor(t));
                b = std::clamp(b, 0, ax.m - 2);
                const double s = t - b;
                base[k] = b;
                npts[k] = 2;
                wts[k][0] = 1.0 - s;
                wts[k][1] = s;
            }
        }
        // accumulate over the tensor corners
        int idx[8] = {0};
        double sum = 0.0;
        for (;;) {
            double w = 1.0;
            std::size_t flat = 0;
            for (int k = 0; k < n; ++k) {
                w *= wts[k][idx[k]];
                flat += g.strides[k] * static_cast<std::size_t>(base[k] + idx[k]);
            }
            sum += w * values_[flat];
            int k = n - 1;
            for (; k >= 0; --k) {
                if (++idx[k] < npts[k]) break;
                idx[k] = 0;
            }
            if (k < 0) break;
        }
        return sum;
    }

    double eval_physical(PointView x, Interp order = Interp::Linear, bool* clamped = nullptr) const {
        if (radial_) return eval_radius(norm2(x), order, clamped);
        const TensorGrid& g = tensor_grid();
        if (g.frame.identity) return eval_frame(x, order, clamped);
        Point y(g.dim());
        g.frame.to_frame(x, y);
        return eval_frame(y, order, clamped);
    }

    /// Radial fields: interpolate at radius r (clamped onto [0, R]).
    double eval_radius(double r, Interp order = Interp::Linear, bool* clamped = nullptr) const {
        const RadialGrid& g = radial_grid();
        double t = r / g.h;
        if (t < 0.0 || t > g.m - 1.0) {
            if (clamped) *clamped = true;
            t = std::clamp(t, 0.0, static_cast<double>(g.m - 1));
        }
        if (order == Interp::Cubic && g.m >= 4) {
            const int b = std::clamp(static_cast<int>(std::floor(t)) - 1, 0, g.m - 4);
            const double s = t - b;
            const double w0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
            const double w1 = s * (s - 2.0) * (s - 3.0) / 2.0;
            const double w2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
            const double w3 = s * (s - 1.0) * (s - 2.0) / 6.0;
            const std::size_t ub = static_cast<std::size_t>(b);
            return w0 * values_[ub] + w1 * values_[ub + 1] + w2 * values_[ub + 2] +
                   w3 * values_[ub + 3];
        }
        const int b = std::clamp(static_cast<int>(std::floor(t)), 0, g.m - 2);
        const double s = t - b;
        return (1.0 - s) * values_[static_cast<std::size_t>(b)] +
               s * values_[static_cast<std::size_t>(b) + 1];
    }

  private:
    std::shared_ptr<const TensorGrid> tensor_;
    std::shared_ptr<const RadialGrid> radial_;
    std::vector<double> values_;
};

namespace detail {

/// Second-order first-derivative stencil along one line of values.
inline void diff1_line(const double* v, double* out, int m, double h, std::ptrdiff_t stride) {
    const double i2h = 0.5 / h;
    out[0] = (-3.0 * v[0] + 4.0 * v[stride] - v[2 * stride]) * i2h;
    for (int i = 1; i < m - 1; ++i)
        out[static_cast<std::ptrdiff_t>(i) * stride] =
            (v[(i + 1) * stride] - v[(i - 1) * stride]) * i2h;
    out[static_cast<std::ptrdiff_t>(m - 1) * stride] =
        (3.0 * v[(m - 1) * stride] - 4.0 * v[(m - 2) * stride] + v[(m - 3) * stride]) * i2h;
}

/// Second-order second-derivative stencil along one line of values.
inline void diff2_line(const double* v, double* out, int m, double h, std::ptrdiff_t stride) {
    const double ih2 = 1.0 / (h * h);
    out[0] = (2.0 * v[0] - 5.0 * v[stride] + 4.0 * v[2 * stride] - v[3 * stride]) * ih2;
    for (int i = 1; i < m - 1; ++i)
        out[static_cast<std::ptrdiff_t>(i) * stride] =
            (v[(i + 1) * stride] - 2.0 * v[static_cast<std::ptrdiff_t>(i) * stride] +
             v[(i - 1) * stride]) * ih2;
    out[static_cast<std::ptrdiff_t>(m - 1) * stride] =
        (2.0 * v[(m - 1) * stride] - 5.0 * v[(m - 2) * stride] + 4.0 * v[(m - 3) * stride] -
         v[(m - 4) * stride]) * ih2;
}

template <typename LineOp>
void sweep_axis(const TensorGrid& g, int axis, const std::vector<double>& in,
                std::vector<double>& out, LineOp&& op) {
    const std::size_t s = g.strides[axis];
    const int m = g.axes[axis].m;
    const std::size_t block = s * static_cast<std::size_t>(m);
    const std::size_t n_blocks = g.n_nodes / block;
    for (std::size_t b = 0; b < n_blocks; ++b)
        for (std::size_t post = 0; post < s; ++post) {
            const std::size_t off = b * block + post;
            op(in.data() + off, out.data() + off, m, g.axes[axis].h, static_cast<std::ptrdiff_t>(s));
        }
}

}  // namespace detail

/// Central differences in the interior, one-sided second-order stencils at
/// the boundary layers. Needs at least 3 nodes per axis.
inline std::vector<GridFunction> recover_gradient(const GridFunction& u) {
    const TensorGrid& g = u.tensor_grid();
    for (const AxisGrid& ax : g.axes)
        if (ax.m < 3) throw std::invalid_argument("recover_gradient: degenerate grid (m < 3)");
    std::vector<GridFunction> comps;
    comps.reserve(g.axes.size());
    auto grid = u.tensor_grid_ptr();
    for (int k = 0; k < g.dim(); ++k) {
        std::vector<double> d(g.n_nodes);
        detail::sweep_axis(g, k, u.values(), d,
                           [](const double* v, double* o, int m, double h, std::ptrdiff_t s) {
                               detail::diff1_line(v, o, m, h, s);
                           });
        comps.emplace_back(grid, std::move(d));
    }
    return comps;
}

inline int sym_index(int i, int j, int dim) {
    if (i > j) std::swap(i, j);
    return i * dim - i * (i - 1) / 2 + (j - i);
}

/// Symmetric Hessian field in packed upper-triangular order
/// (0,0),(0,1),...,(0,n-1),(1,1),... Needs at least 4 nodes per axis.
inline std::vector<GridFunction> recover_hessian(const GridFunction& u) {
    const TensorGrid& g = u.tensor_grid();
    for (const AxisGrid& ax : g.axes)
        if (ax.m < 4) throw std::invalid_argument("recover_hessian: degenerate grid (m < 4)");
    const int n = g.dim();
    auto grid = u.tensor_grid_ptr();
    const std::vector<GridFunction> grads = recover_gradient(u);
    std::vector<GridFunction> comps(static_cast<std::size_t>(n * (n + 1) / 2));
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            std::vector<double> d(g.n_nodes);
            if (i == j) {
                detail::sweep_axis(g, i, u.values(), d,
                                   [](const double* v, double* o, int m, double h, std::ptrdiff_t s) {
                                       detail::diff2_line(v, o, m, h, s);
                                   });
            } else {
                detail::sweep_axis(g, j, grads[static_cast<std::size_t>(i)].values(), d,
                                   [](const double* v, double* o, int m, double h, std::ptrdiff_t s) {
                                       detail::diff1_line(v, o, m, h, s);
                                   });
            }
            comps[static_cast<std::size_t>(sym_index(i, j, n))] = GridFunction(grid, std::move(d));
        }
    }
    return comps;
}

/// Shared-weight interpolation of several fields on the same grid at one
/// frame point; far cheaper than interpolating field by field.
inline void eval_many_frame(std::span<const GridFunction* const> fields, PointView y,
                            std::span<double> out, Interp order = Interp::Linear) {
    if (fields.empty()) return;
    const TensorGrid& g = fields[0]->tensor_grid();
    const int n = g.dim();
    int base[8];
    double wts[8][4];
    int npts[8];
    for (int k = 0; k < n; ++k) {
        const AxisGrid& ax = g.axes[k];
        double t = std::clamp((y[k] - ax.lo) / ax.h, 0.0, static_cast<double>(ax.m - 1));
        if (order == Interp::Cubic && ax.m >= 4) {
            int b = std::clamp(static_cast<int>(std::floor(t)) - 1, 0, ax.m - 4);
            const double s = t - b;
            base[k] = b;
            npts[k] = 4;
            wts[k][0] = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
            wts[k][1] = s * (s - 2.0) * (s - 3.0) / 2.0;
            wts[k][2] = -s * (s - 1.0) * (s - 3.0) / 2.0;
            wts[k][3] = s * (s - 1.0) * (s - 2.0) / 6.0;
        } else {
            int b = std::clamp(static_cast<int>(std::floor(t)), 0, ax.m - 2);
            const double s = t - b;
            base[k] = b;
            npts[k] = 2;
            wts[k][0] = 1.0 - s;
            wts[k][1] = s;
        }
    }
    std::fill(out.begin(), out.begin() + fields.size(), 0.0);
    int idx[8] = {0};
    for (;;) {
        double w = 1.0;
        std::size_t flat = 0;
        for (int k = 0; k < n; ++k) {
            w *= wts[k][idx[k]];
            flat += g.strides[k] * static_cast<std::size_t>(base[k] + idx[k]);
        }
        for (std::size_t f = 0; f < fields.size(); ++f)
            out[f] += w * fields[f]->values()[flat];
        int k = n - 1;
        for (; k >= 0; --k) {
            if (++idx[k] < npts[k]) break;
            idx[k] = 0;
        }
        if (k < 0) break;
    }
}

}  // namespace oun
