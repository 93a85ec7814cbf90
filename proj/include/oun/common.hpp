#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace oun {

inline constexpr const char* kVersion = "0.1.0";

using Point = std::vector<double>;
using PointView = std::span<const double>;
using PointFn = std::function<double(PointView)>;

/// Standard 1-D Gaussian density (2pi)^{-1/2} exp(-x^2/2).
inline double gauss_density_1d(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

/// Standard normal CDF.
inline double gauss_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// n-dimensional standard Gaussian density at x.
inline double gauss_density(PointView x) {
    double q = 0.0;
    for (double xi : x) q += xi * xi;
    const double n = static_cast<double>(x.size());
    return std::exp(-0.5 * q) * std::pow(2.0 * std::numbers::pi, -0.5 * n);
}

inline double dot(PointView a, PointView b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(PointView a) { return std::sqrt(dot(a, a)); }

/// Deterministic pairwise summation; order is fixed by the recursion, so
/// results are identical run to run regardless of how values were produced.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 32) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

/// FNV-1a 64-bit hash, used to fingerprint configs and manifests.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

/// Fixed float formatting for artifacts: 17 significant digits, '.' separator.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

inline unsigned thread_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("OUN_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 64) hw = static_cast<unsigned>(v);
    }
    return hw > 16 ? 16u : hw;
}

/// Runs fn(i) for i in [0, n). Results must be written to disjoint,
/// preallocated slots; any reduction happens afterwards in index order.
template <typename F>
void parallel_for(std::size_t n, F&& fn) {
    const unsigned workers = thread_count();
    if (workers <= 1 || n < 64) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = static_cast<std::size_t>(w) * chunk;
        if (lo >= n) break;
        const std::size_t hi = std::min(n, lo + chunk);
        pool.emplace_back([&fn, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

class NotOnBoundaryError : public std::runtime_error {
  public:
    explicit NotOnBoundaryError(const std::string& msg) : std::runtime_error(msg) {}
};

class DegenerateGradientError : public std::runtime_error {
  public:
    explicit DegenerateGradientError(const std::string& msg) : std::runtime_error(msg) {}
};

class CgError : public std::runtime_error {
  public:
    CgError(const std::string& msg, double residual, int iterations)
        : std::runtime_error(msg), residual(residual), iterations(iterations) {}
    double residual;
    int iterations;
};

}  // namespace oun
