#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "error.hpp"

namespace momentkit {

// Bessel function of the first kind, real order v >= 0.
inline double bessel_j(double v, double x) {
    if (x < 0.0) throw DomainError("bessel_j requires x >= 0");
    if (x == 0.0) return v == 0.0 ? 1.0 : 0.0;
    return std::cyl_bessel_j(v, x);
}

// First `count` positive zeros of J_v, increasing.
inline std::vector<double> bessel_zeros(double v, int count) {
    std::vector<double> zeros;
    if (count <= 0) return zeros;
    zeros.reserve(static_cast<std::size_t>(count));
    // Zeros of J_v (v >= 0) are more than 2 apart, so a 0.1 scan cannot skip one.
    constexpr double step = 0.1;
    double lo = 1e-6;
    double f_lo = bessel_j(v, lo);
    while (static_cast<int>(zeros.size()) < count) {
        const double hi = lo + step;
        const double f_hi = bessel_j(v, hi);
        if (f_hi == 0.0) {
            zeros.push_back(hi);
            lo = hi + 1e-9;
            f_lo = bessel_j(v, lo);
            continue;
        }
        if ((f_lo < 0.0) != (f_hi < 0.0)) {
            double a = lo, b = hi, fa = f_lo;
            while (b - a > 1e-15 * b) {
                const double mid = 0.5 * (a + b);
                if (mid <= a || mid >= b) break;
                const double fm = bessel_j(v, mid);
                if (fm == 0.0) {
                    a = b = mid;
                    break;
                }
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            zeros.push_back(0.5 * (a + b));
        }
        lo = hi;
        f_lo = f_hi;
    }
    return zeros;
}

// n-th positive zero of J_v (n >= 1).
inline double bessel_zero(double v, int n) {
    if (n < 1) throw DomainError("bessel_zero requires n >= 1");
    return bessel_zeros(v, n).back();
}

struct GaussRule {
    std::vector<double> nodes;    // ascending on (-1, 1)
    std::vector<double> weights;  // sum to 2
};

namespace detail {

inline GaussRule compute_gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
    rule.weights.assign(static_cast<std::size_t>(n), 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged node for the weight.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        if (n == 1) p0 = 1.0;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = -x;
        rule.nodes[hi] = x;
        rule.weights[lo] = w;
        rule.weights[hi] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

}  // namespace detail

// Gauss-Legendre rule on [-1, 1]; computed once per order and cached.
inline const GaussRule& gauss_legendre(int n) {
    if (n < 1) throw DomainError("Gauss-Legendre order must be >= 1");
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, detail::compute_gauss_legendre(n)).first;
    return it->second;
}

}  // namespace momentkit
