#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "image.hpp"
#include "moments.hpp"

namespace momentkit {

struct FeatureVector {
    MethodSpec method;
    int K = 0;
    std::vector<double> values;  // |M_nm| in OrderSet order
};

inline FeatureVector magnitude_features(const MomentSet& moments) {
    FeatureVector v{moments.method(), moments.K(), {}};
    v.values.reserve(moments.size());
    for (const auto& c : moments.values()) v.values.push_back(std::abs(c));
    return v;
}

struct FlusserTerm {
    int n = 0;
    int m = 0;
    int k = 1;  // exponent; negative means division
};

struct FlusserRecipe {
    std::vector<FlusserTerm> terms;

    bool valid() const {
        long sum = 0;
        for (const auto& t : terms) sum += static_cast<long>(t.m) * t.k;
        return !terms.empty() && sum == 0;
    }
};

// prod M_{n_i m_i}^{k_i}; rotation invariant when sum m_i k_i = 0.
inline complex flusser_invariant(const MomentSet& moments, const FlusserRecipe& recipe) {
    if (!recipe.valid()) throw DomainError("Flusser recipe must be non-empty with sum m_i k_i = 0");
    complex out = 1.0;
    for (const auto& t : recipe.terms) {
        const complex base = moments.at(t.n, t.m);
        if (t.k < 0 && base == complex(0.0))
            throw DomainError("Flusser recipe raises a zero moment to a negative power");
        complex p = 1.0;
        for (int i = 0; i < std::abs(t.k); ++i) p *= base;
        out *= t.k < 0 ? 1.0 / p : p;
    }
    return out;
}

enum class RotateInterp { nearest, bilinear };

// Counter-clockwise rotation by `degrees` about the image center in the (x, y)
// frame of the moment engine (x along columns, y along rows). Samples from
// outside the image are 0. Multiples of 90 degrees are exact permutations.
inline Image rotate_image(const Image& image, double degrees, RotateInterp interp = RotateInterp::bilinear) {
    const int N = image.size();
    double a = std::fmod(degrees, 360.0);
    if (a < 0) a += 360.0;
    if (a == 0.0) return image;
    Field out(N);
    if (a == 90.0 || a == 180.0 || a == 270.0) {
        for (int r = 0; r < N; ++r)
            for (int c = 0; c < N; ++c) {
                const int rb = N - 1 - r, cb = N - 1 - c;
                if (a == 90.0)
                    out.at(r, c) = image.at(cb, r);
                else if (a == 180.0)
                    out.at(r, c) = image.at(rb, cb);
                else
                    out.at(r, c) = image.at(c, rb);
            }
        return Image(std::move(out));
    }
    const double t = a * std::numbers::pi / 180.0, ct = std::cos(t), st = std::sin(t);
    const double h = (N - 1) / 2.0;
    auto px = [&](int r, int c) { return (r < 0 || c < 0 || r >= N || c >= N) ? 0.0 : image.at(r, c); };
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) {
            // Inverse map: source = R(-t) * destination.
            const double x = c - h, y = r - h;
            const double sx = ct * x + st * y + h, sy = -st * x + ct * y + h;
            double v;
            if (interp == RotateInterp::nearest) {
                v = px(static_cast<int>(std::lround(sy)), static_cast<int>(std::lround(sx)));
            } else {
                const int c0 = static_cast<int>(std::floor(sx)), r0 = static_cast<int>(std::floor(sy));
                const double fx = sx - c0, fy = sy - r0;
                v = (1 - fy) * ((1 - fx) * px(r0, c0) + fx * px(r0, c0 + 1)) +
                    fy * ((1 - fx) * px(r0 + 1, c0) + fx * px(r0 + 1, c0 + 1));
            }
            out.at(r, c) = std::clamp(v, 0.0, 1.0);
        }
    return Image(std::move(out));
}

// i.i.d. N(0, variance) noise on [0, 1] intensities, clipped; mt19937_64 seeded with `seed`.
inline Image add_gaussian_noise(const Image& image, double variance, std::uint64_t seed) {
    if (!(variance >= 0.0) || !std::isfinite(variance)) throw DomainError("noise variance must be >= 0");
    if (variance == 0.0) return image;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, std::sqrt(variance));
    Field out = image.field();
    for (double& v : out.data()) v = std::clamp(v + noise(rng), 0.0, 1.0);
    return Image(std::move(out));
}

inline double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw DomainError("feature vectors differ in length");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

// Minimum Euclidean distance; ties go to the earliest gallery entry.
template <class Label>
const Label& nn_classify(const FeatureVector& query, const std::vector<std::pair<Label, FeatureVector>>& gallery) {
    if (gallery.empty()) throw DomainError("gallery is empty");
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < gallery.size(); ++i) {
        const double d = euclidean_distance(query.values, gallery[i].second.values);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return gallery[best].first;
}

}  // namespace momentkit
