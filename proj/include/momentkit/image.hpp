#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "error.hpp"

namespace momentkit {

// Square grid of unrestricted reals, row-major; (row, col) addressing.
class Field {
public:
    Field() = default;
    explicit Field(int N, double value = 0.0) : N_(N) {
        if (N < 1) throw DomainError("image size must be >= 1");
        data_.assign(static_cast<std::size_t>(N) * static_cast<std::size_t>(N), value);
    }
    Field(int N, std::vector<double> data) : N_(N), data_(std::move(data)) {
        if (N < 1 || data_.size() != static_cast<std::size_t>(N) * static_cast<std::size_t>(N))
            throw DataError("pixel count does not match " + std::to_string(N) + "x" + std::to_string(N));
    }

    int size() const { return N_; }
    double& at(int row, int col) { return data_[index(row, col)]; }
    double at(int row, int col) const { return data_[index(row, col)]; }
    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    friend bool operator==(const Field&, const Field&) = default;

private:
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(N_) + static_cast<std::size_t>(col);
    }

    int N_ = 0;
    std::vector<double> data_;
};

// Grayscale image with intensities in [0, 1]. N >= 2.
class Image {
public:
    Image() = default;
    explicit Image(int N, double value = 0.0) : Image(Field(N, value)) {}
    Image(int N, std::vector<double> data) : Image(Field(N, std::move(data))) {}
    explicit Image(Field field) : field_(std::move(field)) {
        if (field_.size() < 2) throw DomainError("image size must be >= 2");
        for (double v : field_.data())
            if (!std::isfinite(v) || v < 0.0 || v > 1.0) throw DataError("image intensities must be finite and in [0, 1]");
    }

    // Clips to [0, 1]; NaN becomes 0.
    static Image clipped(const Field& field) {
        Field f = field;
        for (double& v : f.data()) v = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
        return Image(std::move(f));
    }

    int size() const { return field_.size(); }
    double at(int row, int col) const { return field_.at(row, col); }
    const std::vector<double>& data() const { return field_.data(); }
    const Field& field() const { return field_; }

    friend bool operator==(const Image&, const Image&) = default;

private:
    Field field_;
};

// Built-in test images.
namespace synthetic {

inline Image unity(int N) { return Image(N, 1.0); }

inline Image checker(int N, int cells = 8) {
    Field f(N);
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) f.at(r, c) = ((r * cells / N + c * cells / N) % 2) ? 1.0 : 0.0;
    return Image(std::move(f));
}

// Radial ramp r^2 under the centered incircle mapping, clamped at 1.
inline Image radial_gradient(int N) {
    Field f(N);
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) {
            const double x = (2.0 * c + 1.0 - N) / N, y = (2.0 * r + 1.0 - N) / N;
            f.at(r, c) = std::min(1.0, x * x + y * y);
        }
    return Image(std::move(f));
}

// Smooth random scene: Gaussian blobs over a few oriented sinusoids, normalized to [0, 1].
inline Image photo(int N, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    struct Blob {
        double x, y, sx, sy, angle, amp;
    };
    struct Wave {
        double kx, ky, phase, amp;
    };
    std::vector<Blob> blobs(12);
    for (auto& b : blobs)
        b = {u(rng) * 1.6 - 0.8, u(rng) * 1.6 - 0.8, 0.05 + 0.3 * u(rng), 0.05 + 0.3 * u(rng),
             std::numbers::pi * u(rng), u(rng) * 2.0 - 0.7};
    std::vector<Wave> waves(3);
    for (auto& w : waves) {
        const double k = 2.0 + 8.0 * u(rng), a = 2.0 * std::numbers::pi * u(rng);
        w = {k * std::cos(a), k * std::sin(a), 2.0 * std::numbers::pi * u(rng), 0.08 + 0.12 * u(rng)};
    }
    Field f(N);
    double lo = 1e300, hi = -1e300;
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) {
            const double x = (2.0 * c + 1.0 - N) / N, y = (2.0 * r + 1.0 - N) / N;
            double v = 0.0;
            for (const auto& b : blobs) {
                const double ca = std::cos(b.angle), sa = std::sin(b.angle);
                const double dx = x - b.x, dy = y - b.y;
                const double p = (ca * dx + sa * dy) / b.sx, q = (-sa * dx + ca * dy) / b.sy;
                v += b.amp * std::exp(-0.5 * (p * p + q * q));
            }
            for (const auto& w : waves) v += w.amp * std::sin(w.kx * x + w.ky * y + w.phase);
            f.at(r, c) = v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    const double span = hi > lo ? hi - lo : 1.0;
    for (double& v : f.data()) v = std::clamp((v - lo) / span, 0.0, 1.0);
    return Image(std::move(f));
}

}  // namespace synthetic

}  // namespace momentkit
