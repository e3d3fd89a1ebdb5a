#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "geometry.hpp"
#include "image.hpp"

namespace momentkit {

// Ring/sector tiling of the unit disk. Ring u (0-based) spans
// [ring_radii[u-1], ring_radii[u]] (inner radius 0 for u = 0) and holds
// sectors[u] equal sectors starting at theta = 0.
struct PolarGrid {
    std::vector<double> ring_radii;
    std::vector<int> sectors;
    std::vector<std::size_t> offset;  // first sample index of each ring
    std::vector<double> intensity;    // one per tile once resampled, else empty

    int rings() const { return static_cast<int>(ring_radii.size()); }
    std::size_t sample_count() const { return offset.empty() ? 0 : offset.back() + static_cast<std::size_t>(sectors.back()); }
    double r_in(int u) const { return u == 0 ? 0.0 : ring_radii[static_cast<std::size_t>(u - 1)]; }
    double r_out(int u) const { return ring_radii[static_cast<std::size_t>(u)]; }
    double r_mid(int u) const { return 0.5 * (r_in(u) + r_out(u)); }
    double theta_lo(int u, int v) const { return 2.0 * std::numbers::pi * v / sectors[static_cast<std::size_t>(u)]; }
    double theta_hi(int u, int v) const { return 2.0 * std::numbers::pi * (v + 1) / sectors[static_cast<std::size_t>(u)]; }
    double theta_mid(int u, int v) const {
        return std::numbers::pi * (2.0 * v + 1.0) / sectors[static_cast<std::size_t>(u)];
    }
    double tile_area(int u, int v) const {
        const double a = r_in(u), b = r_out(u);
        return 0.5 * (b * b - a * a) * (theta_hi(u, v) - theta_lo(u, v));
    }
};

// Sector count for ring u (1-based): max(8, 2 pi u) rounded to a multiple of 4.
inline int polar_sector_count(int u) {
    const int s = 4 * static_cast<int>(std::lround(2.0 * std::numbers::pi * u / 4.0));
    return std::max(8, s);
}

// U rings of equal radial width. N is accepted for interface symmetry; the
// tiling depends on U only.
inline PolarGrid polar_grid(int N, int U) {
    if (N < 1) throw DomainError("image size must be >= 1");
    if (U < 1) throw DomainError("polar grid needs at least one ring");
    PolarGrid g;
    std::size_t pos = 0;
    for (int u = 1; u <= U; ++u) {
        g.ring_radii.push_back(u == U ? 1.0 : static_cast<double>(u) / U);
        g.sectors.push_back(polar_sector_count(u));
        g.offset.push_back(pos);
        pos += static_cast<std::size_t>(g.sectors.back());
    }
    return g;
}

// Integral of exp(-j m theta) over [a, b].
inline complex angular_integral_exact(int m, double a, double b) {
    if (!(a <= b)) throw DomainError("angular integral needs theta_a <= theta_b");
    if (m == 0) return b - a;
    const complex j(0.0, 1.0);
    return j * (std::polar(1.0, -m * b) - std::polar(1.0, -m * a)) / static_cast<double>(m);
}

namespace detail {

inline double cubic_weight(double t) {
    // Keys kernel, a = -0.5
    t = std::abs(t);
    if (t < 1.0) return (1.5 * t - 2.5) * t * t + 1.0;
    if (t < 2.0) return ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0;
    return 0.0;
}

}  // namespace detail

// Intensity at the disk point (x, y). The image square is [-e, e]^2 with e = 1
// (incircle, polar) or 1/sqrt(2) (circumcircle); outside it the value is 0. Pixel
// centers sit at the centered-alignment positions and edges are clamped.
inline double sample_image(const Image& image, double x, double y, Interp interp,
                           Mapping mapping = Mapping::incircle) {
    const int N = image.size();
    const double e = detail::mapping_extent(mapping);
    if (std::abs(x) > e || std::abs(y) > e) return 0.0;
    const double cx = (x / e * N + N - 1) / 2.0;
    const double cy = (y / e * N + N - 1) / 2.0;
    auto px = [&](int r, int c) { return image.at(std::clamp(r, 0, N - 1), std::clamp(c, 0, N - 1)); };
    if (interp == Interp::bilinear) {
        const double fx = std::clamp(cx, 0.0, N - 1.0), fy = std::clamp(cy, 0.0, N - 1.0);
        const int c0 = std::min(static_cast<int>(fx), N - 2), r0 = std::min(static_cast<int>(fy), N - 2);
        const double tx = fx - c0, ty = fy - r0;
        // Difference form keeps constants exact.
        const double top = px(r0, c0) + tx * (px(r0, c0 + 1) - px(r0, c0));
        const double bottom = px(r0 + 1, c0) + tx * (px(r0 + 1, c0 + 1) - px(r0 + 1, c0));
        return top + ty * (bottom - top);
    }
    const int c0 = static_cast<int>(std::floor(cx)), r0 = static_cast<int>(std::floor(cy));
    const double ref = px(r0, c0);
    double v = 0.0;
    for (int dr = -1; dr <= 2; ++dr) {
        const double wr = detail::cubic_weight(cy - (r0 + dr));
        double row = 0.0;
        for (int dc = -1; dc <= 2; ++dc) row += detail::cubic_weight(cx - (c0 + dc)) * (px(r0 + dr, c0 + dc) - ref);
        v += wr * row;
    }
    return ref + v;
}

// Fills grid.intensity with the image value at each tile center.
inline PolarGrid resample_to_polar(const Image& image, PolarGrid grid, Interp interp = Interp::bilinear,
                                   Mapping mapping = Mapping::incircle) {
    grid.intensity.assign(grid.sample_count(), 0.0);
    for (int u = 0; u < grid.rings(); ++u) {
        const double r = grid.r_mid(u);
        for (int v = 0; v < grid.sectors[static_cast<std::size_t>(u)]; ++v) {
            const double t = grid.theta_mid(u, v);
            grid.intensity[grid.offset[static_cast<std::size_t>(u)] + static_cast<std::size_t>(v)] =
                sample_image(image, r * std::cos(t), r * std::sin(t), interp, mapping);
        }
    }
    return grid;
}

}  // namespace momentkit
