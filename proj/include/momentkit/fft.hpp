#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "geometry.hpp"
#include "image.hpp"
#include "moments.hpp"
#include "parallel.hpp"
#include "polar.hpp"

namespace momentkit {

namespace detail {

enum class HarmonicKind { exp, cos, sin, rh };

struct HarmonicForm {
    HarmonicKind kind;
    double alpha;
};

// Every harmonic family written as R_n(r) = sqrt(alpha r^(alpha-2)) g_n(r^alpha).
inline HarmonicForm harmonic_form(const MethodSpec& method) {
    switch (method.family()) {
        case Family::EFM: return {HarmonicKind::exp, 1.0};
        case Family::PCET: return {HarmonicKind::exp, 2.0};
        case Family::GPCET: return {HarmonicKind::exp, method.alpha()};
        case Family::PCT: return {HarmonicKind::cos, 2.0};
        case Family::GPCT: return {HarmonicKind::cos, method.alpha()};
        case Family::PST: return {HarmonicKind::sin, 2.0};
        case Family::GPST: return {HarmonicKind::sin, method.alpha()};
        case Family::RHFM: return {HarmonicKind::rh, 1.0};
        case Family::GRHFM: return {HarmonicKind::rh, method.alpha()};
        default: throw UnsupportedError("no FFT form for " + method.label());
    }
}

}  // namespace detail

// Uniform (s, theta) sampling of the disk with s = r^alpha: M radial cells of
// width 1/M and M angular sectors, intensities at cell centers. The cell sums use
// exact integrals of the harmonic factors, so both directions reduce to DFTs
// (length M over theta, zero-padded length 2M over s).
inline MomentSet decompose_fft(const Image& image, const MethodSpec& method, int K, int M,
                               Interp interp = Interp::bilinear, const ExecOptions& opt = {}) {
    if (!fft_capable(method.family())) throw UnsupportedError("fft strategy is defined only for harmonic families, not " + method.label());
    if (K < 0) throw DomainError("order bound K must be >= 0");
    if (M < 2 * K + 2) throw DomainError("FFT sampling size M must be >= 2K + 2 (got M = " + std::to_string(M) + ")");
    const auto form = detail::harmonic_form(method);
    const double alpha = form.alpha;
    const double pi = std::numbers::pi;
    const auto Mu = static_cast<std::size_t>(M);

    // Weighted samples G = f r^(1 - alpha/2), rows u (radial), columns v (angular).
    std::vector<std::vector<complex>> rowsY(Mu);
    parallel_for(Mu, opt.threads, [&](std::size_t b, std::size_t e, int) {
        Eigen::FFT<double> fft;
        std::vector<complex> g(Mu);
        for (std::size_t u = b; u < e; ++u) {
            const double s = (u + 0.5) / M;
            const double r = std::pow(s, 1.0 / alpha);
            const double wgt = std::pow(r, 1.0 - alpha / 2.0);
            for (std::size_t v = 0; v < Mu; ++v) {
                const double t = 2.0 * pi * (v + 0.5) / M;
                g[v] = wgt * sample_image(image, r * std::cos(t), r * std::sin(t), interp, Mapping::incircle);
            }
            fft.fwd(rowsY[u], g);
        }
    });

    // Radial transform for each angular order in -K..K.
    const std::size_t L = 2 * Mu;
    const auto W = 2 * static_cast<std::size_t>(K) + 1;
    std::vector<std::vector<complex>> T(W);
    parallel_for(W, opt.threads, [&](std::size_t b, std::size_t e, int) {
        Eigen::FFT<double> fft;
        std::vector<complex> x(L);
        for (std::size_t w = b; w < e; ++w) {
            const int m = static_cast<int>(w) - K;
            const complex cm = m == 0 ? complex(2.0 * pi / M)
                                      : std::polar(2.0 * std::sin(m * pi / M) / m, -m * pi / M);
            const std::size_t col = static_cast<std::size_t>(((m % M) + M) % M);
            std::fill(x.begin(), x.end(), complex(0.0));
            for (std::size_t u = 0; u < Mu; ++u) x[u] = cm * rowsY[u][col];
            fft.fwd(T[w], x);
        }
    });

    // int over s-cell u of exp(-j pi k s) ds = exp(-j pi k (u + 1/2)/M) sin(pi k/(2M)) / (pi k / 2)
    auto Tk = [&](std::size_t w, int k) {
        const std::size_t bin = static_cast<std::size_t>(((k % static_cast<int>(L)) + static_cast<int>(L)) % static_cast<int>(L));
        const complex d = k == 0 ? complex(1.0 / M)
                                 : std::polar(std::sin(pi * k / (2.0 * M)) / (pi * k / 2.0), -pi * k / (2.0 * M));
        return T[w][bin] * d;
    };
    const double inv_sqrt_pi = 1.0 / std::sqrt(pi), inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * pi);
    auto cos_part = [&](std::size_t w, int n) {
        return n == 0 ? Tk(w, 0) * inv_sqrt_2pi : (Tk(w, n) + Tk(w, -n)) * (0.5 * inv_sqrt_pi);
    };
    auto sin_part = [&](std::size_t w, int n) { return (Tk(w, -n) - Tk(w, n)) / complex(0.0, 2.0) * inv_sqrt_pi; };

    Scheme scheme = default_scheme(method);
    scheme.fft_size = M;
    scheme.interp = interp;
    MomentSet out(method, K, scheme);
    out.set_image_size(image.size());
    const double norm = 1.0 / std::sqrt(alpha);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto [n, m] = out.orders()[i];
        const auto w = static_cast<std::size_t>(m + K);
        complex v;
        switch (form.kind) {
            case detail::HarmonicKind::exp: v = Tk(w, 2 * n) * inv_sqrt_2pi; break;
            case detail::HarmonicKind::cos: v = cos_part(w, n); break;
            case detail::HarmonicKind::sin: v = sin_part(w, n); break;
            case detail::HarmonicKind::rh: v = (n % 2) ? sin_part(w, n + 1) : cos_part(w, n); break;
        }
        out[i] = norm * v;
    }
    if (opt.stats) opt.stats->samples += Mu * Mu;
    return out;
}

}  // namespace momentkit
