#pragma once

#include <atomic>
#include <cmath>
#include <complex>
#include <vector>

#include "geometry.hpp"
#include "image.hpp"
#include "log.hpp"
#include "moments.hpp"
#include "parallel.hpp"

namespace momentkit {

// f(x, y) = sum M_nm V_nm(x, y) at the mapped pixel centers (real part), 0 outside
// the unit disk. Polar and FFT moments are synthesized on the incircle grid.
inline Field reconstruct(const MomentSet& moments, int N, int threads = 1) {
    if (N < 2) throw DomainError("image size must be >= 2");
    Field out(N);
    if (moments.size() == 0) return out;
    const MethodSpec& method = moments.method();
    const int K = moments.K();
    Scheme scheme = moments.scheme();
    const Mapping mapping = scheme.mapping == Mapping::polar ? Mapping::incircle : scheme.mapping;
    const RadialKernel kernel(method, order_shape(method.family()) == OrderShape::positive ? std::max(K, 1) : K,
                              RadialPath::recursive);
    std::vector<std::size_t> slot;
    for (const auto& idx : moments.orders()) slot.push_back(static_cast<std::size_t>(kernel.slot(idx.n, idx.m)));
    std::vector<double> centers(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) centers[static_cast<std::size_t>(i)] = map_cell(mapping, i + 1, 1, N, scheme.alignment).x;
    const bool singular = singular_at_origin(method, 0);
    const bool cplx = kernel.complex_valued();
    std::atomic<bool> perturbed{false};
    parallel_for(static_cast<std::size_t>(N), threads, [&](std::size_t b, std::size_t e, int) {
        std::vector<double> re(kernel.slot_count()), im(kernel.slot_count(), 0.0);
        std::vector<complex> E(static_cast<std::size_t>(K) + 1);
        for (std::size_t row = b; row < e; ++row) {
            const double y = centers[row];
            for (int col = 0; col < N; ++col) {
                const double x = centers[static_cast<std::size_t>(col)];
                double r = std::sqrt(x * x + y * y);
                if (r > 1.0) continue;
                if (singular && r < kSingularNodeRadius) {
                    r = kSingularNodeRadius;
                    perturbed = true;
                }
                kernel.evaluate(r, re.data(), cplx ? im.data() : nullptr);
                const complex e1 = std::polar(1.0, std::atan2(y, x));
                E[0] = 1.0;
                for (int m = 1; m <= K; ++m) E[static_cast<std::size_t>(m)] = E[static_cast<std::size_t>(m - 1)] * e1;
                double v = 0.0;
                for (std::size_t i = 0; i < moments.size(); ++i) {
                    const int m = moments.orders()[i].m;
                    const complex a = m >= 0 ? E[static_cast<std::size_t>(m)] : std::conj(E[static_cast<std::size_t>(-m)]);
                    const complex R(re[slot[i]], cplx ? im[slot[i]] : 0.0);
                    v += (moments[i] * R * a).real();
                }
                out.at(static_cast<int>(row), col) = v;
            }
        }
    });
    if (perturbed) warn(method.label() + ": reconstruction sample at the origin moved to r = 1e-12");
    return out;
}

// Reconstruction clipped to [0, 1].
inline Image reconstruct_image(const MomentSet& moments, int N, int threads = 1) {
    return Image::clipped(reconstruct(moments, N, threads));
}

}  // namespace momentkit
