#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <vector>

#include "fft.hpp"
#include "geometry.hpp"
#include "image.hpp"
#include "log.hpp"
#include "moments.hpp"
#include "parallel.hpp"
#include "polar.hpp"
#include "radial.hpp"

namespace momentkit {

namespace detail {

// Positions of every sample along one image axis (pixel-major, rule nodes inside)
// and the matching 1D weights. Pixel centers come from the scheme's mapping.
struct SampleAxis {
    std::vector<double> pos;
    std::vector<double> weight;  // per node, includes the cell width
    int per_pixel = 1;
    double cell = 0.0;
    std::vector<double> center;  // per pixel
};

inline SampleAxis make_axis(const Scheme& scheme, int N) {
    SampleAxis ax;
    ax.per_pixel = scheme.rule.points();
    const auto off = scheme.rule.offsets();
    const auto w = scheme.rule.weights();
    const Cell first = map_cell(scheme.mapping, 1, 1, N, scheme.alignment);
    ax.cell = first.dx;
    ax.center.resize(static_cast<std::size_t>(N));
    ax.pos.resize(static_cast<std::size_t>(N) * off.size());
    for (int i = 0; i < N; ++i) {
        const double c = map_cell(scheme.mapping, i + 1, 1, N, scheme.alignment).x;
        ax.center[static_cast<std::size_t>(i)] = c;
        for (std::size_t k = 0; k < off.size(); ++k) ax.pos[static_cast<std::size_t>(i) * off.size() + k] = c + ax.cell * off[k];
    }
    ax.weight.resize(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) ax.weight[k] = w[k] * ax.cell;
    return ax;
}

// Maps each order index to its radial slot and angular order.
struct OrderTable {
    std::vector<std::size_t> slot;
    std::vector<int> m;
};

inline OrderTable make_order_table(const OrderSet& set, const RadialKernel& kernel) {
    OrderTable t;
    for (const auto& idx : set) {
        const long s = kernel.slot(idx.n, idx.m);
        if (s < 0) throw Error("internal: order without kernel slot");
        t.slot.push_back(static_cast<std::size_t>(s));
        t.m.push_back(idx.m);
    }
    return t;
}

inline int kernel_n_max(const MethodSpec& method, int K) {
    return order_shape(method.family()) == OrderShape::positive ? std::max(K, 1) : K;
}

// Per-pixel integration weights h_nm for all indices of the order set.
class PixelKernel {
public:
    PixelKernel(const MethodSpec& method, int K, const Scheme& scheme, int N, RadialPath path)
        : set_(method, K),
          kernel_(method, kernel_n_max(method, K), path),
          table_(make_order_table(set_, kernel_)),
          axis_(make_axis(scheme, N)),
          strict_(scheme.strict),
          singular_(singular_at_origin(method, 0)),
          K_(K) {
        // ZM/PZM: only |m| = 0 can be singular and those families are regular everywhere.
    }

    std::size_t size() const { return set_.size(); }
    const OrderTable& table() const { return table_; }
    const SampleAxis& axis() const { return axis_; }

    bool skip_pixel(int row, int col) const {
        const Cell c{axis_.center[static_cast<std::size_t>(col)], axis_.center[static_cast<std::size_t>(row)], axis_.cell,
                     axis_.cell};
        return cell_outside_disk(c);
    }

    // hp[idx] = sum_w R* e^{-j m theta}; hm (optional) uses e^{+j m theta}.
    // Returns the number of kernel evaluations; sets `perturbed` on a singular node.
    std::uint64_t pixel(int row, int col, complex* hp, complex* hm, bool& perturbed) const {
        const std::size_t S = set_.size();
        std::fill(hp, hp + S, complex(0.0));
        if (hm) std::fill(hm, hm + S, complex(0.0));
        thread_local std::vector<double> re, im;
        thread_local std::vector<complex> E;
        re.assign(kernel_.slot_count(), 0.0);
        im.assign(kernel_.slot_count(), 0.0);
        E.assign(static_cast<std::size_t>(K_) + 1, complex(1.0));
        const bool cplx = kernel_.complex_valued();
        const int s = axis_.per_pixel;
        std::uint64_t evals = 0;
        for (int b = 0; b < s; ++b) {
            const double y = axis_.pos[static_cast<std::size_t>(row) * s + b];
            for (int a = 0; a < s; ++a) {
                const double x = axis_.pos[static_cast<std::size_t>(col) * s + a];
                double r = std::sqrt(x * x + y * y);
                if (strict_ && r > 1.0) continue;
                if (singular_ && r < kSingularNodeRadius) {
                    r = kSingularNodeRadius;
                    perturbed = true;
                }
                kernel_.evaluate(r, re.data(), cplx ? im.data() : nullptr);
                ++evals;
                for (std::size_t k = 0; k < re.size(); ++k)
                    if (!std::isfinite(re[k]) || !std::isfinite(im[k])) re[k] = im[k] = 0.0;
                const double w = axis_.weight[static_cast<std::size_t>(a)] * axis_.weight[static_cast<std::size_t>(b)];
                const complex e1 = std::polar(1.0, -std::atan2(y, x));
                for (int m = 1; m <= K_; ++m) E[static_cast<std::size_t>(m)] = E[static_cast<std::size_t>(m - 1)] * e1;
                // Written out in real arithmetic; std::complex products go through a NaN-checking helper.
                for (std::size_t i = 0; i < S; ++i) {
                    const int m = table_.m[i];
                    const complex& em = E[static_cast<std::size_t>(m >= 0 ? m : -m)];
                    const double ec = em.real(), es = m >= 0 ? em.imag() : -em.imag();
                    const std::size_t k = table_.slot[i];
                    const double a = w * re[k], b = cplx ? -w * im[k] : 0.0;
                    hp[i] += complex(a * ec - b * es, a * es + b * ec);
                    if (hm) hm[i] += complex(a * ec + b * es, b * ec - a * es);
                }
            }
        }
        return evals;
    }

private:
    OrderSet set_;
    RadialKernel kernel_;
    OrderTable table_;
    SampleAxis axis_;
    bool strict_;
    bool singular_;
    int K_;
};

inline void record(const ExecOptions& opt, std::uint64_t evals, std::uint64_t samples) {
    if (!opt.stats) return;
    opt.stats->kernel_evaluations += evals;
    opt.stats->samples += samples;
}

inline RadialPath path_for(Strategy s) { return s == Strategy::recursive ? RadialPath::recursive : RadialPath::direct; }

// Direct Cartesian sum, pixels in row-major order. Rows are processed in
// batches: kernels of a batch are evaluated in parallel over pixels, then every
// coefficient absorbs the batch in pixel order.
inline MomentSet decompose_cartesian(const Image& image, const MethodSpec& method, int K, const Scheme& scheme,
                                     const ExecOptions& opt) {
    const int N = image.size();
    const PixelKernel pk(method, K, scheme, N, path_for(scheme.strategy));
    MomentSet out(method, K, scheme);
    out.set_image_size(N);
    const std::size_t S = pk.size();
    auto& acc = out.values();
    constexpr int batch_rows = 8;
    std::vector<complex> H;
    std::vector<std::pair<int, int>> pix;
    std::atomic<std::uint64_t> evals{0};
    std::atomic<bool> perturbed{false};
    std::uint64_t samples = 0;
    for (int r0 = 0; r0 < N; r0 += batch_rows) {
        pix.clear();
        for (int r = r0; r < std::min(N, r0 + batch_rows); ++r)
            for (int c = 0; c < N; ++c)
                if (!pk.skip_pixel(r, c)) pix.emplace_back(r, c);
        H.assign(pix.size() * S, complex(0.0));
        parallel_for(pix.size(), opt.threads, [&](std::size_t b, std::size_t e, int) {
            std::uint64_t local = 0;
            bool pert = false;
            for (std::size_t p = b; p < e; ++p) local += pk.pixel(pix[p].first, pix[p].second, &H[p * S], nullptr, pert);
            evals += local;
            if (pert) perturbed = true;
        });
        parallel_for(S, opt.threads, [&](std::size_t b, std::size_t e, int) {
            for (std::size_t p = 0; p < pix.size(); ++p) {
                const double f = image.at(pix[p].first, pix[p].second);
                const complex* h = &H[p * S];
                for (std::size_t i = b; i < e; ++i) acc[i] += f * h[i];
            }
        });
        samples += pix.size();
    }
    if (perturbed) warn(method.label() + ": quadrature nodes at the origin moved to r = 1e-12");
    record(opt, evals, samples);
    return out;
}

// (-j)^m for integer m.
inline complex pow_minus_j(int m) {
    switch (((m % 4) + 4) % 4) {
        case 0: return {1, 0};
        case 1: return {0, -1};
        case 2: return {-1, 0};
        default: return {0, 1};
    }
}

// Eight-fold symmetric evaluation: kernels are evaluated on the octant
// 0 <= theta <= pi/4 only; the other seven pixels reuse them through
// theta -> pi/2 -/+ theta, pi -/+ theta, 3pi/2 -/+ theta, 2pi - theta.
inline MomentSet decompose_symmetric_impl(const Image& image, const MethodSpec& method, int K, const Scheme& scheme,
                                          const ExecOptions& opt) {
    const int N = image.size();
    if (N % 2 != 0) throw DomainError("symmetric decomposition requires an even image size");
    const PixelKernel pk(method, K, scheme, N, RadialPath::direct);
    MomentSet out(method, K, scheme);
    out.set_image_size(N);
    const std::size_t S = pk.size();
    std::vector<int> residue(S);  // m mod 4
    for (std::size_t i = 0; i < S; ++i) residue[i] = ((pk.table().m[i] % 4) + 4) % 4;
    const int h = N / 2;
    std::vector<std::pair<int, int>> octant;  // (row, col) with row >= h, col >= row
    for (int r = h; r < N; ++r)
        for (int c = r; c < N; ++c)
            if (!pk.skip_pixel(r, c)) octant.emplace_back(r, c);

    auto& acc = out.values();
    constexpr std::size_t batch = 512;
    std::vector<complex> Hp, Hm;
    std::atomic<std::uint64_t> evals{0};
    std::atomic<bool> perturbed{false};
    std::uint64_t samples = 0;
    for (std::size_t p0 = 0; p0 < octant.size(); p0 += batch) {
        const std::size_t cnt = std::min(batch, octant.size() - p0);
        Hp.assign(cnt * S, complex(0.0));
        Hm.assign(cnt * S, complex(0.0));
        parallel_for(cnt, opt.threads, [&](std::size_t b, std::size_t e, int) {
            std::uint64_t local = 0;
            bool pert = false;
            for (std::size_t p = b; p < e; ++p)
                local += pk.pixel(octant[p0 + p].first, octant[p0 + p].second, &Hp[p * S], &Hm[p * S], pert);
            evals += local;
            if (pert) perturbed = true;
        });
        parallel_for(S, opt.threads, [&](std::size_t b, std::size_t e, int) {
            for (std::size_t p = 0; p < cnt; ++p) {
                const int j = octant[p0 + p].first, c = octant[p0 + p].second;
                const int jb = N - 1 - j, cb = N - 1 - c;
                const double f1 = image.at(j, c), f4 = image.at(j, cb), f5 = image.at(jb, cb), f8 = image.at(jb, c);
                const bool diag = j == c;
                const double f2 = diag ? 0.0 : image.at(c, j), f3 = diag ? 0.0 : image.at(c, jb);
                const double f6 = diag ? 0.0 : image.at(cb, jb), f7 = diag ? 0.0 : image.at(cb, j);
                // (-j)^m f for the four residues of m mod 4.
                std::array<complex, 4> fp, fm;
                for (int q = 0; q < 4; ++q) {
                    const complex pj = pow_minus_j(q), nj = pow_minus_j(-q), sg = pow_minus_j(2 * q);
                    fp[static_cast<std::size_t>(q)] = f1 + pj * f3 + sg * f5 + nj * f7;
                    fm[static_cast<std::size_t>(q)] = pj * f2 + sg * f4 + nj * f6 + f8;
                }
                const complex* hp = &Hp[p * S];
                const complex* hm = &Hm[p * S];
                for (std::size_t i = b; i < e; ++i) {
                    const auto q = static_cast<std::size_t>(residue[i]);
                    const complex& a = fp[q];
                    const complex& d = fm[q];
                    acc[i] += complex(hp[i].real() * a.real() - hp[i].imag() * a.imag() + hm[i].real() * d.real() -
                                          hm[i].imag() * d.imag(),
                                      hp[i].real() * a.imag() + hp[i].imag() * a.real() + hm[i].real() * d.imag() +
                                          hm[i].imag() * d.real());
                }
            }
        });
        for (std::size_t p = 0; p < cnt; ++p) samples += octant[p0 + p].first == octant[p0 + p].second ? 4 : 8;
    }
    if (perturbed) warn(method.label() + ": quadrature nodes at the origin moved to r = 1e-12");
    record(opt, evals, samples);
    return out;
}

// Polar tiling: radial integrals per ring by the scheme's rule, angular factors exact.
inline MomentSet decompose_polar(const Image& image, const MethodSpec& method, int K, const Scheme& scheme,
                                 const ExecOptions& opt) {
    const int N = image.size();
    const int U = scheme.rings > 0 ? scheme.rings : std::max(1, N / 2);
    const PolarGrid grid = resample_to_polar(image, polar_grid(N, U), scheme.interp, Mapping::incircle);
    const RadialKernel kernel(method, kernel_n_max(method, K), path_for(scheme.strategy));
    MomentSet out(method, K, scheme);
    out.set_image_size(N);
    const OrderTable table = make_order_table(out.orders(), kernel);
    const std::size_t S = out.size();
    const bool cplx = kernel.complex_valued();
    const auto off = scheme.rule.offsets();
    const auto w = scheme.rule.weights();

    // Radial integrals: I[u][slot] = int R* r dr over ring u.
    const std::size_t slots = kernel.slot_count();
    std::vector<complex> I(static_cast<std::size_t>(U) * slots);
    std::atomic<std::uint64_t> evals{0};
    parallel_for(static_cast<std::size_t>(U), opt.threads, [&](std::size_t b, std::size_t e, int) {
        std::vector<double> re(slots), im(slots, 0.0);
        std::uint64_t local = 0;
        for (std::size_t u = b; u < e; ++u) {
            const double a = grid.r_in(static_cast<int>(u)), c = grid.r_out(static_cast<int>(u));
            for (std::size_t k = 0; k < off.size(); ++k) {
                const double r = 0.5 * (a + c) + (c - a) * off[k];
                kernel.evaluate(r, re.data(), cplx ? im.data() : nullptr);
                ++local;
                const double wk = w[k] * (c - a) * r;
                for (std::size_t s = 0; s < slots; ++s)
                    I[u * slots + s] += wk * complex(re[s], cplx ? -im[s] : 0.0);
            }
        }
        evals += local;
    });

    // Angular sums per ring and m, then combine in ring order.
    std::vector<complex> F(static_cast<std::size_t>(U) * (2 * static_cast<std::size_t>(K) + 1));
    parallel_for(static_cast<std::size_t>(U), opt.threads, [&](std::size_t b, std::size_t e, int) {
        for (std::size_t u = b; u < e; ++u) {
            const int sec = grid.sectors[u];
            for (int m = -K; m <= K; ++m) {
                complex sum = 0.0;
                for (int v = 0; v < sec; ++v)
                    sum += grid.intensity[grid.offset[u] + static_cast<std::size_t>(v)] *
                           angular_integral_exact(m, grid.theta_lo(static_cast<int>(u), v), grid.theta_hi(static_cast<int>(u), v));
                F[u * (2 * static_cast<std::size_t>(K) + 1) + static_cast<std::size_t>(m + K)] = sum;
            }
        }
    });
    auto& acc = out.values();
    parallel_for(S, opt.threads, [&](std::size_t b, std::size_t e, int) {
        for (std::size_t i = b; i < e; ++i)
            for (std::size_t u = 0; u < static_cast<std::size_t>(U); ++u)
                acc[i] += I[u * slots + table.slot[i]] *
                          F[u * (2 * static_cast<std::size_t>(K) + 1) + static_cast<std::size_t>(table.m[i] + K)];
    });
    record(opt, evals, grid.sample_count());
    return out;
}

}  // namespace detail

// M_nm = sum h_nm f over the samples of the scheme.
inline MomentSet decompose(const Image& image, const MethodSpec& method, int K, const Scheme& scheme,
                           const ExecOptions& opt = {}) {
    if (K < 0) throw DomainError("order bound K must be >= 0");
    validate_scheme(method, scheme);
    switch (scheme.strategy) {
        case Strategy::fft: {
            MomentSet out = decompose_fft(image, method, K, scheme.fft_size > 0 ? scheme.fft_size : default_fft_size(K),
                                          scheme.interp, opt);
            return out;
        }
        case Strategy::symmetric: return detail::decompose_symmetric_impl(image, method, K, scheme, opt);
        default:
            if (scheme.mapping == Mapping::polar) return detail::decompose_polar(image, method, K, scheme, opt);
            return detail::decompose_cartesian(image, method, K, scheme, opt);
    }
}

inline MomentSet decompose(const Image& image, const MethodSpec& method, int K) {
    return decompose(image, method, K, default_scheme(method));
}

// Same sums as the naive Cartesian scheme, with octant folding.
inline MomentSet decompose_symmetric(const Image& image, const MethodSpec& method, int K, Scheme scheme,
                                     const ExecOptions& opt = {}) {
    scheme.strategy = Strategy::symmetric;
    return decompose(image, method, K, scheme, opt);
}

// Per-pixel kernel weights stored once for a fixed (method, K, scheme, N); apply()
// then costs one multiply-add per pixel and index. Results are bitwise equal to
// decompose() with the same scheme.
class DecompositionPlan {
public:
    DecompositionPlan(const MethodSpec& method, int K, const Scheme& scheme, int N, int threads = 1)
        : method_(method), K_(K), scheme_(scheme), N_(N) {
        validate_scheme(method, scheme);
        if (scheme.mapping == Mapping::polar || scheme.strategy == Strategy::symmetric)
            throw UnsupportedError("plans cover the naive and recursive Cartesian schemes");
        if (N < 2) throw DomainError("image size must be >= 2");
        const detail::PixelKernel pk(method, K, scheme, N, detail::path_for(scheme.strategy));
        S_ = pk.size();
        for (int r = 0; r < N; ++r)
            for (int c = 0; c < N; ++c)
                if (!pk.skip_pixel(r, c)) pixels_.push_back(static_cast<std::size_t>(r) * static_cast<std::size_t>(N) + static_cast<std::size_t>(c));
        H_.assign(pixels_.size() * S_, complex(0.0));
        std::atomic<bool> perturbed{false};
        parallel_for(pixels_.size(), threads, [&](std::size_t b, std::size_t e, int) {
            bool pert = false;
            for (std::size_t p = b; p < e; ++p)
                pk.pixel(static_cast<int>(pixels_[p] / static_cast<std::size_t>(N)), static_cast<int>(pixels_[p] % static_cast<std::size_t>(N)),
                         &H_[p * S_], nullptr, pert);
            if (pert) perturbed = true;
        });
        if (perturbed) warn(method.label() + ": quadrature nodes at the origin moved to r = 1e-12");
    }

    int image_size() const { return N_; }

    MomentSet apply(const Image& image, int threads = 1) const {
        if (image.size() != N_) throw DomainError("plan was built for N = " + std::to_string(N_));
        MomentSet out(method_, K_, scheme_);
        out.set_image_size(N_);
        auto& acc = out.values();
        const auto& f = image.data();
        // Same accumulation order as decompose(): one running sum per index over
        // pixels in row-major order.
        parallel_for(S_, threads, [&](std::size_t b, std::size_t e, int) {
            for (std::size_t p = 0; p < pixels_.size(); ++p) {
                const double v = f[pixels_[p]];
                const complex* h = &H_[p * S_];
                for (std::size_t i = b; i < e; ++i) acc[i] += v * h[i];
            }
        });
        return out;
    }

private:
    MethodSpec method_;
    int K_;
    Scheme scheme_;
    int N_;
    std::size_t S_ = 0;
    std::vector<std::size_t> pixels_;
    std::vector<complex> H_;
};

}  // namespace momentkit
