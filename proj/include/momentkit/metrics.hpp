#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <vector>

#include "image.hpp"
#include "moments.hpp"

namespace momentkit {

struct AceResult {
    double value = 0.0;
    bool unstable = false;  // some coefficient was not finite; value is then +inf
};

// sum over m != 0 of |M_nm|, divided by the full |S(K)|.
inline AceResult ace_report(const MomentSet& moments) {
    AceResult out;
    if (moments.size() == 0) return out;
    double sum = 0.0;
    for (std::size_t i = 0; i < moments.size(); ++i) {
        if (moments.orders()[i].m == 0) continue;
        const double a = std::abs(moments[i]);
        if (!std::isfinite(a)) out.unstable = true;
        sum += a;
    }
    out.value = out.unstable ? std::numeric_limits<double>::infinity() : sum / static_cast<double>(moments.size());
    if (!std::isfinite(out.value)) {
        out.unstable = true;
        out.value = std::numeric_limits<double>::infinity();
    }
    return out;
}

inline double ace(const MomentSet& moments) { return ace_report(moments).value; }

// Median wall time in seconds over `repeats` runs (lower median for even counts).
// Timed regions are serialized process-wide; the task itself must run on one worker.
inline double decomposition_time(const std::function<void()>& task, int repeats = 5) {
    if (repeats < 1) throw DomainError("repeats must be >= 1");
    static std::mutex timing;
    std::lock_guard lock(timing);
    std::vector<double> t;
    t.reserve(static_cast<std::size_t>(repeats));
    for (int i = 0; i < repeats; ++i) {
        const auto a = std::chrono::steady_clock::now();
        task();
        t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - a).count());
    }
    std::sort(t.begin(), t.end());
    return t[static_cast<std::size_t>((repeats - 1) / 2)];
}

// Pixels whose centered incircle center lies in the closed unit disk.
inline bool in_disk(int row, int col, int N) {
    const double x = (2.0 * col + 1.0 - N) / N, y = (2.0 * row + 1.0 - N) / N;
    return x * x + y * y <= 1.0;
}

namespace detail {
inline void check_same_size(const Image& a, const Image& b) {
    if (a.size() != b.size()) throw DomainError("images differ in size");
}
}  // namespace detail

// sum (f - g)^2 / sum f^2 over in-disk pixels.
inline double msre(const Image& original, const Image& reconstructed) {
    detail::check_same_size(original, reconstructed);
    const int N = original.size();
    double num = 0.0, den = 0.0;
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) {
            if (!in_disk(r, c, N)) continue;
            const double f = original.at(r, c), d = f - reconstructed.at(r, c);
            num += d * d;
            den += f * f;
        }
    if (den == 0.0) throw DomainError("MSRE is undefined for an all-zero original");
    return num / den;
}

// Global SSIM over in-disk pixels on the 0..255 scale.
inline double ssim(const Image& original, const Image& reconstructed) {
    detail::check_same_size(original, reconstructed);
    const int N = original.size();
    std::vector<double> a, b;
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c)
            if (in_disk(r, c, N)) {
                a.push_back(255.0 * original.at(r, c));
                b.push_back(255.0 * reconstructed.at(r, c));
            }
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double va = 0.0, vb = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
        cov += (a[i] - ma) * (b[i] - mb);
    }
    const double d = n > 1 ? n - 1 : 1;
    va /= d;
    vb /= d;
    cov /= d;
    const double C1 = std::pow(0.01 * 255, 2), C2 = std::pow(0.03 * 255, 2);
    return (2 * ma * mb + C1) * (2 * cov + C2) / ((ma * ma + mb * mb + C1) * (va + vb + C2));
}

// Percentage of matching labels.
template <class Label>
double ccp(const std::vector<Label>& predictions, const std::vector<Label>& truth) {
    if (predictions.size() != truth.size()) throw DomainError("prediction and truth lists differ in length");
    if (truth.empty()) throw DomainError("CCP needs at least one sample");
    std::size_t ok = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) ok += predictions[i] == truth[i] ? 1 : 0;
    return 100.0 * static_cast<double>(ok) / static_cast<double>(truth.size());
}

}  // namespace momentkit
