#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "radial.hpp"

namespace momentkit {

// Sign changes of the real radial kernel R_n (R_nm for ZM/PZM) on (0, 1).
// 4096 midpoint samples; each bracketing interval is re-scanned at 64 points so a
// near-tangent pair of zeros inside one interval is counted as two, not zero.
inline int radial_zero_count(const MethodSpec& method, int n, int m = 0) {
    const Family f = method.family();
    if (has_complex_radial(f)) throw UnsupportedError(method.label() + " has a complex-valued radial kernel");
    if (!is_legal_order(f, n, radial_depends_on_m(f) ? m : 0))
        throw DomainError("illegal order for " + method.label());
    const RadialKernel kernel(method, n, RadialPath::recursive);
    const auto slot = static_cast<std::size_t>(kernel.slot(n, m));
    std::vector<double> buf(kernel.slot_count());
    auto R = [&](double r) {
        kernel.evaluate(r, buf.data());
        return buf[slot];
    };
    auto sign = [](double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); };

    constexpr int coarse = 4096;
    constexpr int fine = 64;
    int count = 0;
    int last = 0;
    double prev_r = 0.0;
    for (int i = 0; i < coarse; ++i) {
        const double r = (i + 0.5) / coarse;
        const int s = sign(R(r));
        if (s == 0) continue;
        if (last != 0 && s != last) {
            // Refine (prev_r, r) and count every change on the finer grid.
            int sub_last = last;
            for (int k = 1; k <= fine; ++k) {
                const double x = prev_r + (r - prev_r) * k / fine;
                const int t = sign(R(x));
                if (t != 0 && t != sub_last) {
                    ++count;
                    sub_last = t;
                }
            }
        } else if (last != 0) {
            // Same sign at both ends: an even number of crossings may hide here.
            int sub_last = last;
            int changes = 0;
            const double lo = prev_r;
            const double vlo = std::abs(R(lo)), vhi = std::abs(R(r));
            const double scale = std::max(vlo, vhi);
            const double mid = std::abs(R(0.5 * (lo + r)));
            if (mid < 0.25 * scale) {
                for (int k = 1; k <= fine; ++k) {
                    const int t = sign(R(lo + (r - lo) * k / fine));
                    if (t != 0 && t != sub_last) {
                        ++changes;
                        sub_last = t;
                    }
                }
                count += changes;
            }
        }
        last = s;
        prev_r = r;
    }
    return count;
}

}  // namespace momentkit
