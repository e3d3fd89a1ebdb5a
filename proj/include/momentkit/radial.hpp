#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "jacobi.hpp"
#include "method.hpp"
#include "order_set.hpp"
#include "special.hpp"

namespace momentkit {

using complex = std::complex<double>;

// Direct summation of the defining formula, or the orthonormal recurrence.
enum class RadialPath { direct, recursive };

// Exponent e with R_n(r) ~ r^e as r -> 0 (the smallest over n).
inline double origin_exponent(const MethodSpec& method, int m = 0) {
    switch (method.family()) {
        case Family::ZM:
        case Family::PZM: return std::abs(m);
        case Family::OFMM: return 0.0;
        case Family::CHFM: return -0.25;
        case Family::PJFM: return 0.5;
        case Family::JFM: return 0.5 * method.q() - 1.0;
        case Family::FJFM: return 0.5 * method.alpha() * method.q() - 1.0;
        case Family::RHFM:
        case Family::EFM: return -0.5;
        case Family::PCET:
        case Family::PCT:
        case Family::PST: return 0.0;
        case Family::BFM: return method.bessel_order();
        case Family::GRHFM:
        case Family::GPCET:
        case Family::GPCT:
        case Family::GPST: return 0.5 * method.alpha() - 1.0;
    }
    return 0.0;
}

inline bool singular_at_origin(const MethodSpec& method, int m = 0) { return origin_exponent(method, m) < 0.0; }

// JFM-type kernels carry (1 - r)^(p - q), unbounded at r = 1 when p < q.
inline bool singular_at_rim(const MethodSpec& method) {
    const Family f = method.family();
    return (f == Family::JFM || f == Family::FJFM) && method.p() - method.q() < 0.0;
}

namespace detail {

// Lowest and highest radial order a kernel covers for bound n_max.
inline int lowest_order(Family f, int n_max) { return order_shape(f) == OrderShape::signed_n ? -n_max : 0; }

struct Polynomial {
    double scale = 0.0;             // constant factor outside the sum
    std::vector<long double> coef;  // term coefficients
    std::vector<int> power;         // exponent of the summation variable per term
};

}  // namespace detail

// All radial values R_n (and R_nm for ZM/PZM) up to n_max at one radius.
// Immutable after construction; evaluate() is safe from any thread.
class RadialKernel {
public:
    RadialKernel(const MethodSpec& method, int n_max, RadialPath path = RadialPath::recursive)
        : method_(method), n_max_(n_max), path_(path) {
        if (n_max < 0) throw DomainError("n_max must be >= 0");
        const Family f = method.family();
        if (!is_jacobi(f)) path_ = RadialPath::direct;
        n_lo_ = detail::lowest_order(f, n_max);
        build_slots();
        if (is_jacobi(f)) {
            if (path_ == RadialPath::direct)
                build_direct();
            else
                build_recursive();
        } else if (f == Family::BFM) {
            const double v = method.bessel_order();
            lambda_ = bessel_zeros(v, n_max + 1);
            bessel_norm_.resize(lambda_.size());
            for (std::size_t i = 0; i < lambda_.size(); ++i) {
                const double j1 = bessel_j(v + 1.0, lambda_[i]);
                bessel_norm_[i] = 1.0 / std::sqrt(std::numbers::pi * j1 * j1);
            }
        }
    }

    const MethodSpec& method() const { return method_; }
    int n_max() const { return n_max_; }
    RadialPath path() const { return path_; }
    bool complex_valued() const { return has_complex_radial(method_.family()); }
    std::size_t slot_count() const { return slot_count_; }

    // Slot holding R for (n, m); m only matters for ZM/PZM. -1 if not covered.
    long slot(int n, int m = 0) const {
        if (n < n_lo_ || n > n_max_) return -1;
        if (!radial_depends_on_m(method_.family())) return n - n_lo_;
        const int am = std::abs(m);
        if (am > n) return -1;
        return zslot_[static_cast<std::size_t>(n) * static_cast<std::size_t>(n_max_ + 1) + static_cast<std::size_t>(am)];
    }

    // Fills re[slot] (and im[slot] for complex families) at radius r > 0.
    // Values at r = 0 or r >= 1 follow IEEE arithmetic; callers guard singular points.
    void evaluate(double r, double* re, double* im = nullptr) const {
        switch (method_.family()) {
            case Family::ZM: path_ == RadialPath::direct ? eval_zm_direct(r, re) : eval_zm_recursive(r, re); return;
            case Family::PZM: path_ == RadialPath::direct ? eval_pzm_direct(r, re) : eval_pzm_recursive(r, re); return;
            case Family::OFMM:
            case Family::PJFM:
            case Family::JFM:
            case Family::FJFM:
            case Family::CHFM:
                path_ == RadialPath::direct ? eval_single_direct(r, re) : eval_jacobi_recursive(r, re);
                return;
            case Family::BFM: eval_bfm(r, re); return;
            default: eval_harmonic(r, re, im); return;
        }
    }

    // Single value; allocation per call, intended for spot checks.
    complex value(int n, int m, double r) const {
        const long s = slot(n, m);
        if (s < 0) throw DomainError("order not covered by this kernel");
        std::vector<double> re(slot_count_), im(slot_count_, 0.0);
        evaluate(r, re.data(), im.data());
        return {re[static_cast<std::size_t>(s)], complex_valued() ? im[static_cast<std::size_t>(s)] : 0.0};
    }

private:
    void build_slots() {
        const Family f = method_.family();
        if (!radial_depends_on_m(f)) {
            slot_count_ = static_cast<std::size_t>(n_max_ - n_lo_ + 1);
            return;
        }
        const auto w = static_cast<std::size_t>(n_max_ + 1);
        zslot_.assign(w * w, -1);
        long next = 0;
        for (int n = 0; n <= n_max_; ++n)
            for (int am = 0; am <= n; ++am)
                if (is_legal_order(f, n, am)) zslot_[static_cast<std::size_t>(n) * w + static_cast<std::size_t>(am)] = next++;
        slot_count_ = static_cast<std::size_t>(next);
    }

    // Coefficients by incremental term ratios (extended precision, no log-gamma).
    void build_direct() {
        const Family f = method_.family();
        const double pi = std::numbers::pi;
        if (f == Family::ZM) {
            polys_.resize(slot_count_);
            for (int n = 0; n <= n_max_; ++n)
                for (int am = n % 2; am <= n; am += 2) {
                    auto& P = polys_[static_cast<std::size_t>(slot(n, am))];
                    const int a = (n + am) / 2, b = (n - am) / 2;
                    P.scale = std::sqrt((n + 1) / pi);
                    long double c = 1.0;  // n! / (a! b!)
                    for (int i = 1; i <= b; ++i) c = c * (a + i) / static_cast<long double>(i);
                    for (int k = 0; k <= b; ++k) {
                        P.coef.push_back(c);
                        P.power.push_back(n - 2 * k);
                        c = -c * (a - k) * (b - k) / ((k + 1.0L) * (n - k));
                    }
                }
            return;
        }
        if (f == Family::PZM) {
            polys_.resize(slot_count_);
            for (int n = 0; n <= n_max_; ++n)
                for (int am = 0; am <= n; ++am) {
                    auto& P = polys_[static_cast<std::size_t>(slot(n, am))];
                    P.scale = std::sqrt((n + 1) / pi);
                    const int top = n - am;
                    long double c = 1.0;  // (2n+1)! / ((n+|m|+1)! (n-|m|)!)
                    for (int i = 1; i <= top; ++i) c = c * (n + am + 1 + i) / static_cast<long double>(i);
                    for (int k = 0; k <= top; ++k) {
                        P.coef.push_back(c);
                        P.power.push_back(n - k);
                        c = -c * (n + am + 1.0 - k) * (n - am - k) / ((k + 1.0L) * (2.0 * n + 1.0 - k));
                    }
                }
            return;
        }
        polys_.resize(slot_count_);
        for (int n = 0; n <= n_max_; ++n) {
            auto& P = polys_[static_cast<std::size_t>(n)];
            const double sign = (n % 2 == 0) ? 1.0 : -1.0;
            if (f == Family::OFMM) {
                P.scale = std::sqrt((n + 1) / pi);
                long double c = sign * (n + 1.0);
                for (int k = 0; k <= n; ++k) {
                    P.coef.push_back(c);
                    P.power.push_back(k);
                    c = -c * (n + k + 2.0) * (n - k) / ((k + 1.0L) * (k + 2.0));
                }
            } else if (f == Family::PJFM) {
                P.scale = std::sqrt((n + 2.0) / (pi * (n + 3.0) * (n + 1.0)));
                long double c = sign * (n + 1.0) * (n + 2.0) * (n + 3.0) / 2.0;
                for (int k = 0; k <= n; ++k) {
                    P.coef.push_back(c);
                    P.power.push_back(k);
                    c = -c * (n + k + 4.0) * (n - k) / ((k + 1.0L) * (k + 3.0));
                }
            } else if (f == Family::CHFM) {
                P.scale = 2.0 / pi;
                long double c = 1.0;
                for (int k = 0; 2 * k <= n; ++k) {
                    P.coef.push_back(c);
                    P.power.push_back(n - 2 * k);
                    c = -c * (n - 2.0 * k) * (n - 2.0 * k - 1.0) / ((k + 1.0L) * (n - k));
                }
            } else {  // JFM, FJFM
                const long double p = method_.p(), q = method_.q();
                auto gamma = [](long double x) { return std::tgamma(x); };
                const long double norm =
                    (p + 2 * n) * gamma(q + n) * gamma(n + 1.0L) / (gamma(p + n) * gamma(p - q + n + 1));
                P.scale = static_cast<double>(std::sqrt(norm / (2.0L * pi)));
                long double c = sign * gamma(p + n) / (gamma(n + 1.0L) * gamma(q));
                for (int k = 0; k <= n; ++k) {
                    P.coef.push_back(c);
                    P.power.push_back(k);
                    c = -c * (p + n + k) * (n - k) / ((k + 1.0L) * (q + k));
                }
            }
        }
    }

    void build_recursive() {
        const Family f = method_.family();
        if (f == Family::ZM) {
            for (int am = 0; am <= n_max_; ++am) jac_.emplace_back(0.0, am, (n_max_ - am) / 2);
        } else if (f == Family::PZM) {
            for (int am = 0; am <= n_max_; ++am) jac_.emplace_back(0.0, 2.0 * am + 1.0, n_max_ - am);
        } else {
            const auto [a, b] = jacobi_exponents();
            jac_.emplace_back(a, b, n_max_);
        }
    }

    // (a, b) of the weight s^b (1 - s)^a behind the JFM-type families.
    std::pair<double, double> jacobi_exponents() const {
        switch (method_.family()) {
            case Family::OFMM: return {0.0, 1.0};
            case Family::CHFM: return {0.5, 0.5};
            case Family::PJFM: return {1.0, 2.0};
            default: return {method_.p() - method_.q(), method_.q() - 1.0};
        }
    }

    // Plain term-by-term sum; cancellation between large alternating terms is what
    // makes this path lose accuracy at high order.
    static double sum_terms(const detail::Polynomial& P, const long double* pw) {
        long double s = 0.0L;
        for (std::size_t k = 0; k < P.coef.size(); ++k) s += P.coef[k] * pw[P.power[k]];
        return static_cast<double>(s);
    }

    void powers(double x, std::vector<long double>& pw) const {
        pw.resize(static_cast<std::size_t>(n_max_) + 1);
        pw[0] = 1.0L;
        for (std::size_t e = 1; e < pw.size(); ++e) pw[e] = pw[e - 1] * static_cast<long double>(x);
    }

    void eval_zm_direct(double r, double* out) const {
        thread_local std::vector<long double> pw;
        powers(r, pw);
        for (std::size_t s = 0; s < slot_count_; ++s) out[s] = polys_[s].scale * sum_terms(polys_[s], pw.data());
    }
    void eval_pzm_direct(double r, double* out) const { eval_zm_direct(r, out); }

    void eval_single_direct(double r, double* out) const {
        const Family f = method_.family();
        thread_local std::vector<long double> pw;
        double front = 1.0;
        double x = r;
        if (f == Family::CHFM) {
            front = std::pow((1.0 - r) / r, 0.25);
            x = 4.0 * r - 2.0;
        } else if (f == Family::PJFM) {
            front = std::sqrt(r - r * r);
        } else if (f == Family::JFM || f == Family::FJFM) {
            const double alpha = f == Family::FJFM ? method_.alpha() : 1.0;
            x = f == Family::FJFM ? std::pow(r, alpha) : r;
            const double p = method_.p(), q = method_.q();
            front = std::sqrt(alpha * std::pow(r, alpha * q - 2.0) * std::pow(1.0 - x, p - q));
        }
        powers(x, pw);
        for (int n = 0; n <= n_max_; ++n) {
            const auto& P = polys_[static_cast<std::size_t>(n)];
            out[n] = front * P.scale * sum_terms(P, pw.data());
        }
    }

    void eval_zm_recursive(double r, double* out) const {
        thread_local std::vector<double> phi;
        phi.resize(static_cast<std::size_t>(n_max_) + 1);
        const double s = r * r;
        double rm = 1.0 / std::sqrt(std::numbers::pi);  // r^|m| / sqrt(pi)
        for (int am = 0; am <= n_max_; ++am) {
            const auto& J = jac_[static_cast<std::size_t>(am)];
            J.evaluate(s, phi.data());
            for (int j = 0; j <= J.n_max(); ++j) out[slot(am + 2 * j, am)] = rm * phi[static_cast<std::size_t>(j)];
            rm *= r;
        }
    }

    void eval_pzm_recursive(double r, double* out) const {
        thread_local std::vector<double> phi;
        phi.resize(static_cast<std::size_t>(n_max_) + 1);
        double rm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
        for (int am = 0; am <= n_max_; ++am) {
            const auto& J = jac_[static_cast<std::size_t>(am)];
            J.evaluate(r, phi.data());
            for (int j = 0; j <= J.n_max(); ++j) out[slot(am + j, am)] = rm * phi[static_cast<std::size_t>(j)];
            rm *= r;
        }
    }

    void eval_jacobi_recursive(double r, double* out) const {
        const auto& J = jac_.front();
        const double alpha = method_.family() == Family::FJFM ? method_.alpha() : 1.0;
        const double s = alpha == 1.0 ? r : std::pow(r, alpha);
        // sqrt(alpha r^(alpha (b+1) - 2) (1 - s)^a / (2 pi))
        const double front = std::sqrt(alpha * std::pow(r, alpha * (J.b() + 1.0) - 2.0) * std::pow(1.0 - s, J.a()) /
                                       (2.0 * std::numbers::pi));
        J.evaluate(s, out);
        for (int n = 0; n <= n_max_; ++n) out[n] *= front;
    }

    void eval_bfm(double r, double* out) const {
        const double v = method_.bessel_order();
        for (int n = 0; n <= n_max_; ++n) {
            const auto k = static_cast<std::size_t>(n);
            out[n] = bessel_norm_[k] * bessel_j(v, lambda_[k] * r);
        }
    }

    void eval_harmonic(double r, double* re, double* im) const {
        const double pi = std::numbers::pi;
        const Family f = method_.family();
        switch (f) {
            case Family::RHFM: {
                const double w = 1.0 / std::sqrt(pi * r);
                for (int n = 0; n <= n_max_; ++n) {
                    if (n == 0)
                        re[n] = 1.0 / std::sqrt(2.0 * pi * r);
                    else if (n % 2 == 1)
                        re[n] = w * std::sin(pi * (n + 1) * r);
                    else
                        re[n] = w * std::cos(pi * n * r);
                }
                return;
            }
            case Family::EFM: {
                const double w = 1.0 / std::sqrt(2.0 * pi * r);
                for (int n = n_lo_; n <= n_max_; ++n) {
                    const double ph = 2.0 * n * pi * r;
                    re[n - n_lo_] = w * std::cos(ph);
                    if (im) im[n - n_lo_] = w * std::sin(ph);
                }
                return;
            }
            case Family::PCET: {
                const double w = 1.0 / std::sqrt(pi);
                for (int n = n_lo_; n <= n_max_; ++n) {
                    const double ph = 2.0 * n * pi * r * r;
                    re[n - n_lo_] = w * std::cos(ph);
                    if (im) im[n - n_lo_] = w * std::sin(ph);
                }
                return;
            }
            case Family::PCT: {
                const double w = std::sqrt(2.0 / pi);
                for (int n = 0; n <= n_max_; ++n) re[n] = n == 0 ? 1.0 / std::sqrt(pi) : w * std::cos(n * pi * r * r);
                return;
            }
            case Family::PST: {
                const double w = std::sqrt(2.0 / pi);
                for (int n = 0; n <= n_max_; ++n) re[n] = w * std::sin(n * pi * r * r);
                return;
            }
            default: break;
        }
        // Generic fractional harmonic: sqrt(alpha r^(alpha-2)) g_n(r^alpha).
        const double alpha = method_.alpha();
        const double s = std::pow(r, alpha);
        const double w = std::sqrt(alpha * std::pow(r, alpha - 2.0));
        const double c0 = w / std::sqrt(2.0 * pi);
        const double c1 = w / std::sqrt(pi);
        switch (f) {
            case Family::GPCET:
                for (int n = n_lo_; n <= n_max_; ++n) {
                    const double ph = 2.0 * pi * n * s;
                    re[n - n_lo_] = c0 * std::cos(ph);
                    if (im) im[n - n_lo_] = c0 * std::sin(ph);
                }
                return;
            case Family::GPCT:
                for (int n = 0; n <= n_max_; ++n) re[n] = n == 0 ? c0 : c1 * std::cos(pi * n * s);
                return;
            case Family::GPST:
                for (int n = 0; n <= n_max_; ++n) re[n] = c1 * std::sin(pi * n * s);
                return;
            case Family::GRHFM:
                for (int n = 0; n <= n_max_; ++n) {
                    if (n == 0)
                        re[n] = c0;
                    else if (n % 2 == 1)
                        re[n] = c1 * std::sin(pi * (n + 1) * s);
                    else
                        re[n] = c1 * std::cos(pi * n * s);
                }
                return;
            default: throw UnsupportedError("no radial kernel for family");
        }
    }

    MethodSpec method_;
    int n_max_ = 0;
    RadialPath path_ = RadialPath::recursive;
    int n_lo_ = 0;
    std::size_t slot_count_ = 0;
    std::vector<long> zslot_;
    std::vector<detail::Polynomial> polys_;
    std::vector<ShiftedJacobi> jac_;
    std::vector<double> lambda_;
    std::vector<double> bessel_norm_;
};

inline void check_radial_args(const MethodSpec& method, int n, int m, double r) {
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("radius must lie in [0, 1]");
    const Family f = method.family();
    const int mm = radial_depends_on_m(f) ? m : 0;
    if (!is_legal_order(f, n, mm))
        throw DomainError("illegal order (" + std::to_string(n) + ", " + std::to_string(m) + ") for " + method.label());
    if (r == 0.0 && singular_at_origin(method, mm))
        throw SingularityError(method.label() + " radial kernel is unbounded at r = 0");
    if (r == 1.0 && singular_at_rim(method))
        throw SingularityError(method.label() + " radial kernel is unbounded at r = 1 (p < q)");
}

// R_n(r) by direct summation of the defining formula; m is read only for ZM/PZM.
inline complex radial_eval(const MethodSpec& method, int n, double r, int m = 0) {
    check_radial_args(method, n, m, r);
    const RadialKernel kernel(method, std::abs(n), RadialPath::direct);
    return kernel.value(n, m, r);
}

// table[n][i] for n in 0..n_max (ZM/PZM: fixed m; rows with illegal n are zero).
inline std::vector<std::vector<complex>> radial_table(const MethodSpec& method, int n_max,
                                                      const std::vector<double>& r_samples, RadialPath path,
                                                      int m = 0) {
    const RadialKernel kernel(method, n_max, path);
    const Family f = method.family();
    const int lo = detail::lowest_order(f, n_max);
    std::vector<std::vector<complex>> table(static_cast<std::size_t>(n_max - lo + 1),
                                            std::vector<complex>(r_samples.size()));
    std::vector<double> re(kernel.slot_count()), im(kernel.slot_count(), 0.0);
    for (std::size_t i = 0; i < r_samples.size(); ++i) {
        const double r = r_samples[i];
        if (!(r >= 0.0 && r <= 1.0)) throw DomainError("radius must lie in [0, 1]");
        if (r == 0.0 && singular_at_origin(method, m))
            throw SingularityError(method.label() + " radial kernel is unbounded at r = 0");
        kernel.evaluate(r, re.data(), im.data());
        for (int n = lo; n <= n_max; ++n) {
            const long s = kernel.slot(n, m);
            if (s < 0 || !is_legal_order(f, n, radial_depends_on_m(f) ? m : 0)) continue;
            const auto k = static_cast<std::size_t>(s);
            table[static_cast<std::size_t>(n - lo)][i] = {re[k], kernel.complex_valued() ? im[k] : 0.0};
        }
    }
    return table;
}

// Recursive table for the Jacobi families; rows indexed by n = 0..n_max.
inline std::vector<std::vector<complex>> radial_table_recursive(const MethodSpec& method, int n_max,
                                                                const std::vector<double>& r_samples, int m = 0) {
    if (!is_jacobi(method.family()))
        throw UnsupportedError(method.label() + " has closed-form kernels; no recursion is defined");
    return radial_table(method, n_max, r_samples, RadialPath::recursive, m);
}

inline complex angular_eval(int m, double theta) { return std::polar(1.0, m * theta); }

using RadialFunction = std::function<complex(double)>;

// r -> R_n(r) through radial_eval.
inline RadialFunction radial_function(const MethodSpec& method, int n, int m = 0) {
    return [method, n, m](double r) { return radial_eval(method, n, r, m); };
}

// r -> sqrt(alpha) r^(alpha - 1) base(r^alpha)
inline RadialFunction fractionalize(RadialFunction base, double alpha) {
    if (!std::isfinite(alpha) || !(alpha > 0.0)) throw DomainError("fractional parameter alpha must be > 0");
    return [base = std::move(base), alpha](double r) {
        return std::sqrt(alpha) * std::pow(r, alpha - 1.0) * base(std::pow(r, alpha));
    };
}

}  // namespace momentkit
