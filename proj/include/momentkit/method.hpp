#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>

#include "error.hpp"

namespace momentkit {

enum class Family {
    ZM, PZM, OFMM, CHFM, PJFM, JFM,
    RHFM, EFM, PCET, PCT, PST,
    BFM,
    FJFM, GRHFM, GPCET, GPCT, GPST
};

inline constexpr std::array<Family, 17> kAllFamilies = {
    Family::ZM,   Family::PZM,   Family::OFMM,  Family::CHFM, Family::PJFM, Family::JFM,
    Family::RHFM, Family::EFM,   Family::PCET,  Family::PCT,  Family::PST,  Family::BFM,
    Family::FJFM, Family::GRHFM, Family::GPCET, Family::GPCT, Family::GPST};

inline std::string_view family_name(Family f) {
    switch (f) {
        case Family::ZM: return "ZM";
        case Family::PZM: return "PZM";
        case Family::OFMM: return "OFMM";
        case Family::CHFM: return "CHFM";
        case Family::PJFM: return "PJFM";
        case Family::JFM: return "JFM";
        case Family::RHFM: return "RHFM";
        case Family::EFM: return "EFM";
        case Family::PCET: return "PCET";
        case Family::PCT: return "PCT";
        case Family::PST: return "PST";
        case Family::BFM: return "BFM";
        case Family::FJFM: return "FJFM";
        case Family::GRHFM: return "GRHFM";
        case Family::GPCET: return "GPCET";
        case Family::GPCT: return "GPCT";
        case Family::GPST: return "GPST";
    }
    return "?";
}

// Case-insensitive lookup; throws DomainError listing valid names.
inline Family parse_family(std::string_view name) {
    auto lower = [](std::string_view s) {
        std::string out(s);
        for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return out;
    };
    const std::string key = lower(name);
    for (Family f : kAllFamilies)
        if (lower(family_name(f)) == key) return f;
    std::string valid;
    for (Family f : kAllFamilies) {
        if (!valid.empty()) valid += ", ";
        valid += lower(family_name(f));
    }
    throw DomainError("unknown method '" + std::string(name) + "'; valid names: " + valid);
}

// Radial order set shape, one per row of the order-set table.
enum class OrderShape { zernike, pseudo_zernike, nonnegative, signed_n, positive };

inline OrderShape order_shape(Family f) {
    switch (f) {
        case Family::ZM: return OrderShape::zernike;
        case Family::PZM: return OrderShape::pseudo_zernike;
        case Family::EFM:
        case Family::PCET:
        case Family::GPCET: return OrderShape::signed_n;
        case Family::PST:
        case Family::GPST: return OrderShape::positive;
        default: return OrderShape::nonnegative;
    }
}

inline bool is_jacobi(Family f) {
    switch (f) {
        case Family::ZM:
        case Family::PZM:
        case Family::OFMM:
        case Family::CHFM:
        case Family::PJFM:
        case Family::JFM:
        case Family::FJFM: return true;
        default: return false;
    }
}

inline bool is_harmonic(Family f) {
    switch (f) {
        case Family::RHFM:
        case Family::EFM:
        case Family::PCET:
        case Family::PCT:
        case Family::PST:
        case Family::GRHFM:
        case Family::GPCET:
        case Family::GPCT:
        case Family::GPST: return true;
        default: return false;
    }
}

inline bool is_fractional(Family f) {
    switch (f) {
        case Family::FJFM:
        case Family::GRHFM:
        case Family::GPCET:
        case Family::GPCT:
        case Family::GPST: return true;
        default: return false;
    }
}

inline bool has_complex_radial(Family f) { return order_shape(f) == OrderShape::signed_n; }

// Radial factor depends on |m| as well as n.
inline bool radial_depends_on_m(Family f) { return f == Family::ZM || f == Family::PZM; }

class MethodSpec {
public:
    MethodSpec() = default;

    // Classical families with no parameters.
    static MethodSpec of(Family f) {
        if (f == Family::JFM) return jfm(3.0, 3.0);
        if (f == Family::FJFM) return fjfm(3.0, 3.0, 1.0);
        if (f == Family::BFM) return bfm(1.0);
        if (is_fractional(f)) return fractional(f, 1.0);
        MethodSpec s;
        s.family_ = f;
        return s;
    }
    static MethodSpec jfm(double p, double q) {
        check_pq(p, q);
        MethodSpec s;
        s.family_ = Family::JFM;
        s.p_ = p;
        s.q_ = q;
        return s;
    }
    static MethodSpec fjfm(double p, double q, double alpha) {
        check_pq(p, q);
        check_alpha(alpha);
        MethodSpec s;
        s.family_ = Family::FJFM;
        s.p_ = p;
        s.q_ = q;
        s.alpha_ = alpha;
        return s;
    }
    static MethodSpec bfm(double v = 1.0) {
        if (!std::isfinite(v) || v < 0.0) throw DomainError("BFM Bessel order must be finite and >= 0");
        MethodSpec s;
        s.family_ = Family::BFM;
        s.bessel_order_ = v;
        return s;
    }
    // GRHFM, GPCET, GPCT, GPST (FJFM goes through fjfm()).
    static MethodSpec fractional(Family f, double alpha) {
        if (f == Family::FJFM) return fjfm(3.0, 3.0, alpha);
        if (!is_fractional(f)) throw DomainError("not a fractional family");
        check_alpha(alpha);
        MethodSpec s;
        s.family_ = f;
        s.alpha_ = alpha;
        return s;
    }

    Family family() const { return family_; }
    double p() const { return p_; }
    double q() const { return q_; }
    double alpha() const { return alpha_; }
    double bessel_order() const { return bessel_order_; }

    // ZM, JFM(3,3), FJFM(3,3,0.5), GPCET(2), BFM(1)
    std::string label() const {
        std::string out(family_name(family_));
        char buf[96];
        switch (family_) {
            case Family::JFM: std::snprintf(buf, sizeof buf, "(%g,%g)", p_, q_); out += buf; break;
            case Family::FJFM: std::snprintf(buf, sizeof buf, "(%g,%g,%g)", p_, q_, alpha_); out += buf; break;
            case Family::BFM: std::snprintf(buf, sizeof buf, "(%g)", bessel_order_); out += buf; break;
            case Family::GRHFM:
            case Family::GPCET:
            case Family::GPCT:
            case Family::GPST: std::snprintf(buf, sizeof buf, "(%g)", alpha_); out += buf; break;
            default: break;
        }
        return out;
    }

    friend bool operator==(const MethodSpec&, const MethodSpec&) = default;

private:
    static void check_pq(double p, double q) {
        if (!std::isfinite(p) || !std::isfinite(q)) throw DomainError("Jacobi parameters must be finite");
        if (!(p - q > -1.0)) throw DomainError("Jacobi parameters require p - q > -1");
        if (!(q > 0.0)) throw DomainError("Jacobi parameters require q > 0");
    }
    static void check_alpha(double alpha) {
        if (!std::isfinite(alpha) || !(alpha > 0.0)) throw DomainError("fractional parameter alpha must be > 0");
    }

    Family family_ = Family::ZM;
    double p_ = 0.0;
    double q_ = 0.0;
    double alpha_ = 1.0;
    double bessel_order_ = 1.0;
};

// Parses "zm", "jfm:3,3", "fjfm:3,3,0.5", "gpcet:2", "bfm:1", also "JFM(3,3)".
inline MethodSpec parse_method(std::string_view text) {
    std::string s(text);
    std::string params;
    auto cut = s.find_first_of(":(");
    if (cut != std::string::npos) {
        params = s.substr(cut + 1);
        s.resize(cut);
        if (!params.empty() && params.back() == ')') params.pop_back();
    }
    const Family f = parse_family(s);
    double v[3] = {0, 0, 0};
    int count = 0;
    std::size_t pos = 0;
    while (pos < params.size()) {
        if (count == 3) throw DomainError("too many method parameters in '" + std::string(text) + "'");
        std::size_t used = 0;
        try {
            v[count++] = std::stod(params.substr(pos), &used);
        } catch (const std::exception&) {
            throw DomainError("bad method parameter in '" + std::string(text) + "'");
        }
        pos += used;
        if (pos < params.size()) {
            if (params[pos] != ',') throw DomainError("bad method parameter in '" + std::string(text) + "'");
            ++pos;
        }
    }
    auto need = [&](int n) {
        if (count != 0 && count != n)
            throw DomainError("method '" + std::string(family_name(f)) + "' takes " + std::to_string(n) + " parameter(s)");
        return count == n;
    };
    switch (f) {
        case Family::JFM: return need(2) ? MethodSpec::jfm(v[0], v[1]) : MethodSpec::jfm(3, 3);
        case Family::FJFM: return need(3) ? MethodSpec::fjfm(v[0], v[1], v[2]) : MethodSpec::fjfm(3, 3, 1);
        case Family::BFM: return need(1) ? MethodSpec::bfm(v[0]) : MethodSpec::bfm(1);
        case Family::GRHFM:
        case Family::GPCET:
        case Family::GPCT:
        case Family::GPST: return need(1) ? MethodSpec::fractional(f, v[0]) : MethodSpec::fractional(f, 1);
        default:
            if (count != 0) throw DomainError("method '" + std::string(family_name(f)) + "' takes no parameters");
            return MethodSpec::of(f);
    }
}

}  // namespace momentkit
