#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "log.hpp"
#include "radial.hpp"
#include "special.hpp"

namespace momentkit {

enum class Mapping { incircle, circumcircle, polar };

// literal: x = (2i - N)/N as printed, 1-based i, which puts pixel N on the rim and
// leaves the grid half a pixel off center. centered: x = (2i - N - 1)/N, the cell
// centers are symmetric about the origin and the cells tile the square exactly.
enum class Alignment { centered, literal };

// Mapped pixel region [x - dx/2, x + dx/2] x [y - dy/2, y + dy/2].
struct Cell {
    double x = 0.0;
    double y = 0.0;
    double dx = 0.0;
    double dy = 0.0;
};

namespace detail {

inline double mapping_extent(Mapping mapping) {
    return mapping == Mapping::circumcircle ? std::numbers::sqrt2 / 2.0 : 1.0;
}

inline Cell map_pixel(int i, int j, int N, double half, Alignment align) {
    if (N < 1 || i < 1 || i > N || j < 1 || j > N)
        throw DomainError("pixel index out of range for N = " + std::to_string(N));
    const double h = half / N;
    const int shift = align == Alignment::centered ? 1 : 0;
    return {(2 * i - N - shift) * h, (2 * j - N - shift) * h, 2.0 * h, 2.0 * h};
}

}  // namespace detail

inline Cell map_incircle(int i, int j, int N, Alignment align = Alignment::literal) {
    return detail::map_pixel(i, j, N, 1.0, align);
}

inline Cell map_circumcircle(int i, int j, int N, Alignment align = Alignment::literal) {
    return detail::map_pixel(i, j, N, std::numbers::sqrt2 / 2.0, align);
}

inline Cell map_cell(Mapping mapping, int i, int j, int N, Alignment align = Alignment::literal) {
    if (mapping == Mapping::polar) throw UnsupportedError("polar mapping has no per-pixel cells");
    return detail::map_pixel(i, j, N, detail::mapping_extent(mapping), align);
}

// Largest corner radius and smallest distance from the origin to the cell.
inline double cell_max_radius(const Cell& c) {
    const double ax = std::abs(c.x) + c.dx / 2, ay = std::abs(c.y) + c.dy / 2;
    return std::sqrt(ax * ax + ay * ay);
}

inline double cell_min_radius(const Cell& c) {
    const double ax = std::max(0.0, std::abs(c.x) - c.dx / 2), ay = std::max(0.0, std::abs(c.y) - c.dy / 2);
    return std::sqrt(ax * ax + ay * ay);
}

inline bool cell_outside_disk(const Cell& c) { return cell_min_radius(c) >= 1.0; }

// Integration rule over one cell, expressed as 1D nodes on [-1/2, 1/2] with
// weights summing to 1; the 2D rule is the tensor product.
class Rule {
public:
    enum class Kind { zoa, upsample, gauss };

    static Rule zoa() { return Rule(Kind::zoa, 1); }
    static Rule upsample(int s) {
        if (s < 1) throw DomainError("upsampling factor must be >= 1");
        return Rule(Kind::upsample, s);
    }
    static Rule gauss(int g) {
        if (g < 1) throw DomainError("Gauss order must be >= 1");
        return Rule(Kind::gauss, g);
    }

    Kind kind() const { return kind_; }
    int order() const { return order_; }
    int points() const { return order_; }

    // Node offsets, exactly antisymmetric: offsets[k] == -offsets[n-1-k].
    std::vector<double> offsets() const {
        std::vector<double> out(static_cast<std::size_t>(order_));
        if (kind_ == Kind::gauss) {
            const auto& g = gauss_legendre(order_);
            for (int k = 0; k < order_; ++k) out[static_cast<std::size_t>(k)] = 0.5 * g.nodes[static_cast<std::size_t>(k)];
        } else {
            for (int k = 0; k < order_; ++k) out[static_cast<std::size_t>(k)] = (2.0 * k + 1.0 - order_) / (2.0 * order_);
        }
        return out;
    }

    std::vector<double> weights() const {
        std::vector<double> out(static_cast<std::size_t>(order_), 1.0 / order_);
        if (kind_ == Kind::gauss) {
            const auto& g = gauss_legendre(order_);
            for (int k = 0; k < order_; ++k) out[static_cast<std::size_t>(k)] = 0.5 * g.weights[static_cast<std::size_t>(k)];
        }
        return out;
    }

    std::string label() const {
        switch (kind_) {
            case Kind::zoa: return "zoa";
            case Kind::upsample: return "upsample:" + std::to_string(order_);
            case Kind::gauss: return "gauss:" + std::to_string(order_);
        }
        return "?";
    }

    friend bool operator==(const Rule&, const Rule&) = default;

private:
    Rule(Kind kind, int order) : kind_(kind), order_(order) {}
    Kind kind_ = Kind::zoa;
    int order_ = 1;
};

enum class Strategy { naive, symmetric, recursive, fft };
enum class Interp { bilinear, bicubic };

namespace detail {
inline std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}
}  // namespace detail

// "zoa", "upsample:3" (or "up:3"), "gauss:5"
inline Rule parse_rule(std::string_view text) {
    const std::string t = detail::lower(text);
    const auto colon = t.find(':');
    const std::string head = t.substr(0, colon);
    int arg = 0;
    if (colon != std::string::npos) {
        try {
            std::size_t used = 0;
            arg = std::stoi(t.substr(colon + 1), &used);
            if (used != t.size() - colon - 1) throw DomainError("");
        } catch (const std::exception&) {
            throw DomainError("bad rule argument in '" + std::string(text) + "'");
        }
    }
    if (head == "zoa" && colon == std::string::npos) return Rule::zoa();
    if (head == "upsample" || head == "up") return Rule::upsample(colon == std::string::npos ? 3 : arg);
    if (head == "gauss") return Rule::gauss(colon == std::string::npos ? 5 : arg);
    throw DomainError("unknown rule '" + std::string(text) + "' (expected zoa, upsample:S, gauss:G)");
}

inline std::string mapping_name(Mapping m) {
    switch (m) {
        case Mapping::incircle: return "incircle";
        case Mapping::circumcircle: return "circumcircle";
        case Mapping::polar: return "polar";
    }
    return "?";
}

inline std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::naive: return "naive";
        case Strategy::symmetric: return "symmetric";
        case Strategy::recursive: return "recursive";
        case Strategy::fft: return "fft";
    }
    return "?";
}

inline std::string interp_name(Interp i) { return i == Interp::bilinear ? "bilinear" : "bicubic"; }

inline Interp parse_interp(std::string_view text) {
    const std::string t = detail::lower(text);
    if (t == "bilinear") return Interp::bilinear;
    if (t == "bicubic") return Interp::bicubic;
    throw DomainError("unknown interpolation '" + std::string(text) + "' (expected bilinear, bicubic)");
}

inline std::string alignment_name(Alignment a) { return a == Alignment::centered ? "centered" : "literal"; }

inline Alignment parse_alignment(std::string_view text) {
    const std::string t = detail::lower(text);
    if (t == "centered") return Alignment::centered;
    if (t == "literal") return Alignment::literal;
    throw DomainError("unknown alignment '" + std::string(text) + "' (expected centered, literal)");
}

inline Mapping parse_mapping(std::string_view text) {
    const std::string t = detail::lower(text);
    if (t == "incircle") return Mapping::incircle;
    if (t == "circumcircle") return Mapping::circumcircle;
    if (t == "polar") return Mapping::polar;
    throw DomainError("unknown mapping '" + std::string(text) + "' (expected incircle, circumcircle, polar)");
}

inline Strategy parse_strategy(std::string_view text) {
    const std::string t = detail::lower(text);
    if (t == "naive") return Strategy::naive;
    if (t == "symmetric") return Strategy::symmetric;
    if (t == "recursive") return Strategy::recursive;
    if (t == "fft") return Strategy::fft;
    throw DomainError("unknown strategy '" + std::string(text) + "' (expected naive, symmetric, recursive, fft)");
}

struct Scheme {
    Mapping mapping = Mapping::circumcircle;
    Rule rule = Rule::upsample(3);
    Strategy strategy = Strategy::recursive;
    // Drop every sample with r > 1 instead of extending the kernel past the rim.
    bool strict = false;
    Alignment alignment = Alignment::centered;
    // Polar only: ring count (0 = N/2), FFT sampling size (0 = automatic).
    int rings = 0;
    int fft_size = 0;
    Interp interp = Interp::bilinear;

    std::string label() const {
        std::string s = mapping_name(mapping) + "+" + rule.label() + "+" + strategy_name(strategy);
        if (strict) s += "+strict";
        if (alignment == Alignment::literal) s += "+literal";
        return s;
    }

    friend bool operator==(const Scheme&, const Scheme&) = default;
};

// Automatic FFT sampling size for order bound K.
inline int default_fft_size(int K) { return std::max(4 * K, 2 * K + 2); }

inline bool fft_capable(Family f) { return is_harmonic(f); }

// Jacobi families (and BFM): circumcircle + upsample(3) + recursion.
// Harmonic families: polar tiling + FFT.
inline Scheme default_scheme(const MethodSpec& method) {
    Scheme s;
    if (fft_capable(method.family())) {
        s.mapping = Mapping::polar;
        s.strategy = Strategy::fft;
    }
    return s;
}

inline void validate_scheme(const MethodSpec& method, const Scheme& scheme) {
    if (scheme.strategy == Strategy::fft) {
        if (scheme.mapping != Mapping::polar) throw UnsupportedError("fft strategy requires the polar mapping");
        if (!fft_capable(method.family()))
            throw UnsupportedError("fft strategy is defined only for harmonic families, not " + method.label());
    }
    if (scheme.strategy == Strategy::symmetric && scheme.mapping == Mapping::polar)
        throw UnsupportedError("symmetric strategy requires a Cartesian mapping");
    if (scheme.strategy == Strategy::symmetric && scheme.alignment == Alignment::literal)
        throw UnsupportedError("symmetric strategy requires the centered alignment");
}

// Radius below which a node of a singular family is moved outward.
inline constexpr double kSingularNodeRadius = 1e-12;

// h_nm over one cell: rule-weighted sum of V*_nm = R*_n(r) exp(-j m theta) times dx dy.
// Nodes past the rim use the kernel's analytic extension (0 if that is not finite);
// with strict = true they are dropped.
inline complex kernel_weight(const MethodSpec& method, int n, int m, const Cell& cell, const Rule& rule,
                             bool strict = false) {
    const Family f = method.family();
    const int mm = radial_depends_on_m(f) ? m : 0;
    if (!is_legal_order(f, n, mm))
        throw DomainError("illegal order (" + std::to_string(n) + ", " + std::to_string(m) + ") for " + method.label());
    if (!(cell.dx > 0.0 && cell.dy > 0.0)) throw DomainError("cell extent must be positive");
    const RadialKernel kernel(method, std::abs(n), RadialPath::direct);
    const auto slot = static_cast<std::size_t>(kernel.slot(n, m));
    std::vector<double> re(kernel.slot_count()), im(kernel.slot_count(), 0.0);
    const bool singular = singular_at_origin(method, mm);
    const auto off = rule.offsets();
    const auto w = rule.weights();
    complex acc = 0.0;
    bool perturbed = false;
    for (std::size_t a = 0; a < off.size(); ++a)
        for (std::size_t b = 0; b < off.size(); ++b) {
            const double x = cell.x + cell.dx * off[a];
            const double y = cell.y + cell.dy * off[b];
            double r = std::sqrt(x * x + y * y);
            if (strict && r > 1.0) continue;
            if (singular && r < kSingularNodeRadius) {
                r = kSingularNodeRadius;
                perturbed = true;
            }
            kernel.evaluate(r, re.data(), im.data());
            const complex R(re[slot], kernel.complex_valued() ? im[slot] : 0.0);
            if (!std::isfinite(R.real()) || !std::isfinite(R.imag())) continue;
            acc += w[a] * w[b] * std::conj(R) * std::polar(1.0, -m * std::atan2(y, x));
        }
    if (perturbed) warn(method.label() + ": quadrature node at the origin moved to r = 1e-12");
    return acc * (cell.dx * cell.dy);
}

}  // namespace momentkit
