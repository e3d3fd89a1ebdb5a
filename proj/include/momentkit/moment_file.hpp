#pragma once

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "image.hpp"
#include "moments.hpp"

namespace momentkit {

inline constexpr int kMomentFileVersion = 1;

// Exact text form of a double ("0x1.921fb54442d18p+1").
inline std::string hex_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

inline double parse_hex_double(const std::string& s) {
    if (s.empty()) throw DataError("empty numeric field");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) throw DataError("bad numeric field '" + s + "'");
    return v;
}

// FNV-1a over N and the bit patterns of the pixel values, row-major.
inline std::string image_hash(const Image& image) {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&](std::uint64_t word) {
        for (int i = 0; i < 8; ++i) {
            h ^= (word >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    mix(static_cast<std::uint64_t>(image.size()));
    for (double v : image.data()) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        mix(bits);
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016" PRIx64, h);
    return buf;
}

struct MomentFile {
    MomentSet moments;
    std::string image_hash;  // empty when unknown
};

inline nlohmann::ordered_json method_to_json(const MethodSpec& m) {
    nlohmann::ordered_json j;
    j["family"] = std::string(family_name(m.family()));
    j["label"] = m.label();
    j["p"] = hex_double(m.p());
    j["q"] = hex_double(m.q());
    j["alpha"] = hex_double(m.alpha());
    j["bessel_order"] = hex_double(m.bessel_order());
    return j;
}

inline MethodSpec method_from_json(const nlohmann::json& j) {
    const Family f = parse_family(j.at("family").get<std::string>());
    const double p = parse_hex_double(j.at("p").get<std::string>()), q = parse_hex_double(j.at("q").get<std::string>());
    const double alpha = parse_hex_double(j.at("alpha").get<std::string>());
    const double v = parse_hex_double(j.at("bessel_order").get<std::string>());
    switch (f) {
        case Family::JFM: return MethodSpec::jfm(p, q);
        case Family::FJFM: return MethodSpec::fjfm(p, q, alpha);
        case Family::BFM: return MethodSpec::bfm(v);
        default: return is_fractional(f) ? MethodSpec::fractional(f, alpha) : MethodSpec::of(f);
    }
}

inline nlohmann::ordered_json scheme_to_json(const Scheme& s) {
    nlohmann::ordered_json j;
    j["mapping"] = mapping_name(s.mapping);
    j["rule"] = s.rule.label();
    j["strategy"] = strategy_name(s.strategy);
    j["strict"] = s.strict;
    j["alignment"] = alignment_name(s.alignment);
    j["rings"] = s.rings;
    j["fft_size"] = s.fft_size;
    j["interp"] = interp_name(s.interp);
    return j;
}

// Missing keys keep their defaults, so partial objects work as overrides.
inline Scheme scheme_from_json(const nlohmann::json& j, Scheme s = {}) {
    if (!j.is_object()) throw DataError("scheme must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k == "mapping") s.mapping = parse_mapping(it->get<std::string>());
        else if (k == "rule") s.rule = parse_rule(it->get<std::string>());
        else if (k == "strategy") s.strategy = parse_strategy(it->get<std::string>());
        else if (k == "strict") s.strict = it->get<bool>();
        else if (k == "alignment") s.alignment = parse_alignment(it->get<std::string>());
        else if (k == "rings") s.rings = it->get<int>();
        else if (k == "fft_size") s.fft_size = it->get<int>();
        else if (k == "interp") s.interp = parse_interp(it->get<std::string>());
        else throw DataError("unknown scheme field '" + k + "'");
    }
    return s;
}

inline std::string serialize_moments(const MomentSet& ms, const std::string& hash = {}) {
    nlohmann::ordered_json j;
    j["format"] = "momentkit-moments";
    j["version"] = kMomentFileVersion;
    j["method"] = method_to_json(ms.method());
    j["K"] = ms.K();
    j["scheme"] = scheme_to_json(ms.scheme());
    j["image"] = {{"size", ms.image_size()}, {"hash", hash}};
    auto& records = j["records"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const auto [n, m] = ms.orders()[i];
        const double re = ms[i].real(), im = ms[i].imag();
        nlohmann::ordered_json r;
        r["n"] = n;
        r["m"] = m;
        r["re"] = hex_double(re);
        r["im"] = hex_double(im);
        // Decimal mirror for reading; ignored on input. Non-finite values become null.
        r["re_dec"] = re;
        r["im_dec"] = im;
        records.push_back(std::move(r));
    }
    return j.dump(1) + "\n";
}

inline MomentFile parse_moments(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("moment file is not valid JSON: ") + e.what());
    }
    try {
        if (j.at("format") != "momentkit-moments") throw DataError("not a moment file");
        if (j.at("version").get<int>() != kMomentFileVersion)
            throw DataError("unsupported moment file version " + j.at("version").dump());
        MomentSet ms(method_from_json(j.at("method")), j.at("K").get<int>(), scheme_from_json(j.at("scheme")));
        ms.set_image_size(j.at("image").at("size").get<int>());
        const auto& records = j.at("records");
        if (!records.is_array() || records.size() != ms.size())
            throw DataError("moment file record count " + std::to_string(records.size()) + " differs from |S(K)| = " +
                            std::to_string(ms.size()));
        std::vector<bool> seen(ms.size(), false);
        for (const auto& r : records) {
            const int n = r.at("n").get<int>(), m = r.at("m").get<int>();
            const long idx = ms.orders().find(n, m);
            if (idx < 0) throw DataError("record (" + std::to_string(n) + ", " + std::to_string(m) + ") is outside the order set");
            const auto i = static_cast<std::size_t>(idx);
            if (seen[i]) throw DataError("duplicate record (" + std::to_string(n) + ", " + std::to_string(m) + ")");
            seen[i] = true;
            ms[i] = complex(parse_hex_double(r.at("re").get<std::string>()), parse_hex_double(r.at("im").get<std::string>()));
        }
        return {std::move(ms), j.at("image").at("hash").get<std::string>()};
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed moment file: ") + e.what());
    } catch (const DomainError& e) {
        throw DataError(std::string("malformed moment file: ") + e.what());
    }
}

inline void write_moment_file(const MomentSet& ms, const std::string& path, const std::string& hash = {}) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << serialize_moments(ms, hash);
    if (!out) throw DataError("cannot write '" + path + "'");
}

inline MomentFile read_moment_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_moments(ss.str());
}

}  // namespace momentkit
