#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "decompose.hpp"
#include "invariants.hpp"
#include "io.hpp"
#include "metrics.hpp"
#include "moment_file.hpp"
#include "parallel.hpp"
#include "reconstruct.hpp"

namespace momentkit {

inline constexpr int kReportVersion = 1;

struct ExperimentConfig {
    std::vector<MethodSpec> methods;
    std::vector<int> K_values;
    // unity | checker | gradient | photo | photo:<seed> | path to a PGM/PNG file
    std::string image = "unity";
    int N = 128;
    std::vector<double> rotations;        // degrees; recognition only
    std::vector<double> noise_variances;  // recognition only
    std::uint64_t seed = 1;
    nlohmann::json scheme = nlohmann::json::object();  // overrides on top of default_scheme(method)
    std::vector<Strategy> strategies;                  // accuracy only; empty = the scheme's own
    int gallery_size = 10;                             // built-in photo gallery when gallery_dir is empty
    std::string gallery_dir;
    RotateInterp rotate_interp = RotateInterp::bilinear;
    int repeats = 3;
    bool timing = true;
    int threads = 1;
    std::string dump_dir;  // reconstruction rasters, optional
};

inline void validate_config(const ExperimentConfig& c) {
    if (c.methods.empty()) throw DataError("config: methods must be non-empty");
    if (c.K_values.empty()) throw DataError("config: K values must be non-empty");
    for (int K : c.K_values)
        if (K < 0) throw DataError("config: K values must be >= 0");
    if (c.N < 2) throw DataError("config: N must be >= 2");
    if (c.repeats < 1) throw DataError("config: repeats must be >= 1");
    if (c.threads < 0) throw DataError("config: threads must be >= 0");
    for (double v : c.noise_variances)
        if (!(v >= 0.0)) throw DataError("config: noise variances must be >= 0");
}

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw DataError("config must be a JSON object");
    ExperimentConfig c;
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& k = it.key();
            const auto& v = *it;
            if (k == "methods") {
                for (const auto& m : v) c.methods.push_back(parse_method(m.get<std::string>()));
            } else if (k == "K" || k == "K_values") {
                c.K_values = v.get<std::vector<int>>();
            } else if (k == "image") {
                c.image = v.get<std::string>();
            } else if (k == "N") {
                c.N = v.get<int>();
            } else if (k == "rotations") {
                c.rotations = v.get<std::vector<double>>();
            } else if (k == "noise_variances") {
                c.noise_variances = v.get<std::vector<double>>();
            } else if (k == "seed") {
                c.seed = v.get<std::uint64_t>();
            } else if (k == "scheme") {
                scheme_from_json(v);  // validates field names and values
                c.scheme = v;
            } else if (k == "strategies") {
                for (const auto& s : v) c.strategies.push_back(parse_strategy(s.get<std::string>()));
            } else if (k == "gallery_size") {
                c.gallery_size = v.get<int>();
            } else if (k == "gallery_dir") {
                c.gallery_dir = v.get<std::string>();
            } else if (k == "rotate_interp") {
                const auto s = v.get<std::string>();
                if (s == "bilinear") c.rotate_interp = RotateInterp::bilinear;
                else if (s == "nearest") c.rotate_interp = RotateInterp::nearest;
                else throw DataError("config: rotate_interp must be bilinear or nearest");
            } else if (k == "repeats") {
                c.repeats = v.get<int>();
            } else if (k == "timing") {
                c.timing = v.get<bool>();
            } else if (k == "threads") {
                c.threads = v.get<int>();
            } else if (k == "dump_dir") {
                c.dump_dir = v.get<std::string>();
            } else {
                throw DataError("config: unknown field '" + k + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("config: ") + e.what());
    } catch (const DomainError& e) {
        throw DataError(std::string("config: ") + e.what());
    }
    validate_config(c);
    return c;
}

inline ExperimentConfig read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    try {
        return parse_config(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError("config '" + path + "' is not valid JSON: " + e.what());
    }
}

// Default scheme of the method with the config overrides applied. A mapping
// override without a strategy moves FFT methods to the recursive engine.
inline Scheme scheme_for(const MethodSpec& method, const ExperimentConfig& c) {
    const Scheme base = default_scheme(method);
    Scheme s = scheme_from_json(c.scheme, base);
    if (!c.scheme.contains("strategy") && s.strategy == Strategy::fft && s.mapping != Mapping::polar)
        s.strategy = Strategy::recursive;
    return s;
}

inline Image load_source(const std::string& source, int N, std::uint64_t seed) {
    if (source == "unity") return synthetic::unity(N);
    if (source == "checker") return synthetic::checker(N);
    if (source == "gradient") return synthetic::radial_gradient(N);
    if (source == "photo") return synthetic::photo(N, seed);
    if (source.rfind("photo:", 0) == 0) {
        try {
            return synthetic::photo(N, std::stoull(source.substr(6)));
        } catch (const std::logic_error&) {
            throw DataError("bad photo seed in '" + source + "'");
        }
    }
    return read_image(source);
}

struct ReportRow {
    std::string experiment;
    std::string method;
    std::string params;
    int K = 0;
    std::string strategy;
    std::string metric;
    double value = 0.0;
    std::string flag;  // "", "unstable", "timing", "unsupported"
};

inline std::string format_value(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}
}  // namespace detail

struct Report {
    std::vector<ReportRow> rows;

    std::string to_csv() const {
        std::string out = "experiment,method,params,K,strategy,metric,value,flag\n";
        for (const auto& r : rows) {
            out += detail::csv_field(r.experiment) + "," + detail::csv_field(r.method) + "," + detail::csv_field(r.params) +
                   "," + std::to_string(r.K) + "," + r.strategy + "," + r.metric + "," + format_value(r.value) + "," + r.flag +
                   "\n";
        }
        return out;
    }

    // experiment -> method -> list of measurements, first-appearance order.
    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["format"] = "momentkit-report";
        j["version"] = kReportVersion;
        auto& ex = j["experiments"] = nlohmann::ordered_json::object();
        for (const auto& r : rows) {
            nlohmann::ordered_json m;
            m["params"] = r.params;
            m["K"] = r.K;
            m["strategy"] = r.strategy;
            m["metric"] = r.metric;
            m["value"] = format_value(r.value);
            m["flag"] = r.flag;
            ex[r.experiment][r.method].push_back(std::move(m));
        }
        return j;
    }

    // Rows with the timing flag dropped (the reproducible part).
    Report without_timing() const {
        Report out;
        for (const auto& r : rows)
            if (r.flag != "timing") out.rows.push_back(r);
        return out;
    }

    void append(const Report& other) { rows.insert(rows.end(), other.rows.begin(), other.rows.end()); }
};

inline std::string scheme_params(const Scheme& s, int N) {
    return "mapping=" + mapping_name(s.mapping) + ";rule=" + s.rule.label() + ";strict=" + (s.strict ? "1" : "0") +
           ";alignment=" + alignment_name(s.alignment) + ";rings=" + std::to_string(s.rings) +
           ";fft_size=" + std::to_string(s.fft_size) + ";interp=" + interp_name(s.interp) + ";N=" + std::to_string(N);
}

namespace detail {

// Single-worker decomposition of one (method, K, scheme) cell.
inline MomentSet run_cell(const Image& image, const MethodSpec& method, int K, const Scheme& scheme) {
    return decompose(image, method, K, scheme, ExecOptions{1, nullptr});
}

inline bool scheme_ok(const MethodSpec& method, const Scheme& s) {
    try {
        validate_scheme(method, s);
        return true;
    } catch (const UnsupportedError&) {
        return false;
    }
}

inline std::string file_stem(const std::string& label) {
    std::string out;
    for (char c : label) out += std::isalnum(static_cast<unsigned char>(c)) || c == '.' ? c : '_';
    return out;
}

inline std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace detail

// Noise seed for test image (gallery g, rotation a, variance v).
inline std::uint64_t noise_seed(std::uint64_t seed, std::size_t v, std::size_t g, std::size_t a) {
    return detail::splitmix(detail::splitmix(detail::splitmix(seed ^ v) ^ g) ^ a);
}

// ACE on the unity image per (method, strategy, K), plus median DT over `repeats`.
inline Report run_accuracy(const ExperimentConfig& c) {
    validate_config(c);
    if (c.image != "unity") throw DataError("accuracy experiment needs the unity image source");
    const Image one = synthetic::unity(c.N);
    struct Cell {
        MethodSpec method;
        int K;
        Scheme scheme;
        bool ok;
        AceResult ace;
    };
    std::vector<Cell> cells;
    for (const auto& method : c.methods) {
        std::vector<Scheme> schemes;
        const Scheme base = scheme_for(method, c);
        if (c.strategies.empty()) schemes.push_back(base);
        for (Strategy st : c.strategies) {
            Scheme s = base;
            s.strategy = st;
            if (st == Strategy::fft) s.mapping = Mapping::polar;
            else if (s.mapping == Mapping::polar && st == Strategy::symmetric) s.mapping = Mapping::circumcircle;
            schemes.push_back(s);
        }
        for (const auto& s : schemes)
            for (int K : c.K_values) cells.push_back({method, K, s, detail::scheme_ok(method, s), {}});
    }
    parallel_for(cells.size(), c.threads, [&](std::size_t b, std::size_t e, int) {
        for (std::size_t i = b; i < e; ++i)
            if (cells[i].ok) cells[i].ace = ace_report(detail::run_cell(one, cells[i].method, cells[i].K, cells[i].scheme));
    });
    Report rep;
    for (const auto& cell : cells) {
        const std::string params = scheme_params(cell.scheme, c.N) + ";image=unity";
        ReportRow row{"accuracy", cell.method.label(), params, cell.K, strategy_name(cell.scheme.strategy), "ace", 0.0, ""};
        if (!cell.ok) {
            row.value = std::nan("");
            row.flag = "unsupported";
            rep.rows.push_back(row);
            continue;
        }
        row.value = cell.ace.value;
        row.flag = cell.ace.unstable ? "unstable" : "";
        rep.rows.push_back(row);
        if (c.timing) {
            row.metric = "dt_seconds";
            row.flag = "timing";
            row.value = decomposition_time([&] { detail::run_cell(one, cell.method, cell.K, cell.scheme); }, c.repeats);
            rep.rows.push_back(row);
        }
    }
    return rep;
}

// MSRE and SSIM of the reconstruction per (method, K).
inline Report run_reconstruction(const ExperimentConfig& c) {
    validate_config(c);
    if (!std::is_sorted(c.K_values.begin(), c.K_values.end())) throw DataError("reconstruction K values must be ascending");
    const Image image = load_source(c.image, c.N, c.seed);
    const int N = image.size();
    struct Cell {
        MethodSpec method;
        int K;
        Scheme scheme;
        bool ok;
        double msre = 0.0, ssim = 0.0;
    };
    std::vector<Cell> cells;
    for (const auto& method : c.methods) {
        const Scheme s = scheme_for(method, c);
        for (int K : c.K_values) cells.push_back({method, K, s, detail::scheme_ok(method, s)});
    }
    if (!c.dump_dir.empty()) std::filesystem::create_directories(c.dump_dir);
    parallel_for(cells.size(), c.threads, [&](std::size_t b, std::size_t e, int) {
        for (std::size_t i = b; i < e; ++i) {
            auto& cell = cells[i];
            if (!cell.ok) continue;
            const Image rec = reconstruct_image(detail::run_cell(image, cell.method, cell.K, cell.scheme), N);
            cell.msre = msre(image, rec);
            cell.ssim = ssim(image, rec);
            if (!c.dump_dir.empty())
                write_image(rec, (std::filesystem::path(c.dump_dir) /
                                  ("recon_" + detail::file_stem(cell.method.label()) + "_K" + std::to_string(cell.K) + ".pgm"))
                                     .string());
        }
    });
    Report rep;
    for (const auto& cell : cells) {
        const std::string params = scheme_params(cell.scheme, N) + ";image=" + c.image;
        ReportRow row{"reconstruction", cell.method.label(), params, cell.K, strategy_name(cell.scheme.strategy), "msre",
                      cell.ok ? cell.msre : std::nan(""), cell.ok ? "" : "unsupported"};
        rep.rows.push_back(row);
        row.metric = "ssim";
        row.value = cell.ok ? cell.ssim : std::nan("");
        rep.rows.push_back(row);
    }
    return rep;
}

inline std::vector<Image> load_gallery(const ExperimentConfig& c) {
    std::vector<Image> out;
    if (!c.gallery_dir.empty()) {
        std::vector<std::filesystem::path> files;
        for (const auto& e : std::filesystem::directory_iterator(c.gallery_dir)) {
            const auto ext = detail::lower(e.path().extension().string());
            if (e.is_regular_file() && (ext == ".pgm" || ext == ".png")) files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) out.push_back(read_image(f.string()));
    } else {
        for (int g = 1; g <= c.gallery_size; ++g) out.push_back(synthetic::photo(c.N, static_cast<std::uint64_t>(g)));
    }
    if (out.size() < 2) throw DataError("recognition needs at least 2 gallery images");
    for (const auto& img : out)
        if (img.size() != out.front().size()) throw DataError("gallery images differ in size");
    return out;
}

// Features of one image; Cartesian naive/recursive schemes reuse a plan.
class FeatureExtractor {
public:
    FeatureExtractor(const MethodSpec& method, int K, const Scheme& scheme, int N, int threads = 1)
        : method_(method), K_(K), scheme_(scheme) {
        if (scheme.mapping != Mapping::polar && (scheme.strategy == Strategy::naive || scheme.strategy == Strategy::recursive))
            plan_.emplace(method, K, scheme, N, threads);
    }
    FeatureVector operator()(const Image& image) const {
        return magnitude_features(plan_ ? plan_->apply(image) : detail::run_cell(image, method_, K_, scheme_));
    }

private:
    MethodSpec method_;
    int K_;
    Scheme scheme_;
    std::optional<DecompositionPlan> plan_;
};

// Gallery of clean images; test set = every rotation x variance of every gallery image.
inline Report run_recognition(const ExperimentConfig& c) {
    validate_config(c);
    const auto gallery = load_gallery(c);
    const int N = gallery.front().size();
    const std::vector<double> rotations = c.rotations.empty() ? std::vector<double>{0.0} : c.rotations;
    const std::vector<double> variances = c.noise_variances.empty() ? std::vector<double>{0.0} : c.noise_variances;
    const std::size_t G = gallery.size(), R = rotations.size(), V = variances.size();

    std::vector<Image> rotated(G * R);
    parallel_for(rotated.size(), c.threads, [&](std::size_t b, std::size_t e, int) {
        for (std::size_t i = b; i < e; ++i) rotated[i] = rotate_image(gallery[i / R], rotations[i % R], c.rotate_interp);
    });

    Report rep;
    for (const auto& method : c.methods) {
        const Scheme scheme = scheme_for(method, c);
        const bool ok = detail::scheme_ok(method, scheme);
        for (int K : c.K_values) {
            std::vector<double> score(V, std::nan(""));
            if (ok) {
                const FeatureExtractor extract(method, K, scheme, N, c.threads);
                std::vector<std::pair<std::size_t, FeatureVector>> train;
                for (std::size_t g = 0; g < G; ++g) train.emplace_back(g, extract(gallery[g]));
                std::vector<std::size_t> predicted(G * R * V), truth(G * R * V);
                parallel_for(predicted.size(), c.threads, [&](std::size_t b, std::size_t e, int) {
                    for (std::size_t i = b; i < e; ++i) {
                        const std::size_t v = i / (G * R), g = (i / R) % G, a = i % R;
                        const Image query = add_gaussian_noise(rotated[g * R + a], variances[v], noise_seed(c.seed, v, g, a));
                        predicted[i] = nn_classify(extract(query), train);
                        truth[i] = g;
                    }
                });
                for (std::size_t v = 0; v < V; ++v) {
                    const auto lo = static_cast<std::ptrdiff_t>(v * G * R), hi = static_cast<std::ptrdiff_t>((v + 1) * G * R);
                    score[v] = ccp(std::vector<std::size_t>(predicted.begin() + lo, predicted.begin() + hi),
                                   std::vector<std::size_t>(truth.begin() + lo, truth.begin() + hi));
                }
            }
            for (std::size_t v = 0; v < V; ++v) {
                char var[40];
                std::snprintf(var, sizeof var, "%.17g", variances[v]);
                const std::string params = scheme_params(scheme, N) + ";variance=" + var + ";gallery=" + std::to_string(G) +
                                           ";rotations=" + std::to_string(R) + ";seed=" + std::to_string(c.seed);
                rep.rows.push_back({"recognition", method.label(), params, K, strategy_name(scheme.strategy), "ccp", score[v],
                                    ok ? "" : "unsupported"});
            }
        }
    }
    return rep;
}

inline Report run_experiment(const std::string& name, const ExperimentConfig& c) {
    if (name == "accuracy") return run_accuracy(c);
    if (name == "reconstruction") return run_reconstruction(c);
    if (name == "recognition") return run_recognition(c);
    throw DomainError("unknown experiment '" + name + "' (expected accuracy, reconstruction, recognition)");
}

}  // namespace momentkit
