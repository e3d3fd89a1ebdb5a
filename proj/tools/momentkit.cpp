// momentkit command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical instability
// in strict mode (MOMENTKIT_STRICT=1 or --strict).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <momentkit/harness.hpp>
#include <momentkit/io.hpp>
#include <momentkit/moment_file.hpp>
#include <momentkit/momentkit.hpp>

namespace mk = momentkit;

namespace {

constexpr int kUsage = 1, kData = 2, kUnstable = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool env_strict() {
    const char* v = std::getenv("MOMENTKIT_STRICT");
    return v && std::string(v) == "1";
}

struct MethodOptions {
    std::string name;
    std::optional<double> p, q, alpha, bessel_v;
    int K = -1;

    void add(CLI::App* app) {
        app->add_option("--method", name, "moment family (zm, pzm, ofmm, chfm, pjfm, jfm, rhfm, efm, pcet, pct, pst, bfm, fjfm, grhfm, gpcet, gpct, gpst)")
            ->required();
        app->add_option("--p", p, "Jacobi parameter p");
        app->add_option("--q", q, "Jacobi parameter q");
        app->add_option("--alpha", alpha, "fractional parameter");
        app->add_option("--bessel-v", bessel_v, "Bessel order of BFM");
        app->add_option("--K", K, "order bound")->required()->check(CLI::NonNegativeNumber);
    }

    mk::MethodSpec method() const {
        mk::MethodSpec base;
        try {
            base = mk::parse_method(name);
        } catch (const mk::DomainError& e) {
            throw UsageError(e.what());
        }
        const mk::Family f = base.family();
        try {
            switch (f) {
                case mk::Family::JFM: return mk::MethodSpec::jfm(p.value_or(base.p()), q.value_or(base.q()));
                case mk::Family::FJFM:
                    return mk::MethodSpec::fjfm(p.value_or(base.p()), q.value_or(base.q()), alpha.value_or(base.alpha()));
                case mk::Family::BFM: return mk::MethodSpec::bfm(bessel_v.value_or(base.bessel_order()));
                default:
                    if (mk::is_fractional(f)) return mk::MethodSpec::fractional(f, alpha.value_or(base.alpha()));
                    if (p || q || alpha || bessel_v) throw UsageError(std::string(mk::family_name(f)) + " takes no parameters");
                    return base;
            }
        } catch (const mk::DomainError& e) {
            throw UsageError(e.what());
        }
    }
};

struct SchemeOptions {
    std::string mapping, rule, strategy, interp;
    int M = 0, rings = 0;
    bool strict = false;

    void add(CLI::App* app) {
        app->add_option("--mapping", mapping, "incircle | circumcircle | polar");
        app->add_option("--rule", rule, "zoa | up:<s> | gauss:<g>");
        app->add_option("--strategy", strategy, "naive | symmetric | recursive | fft");
        app->add_option("--M", M, "FFT sampling size")->check(CLI::NonNegativeNumber);
        app->add_option("--rings", rings, "polar ring count")->check(CLI::NonNegativeNumber);
        app->add_option("--interp", interp, "bilinear | bicubic (polar resampling)");
        app->add_flag("--strict", strict, "drop samples outside the unit disk");
    }

    mk::Scheme scheme(const mk::MethodSpec& method) const {
        try {
            mk::Scheme s = mk::default_scheme(method);
            if (!mapping.empty()) s.mapping = mk::parse_mapping(mapping);
            if (!rule.empty()) s.rule = mk::parse_rule(rule);
            if (!strategy.empty()) {
                s.strategy = mk::parse_strategy(strategy);
            } else if (s.strategy == mk::Strategy::fft && s.mapping != mk::Mapping::polar) {
                s.strategy = mk::Strategy::recursive;
            }
            if (!interp.empty()) s.interp = mk::parse_interp(interp);
            s.fft_size = M;
            s.rings = rings;
            s.strict = strict || env_strict();
            mk::validate_scheme(method, s);
            return s;
        } catch (const mk::Error& e) {
            throw UsageError(e.what());
        }
    }
};

bool all_finite(const mk::MomentSet& ms) {
    for (const auto& v : ms.values())
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

int finish_moments(const mk::MomentSet& ms) {
    if (all_finite(ms)) return 0;
    if (ms.scheme().strict) {
        std::cerr << "momentkit: numerical instability: non-finite coefficients for " << ms.method().label() << "\n";
        return kUnstable;
    }
    std::cerr << "momentkit: warning: non-finite coefficients for " << ms.method().label() << "\n";
    return 0;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw mk::DataError("cannot write '" + path + "'");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Orthogonal moments on the unit disk: decomposition, reconstruction, invariants, benchmarks"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand
    int threads = 1;
    app.add_option("--threads", threads, "worker threads (0 = all cores); results do not depend on it")
        ->check(CLI::NonNegativeNumber);

    MethodOptions dm;
    SchemeOptions ds;
    std::string d_in, d_out;
    auto* dec = app.add_subcommand("decompose", "compute the moment set of an image");
    dm.add(dec);
    ds.add(dec);
    dec->add_option("-i,--input", d_in, "input image (PGM P5 or PNG)")->required();
    dec->add_option("-o,--output", d_out, "output moment file (JSON)")->required();

    std::string r_in, r_out;
    int r_size = 0;
    auto* rec = app.add_subcommand("reconstruct", "synthesize an image from a moment file");
    rec->add_option("-i,--input", r_in, "moment file")->required();
    rec->add_option("--size", r_size, "output image side N")->required()->check(CLI::Range(2, 1 << 15));
    rec->add_option("-o,--output", r_out, "output image (PGM, or PNG by extension)")->required();

    std::string f_in, f_out;
    auto* feat = app.add_subcommand("features", "write the rotation-invariant moduli |M_nm| as CSV");
    feat->add_option("-i,--input", f_in, "moment file")->required();
    feat->add_option("-o,--output", f_out, "output CSV")->required();

    MethodOptions cm;
    SchemeOptions cs;
    std::string c_gallery, c_query;
    auto* cls = app.add_subcommand("classify", "nearest-neighbour label of a query image against a gallery directory");
    cm.add(cls);
    cs.add(cls);
    cls->add_option("--gallery", c_gallery, "directory of PGM/PNG gallery images")->required();
    cls->add_option("--query", c_query, "query image")->required();

    std::string b_exp, b_cfg, b_out, b_json;
    auto* bench = app.add_subcommand("bench", "run an experiment from a JSON config");
    bench->add_option("experiment", b_exp, "accuracy | reconstruction | recognition")
        ->required()
        ->check(CLI::IsMember({"accuracy", "reconstruction", "recognition"}));
    bench->add_option("--config", b_cfg, "experiment config (JSON)")->required();
    bench->add_option("-o,--output", b_out, "report CSV")->required();
    bench->add_option("--json", b_json, "also write the report as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*dec) {
            const auto method = dm.method();
            const auto scheme = ds.scheme(method);
            const mk::Image image = mk::read_image(d_in);
            const auto ms = mk::decompose(image, method, dm.K, scheme, {threads, nullptr});
            mk::write_moment_file(ms, d_out, mk::image_hash(image));
            return finish_moments(ms);
        }
        if (*rec) {
            const auto file = mk::read_moment_file(r_in);
            mk::write_image(mk::reconstruct_image(file.moments, r_size, threads), r_out);
            return 0;
        }
        if (*feat) {
            const auto file = mk::read_moment_file(f_in);
            auto out = open_out(f_out);
            out << "n,m,modulus\n";
            const auto fv = mk::magnitude_features(file.moments);
            for (std::size_t i = 0; i < fv.values.size(); ++i)
                out << file.moments.orders()[i].n << "," << file.moments.orders()[i].m << "," << mk::format_value(fv.values[i])
                    << "\n";
            if (!out) throw mk::DataError("cannot write '" + f_out + "'");
            return 0;
        }
        if (*cls) {
            const auto method = cm.method();
            const auto scheme = cs.scheme(method);
            std::vector<std::filesystem::path> files;
            if (!std::filesystem::is_directory(c_gallery)) throw mk::DataError("'" + c_gallery + "' is not a directory");
            for (const auto& e : std::filesystem::directory_iterator(c_gallery)) {
                const auto ext = mk::detail::lower(e.path().extension().string());
                if (e.is_regular_file() && (ext == ".pgm" || ext == ".png")) files.push_back(e.path());
            }
            std::sort(files.begin(), files.end());
            if (files.empty()) throw mk::DataError("gallery '" + c_gallery + "' holds no PGM/PNG images");
            std::vector<std::pair<std::string, mk::FeatureVector>> gallery;
            bool unstable = false;
            auto features = [&](const mk::Image& img) {
                const auto ms = mk::decompose(img, method, cm.K, scheme, {threads, nullptr});
                unstable = unstable || !all_finite(ms);
                return mk::magnitude_features(ms);
            };
            for (const auto& f : files) gallery.emplace_back(f.filename().string(), features(mk::read_image(f.string())));
            const auto q = features(mk::read_image(c_query));
            if (unstable && scheme.strict) {
                std::cerr << "momentkit: numerical instability: non-finite coefficients for " << method.label() << "\n";
                return kUnstable;
            }
            std::cout << mk::nn_classify(q, gallery) << "\n";
            return 0;
        }
        if (*bench) {
            auto cfg = mk::read_config(b_cfg);
            if (app.get_option("--threads")->count() > 0) cfg.threads = threads;
            if (env_strict() && !cfg.scheme.contains("strict")) cfg.scheme["strict"] = true;
            const auto report = mk::run_experiment(b_exp, cfg);
            open_out(b_out) << report.to_csv();
            if (!b_json.empty()) open_out(b_json) << report.to_json().dump(1) << "\n";
            const bool strict = cfg.scheme.value("strict", false);
            for (const auto& r : report.rows)
                if (r.flag == "unstable" && strict) {
                    std::cerr << "momentkit: numerical instability in " << r.method << " at K = " << r.K << "\n";
                    return kUnstable;
                }
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "momentkit: " << e.what() << "\n";
        return kUsage;
    } catch (const mk::DataError& e) {
        std::cerr << "momentkit: " << e.what() << "\n";
        return kData;
    } catch (const mk::Error& e) {
        std::cerr << "momentkit: " << e.what() << "\n";
        return kData;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "momentkit: " << e.what() << "\n";
        return kData;
    }
    return kUsage;
}
