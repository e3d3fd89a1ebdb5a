#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <momentkit/harness.hpp>
#include <momentkit/io.hpp>
#include <momentkit/moment_file.hpp>

using namespace momentkit;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "momentkit_test_harness";
    fs::create_directories(dir);
    return dir / name;
}

std::vector<std::uint8_t> pgm_bytes(int w, int h, const std::vector<std::uint8_t>& payload, const std::string& maxval = "255") {
    const std::string head = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n" + maxval + "\n";
    std::vector<std::uint8_t> out(head.begin(), head.end());
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

ExperimentConfig config(std::vector<std::string> methods, std::vector<int> K) {
    ExperimentConfig c;
    for (const auto& m : methods) c.methods.push_back(parse_method(m));
    c.K_values = std::move(K);
    c.timing = false;
    return c;
}

std::vector<double> column(const Report& r, const std::string& metric, const std::string& method = {}) {
    std::vector<double> out;
    for (const auto& row : r.rows)
        if (row.metric == metric && (method.empty() || row.method == method)) out.push_back(row.value);
    return out;
}

}  // namespace

TEST(Pgm, DecodesTwoByTwoPayload) {
    const Image img = decode_pgm(pgm_bytes(2, 2, {0, 128, 255, 64}));
    EXPECT_EQ(img.at(0, 0), 0.0);
    EXPECT_EQ(img.at(0, 1), 128.0 / 255.0);
    EXPECT_EQ(img.at(1, 0), 1.0);
    EXPECT_EQ(img.at(1, 1), 64.0 / 255.0);
}

TEST(Pgm, WriteReadIsByteIdentical) {
    std::mt19937 rng(3);
    std::vector<std::uint8_t> payload(37 * 37);
    for (auto& b : payload) b = static_cast<std::uint8_t>(rng() & 0xff);
    const auto bytes = pgm_bytes(37, 37, payload);
    EXPECT_EQ(encode_pgm(decode_pgm(bytes)), bytes);
    const auto path = scratch("rt.pgm").string();
    write_image(decode_pgm(bytes), path);
    EXPECT_EQ(read_image(path), decode_pgm(bytes));
}

TEST(Pgm, HeaderCommentsAndWhitespace) {
    const std::string head = "P5 # magic\n# comment line\n2\t2\n255\n";
    std::vector<std::uint8_t> bytes(head.begin(), head.end());
    for (std::uint8_t b : {1, 2, 3, 4}) bytes.push_back(b);
    EXPECT_EQ(decode_pgm(bytes).at(1, 1), 4.0 / 255.0);
}

TEST(Pgm, Errors) {
    EXPECT_THROW(decode_pgm(pgm_bytes(3, 2, {0, 0, 0, 0, 0, 0})), DataError);
    EXPECT_THROW(decode_pgm(pgm_bytes(2, 2, {0, 0, 0, 0, 0, 0, 0, 0}, "65535")), DataError);
    EXPECT_THROW(decode_pgm(pgm_bytes(2, 2, {0, 0, 0})), DataError);
    const std::string p2 = "P2\n2 2\n255\n0 0 0 0\n";
    EXPECT_THROW(decode_pgm(std::vector<std::uint8_t>(p2.begin(), p2.end())), DataError);
    const std::string bad = "P5\n2 x\n255\n";
    EXPECT_THROW(decode_pgm(std::vector<std::uint8_t>(bad.begin(), bad.end())), DataError);
    EXPECT_THROW(read_image(scratch("does_not_exist.pgm").string()), DataError);
}

TEST(Pgm, QuantizationRoundsHalfUp) {
    EXPECT_EQ(to_byte(0.5 / 255.0), 1);
    EXPECT_EQ(to_byte(0.49 / 255.0), 0);
    EXPECT_EQ(to_byte(1.0), 255);
    EXPECT_EQ(to_byte(0.0), 0);
}

TEST(Png, RoundTripWhenAvailable) {
    if (!png_supported()) GTEST_SKIP() << "built without libpng";
    const auto path = scratch("rt.png").string();
    std::vector<std::uint8_t> payload(16 * 16);
    for (std::size_t i = 0; i < payload.size(); ++i) payload[i] = static_cast<std::uint8_t>(i);
    const Image img = decode_pgm(pgm_bytes(16, 16, payload));
    write_image(img, path);
    EXPECT_EQ(read_image(path), img);
}

TEST(MomentFile, ValuesRoundTripExactly) {
    MomentSet ms(MethodSpec::fjfm(2.5, 1.25, 0.3), 6, Scheme{});
    std::mt19937_64 rng(9);
    for (auto& v : ms.values()) v = {std::bit_cast<double>(rng() >> 2), std::ldexp(static_cast<double>(rng()), -90)};
    ms[0] = {-0.0, std::numeric_limits<double>::denorm_min()};
    ms[1] = {std::numeric_limits<double>::max(), -std::numeric_limits<double>::infinity()};
    ms[2] = {std::numeric_limits<double>::quiet_NaN(), 1.0 / 3.0};
    ms.set_image_size(77);
    const auto back = parse_moments(serialize_moments(ms, "fnv1a64:0123")).moments;
    ASSERT_EQ(back.size(), ms.size());
    for (std::size_t i = 0; i < ms.size(); ++i) {
        EXPECT_EQ(std::bit_cast<std::uint64_t>(back[i].real()), std::bit_cast<std::uint64_t>(ms[i].real()));
        EXPECT_EQ(std::bit_cast<std::uint64_t>(back[i].imag()), std::bit_cast<std::uint64_t>(ms[i].imag()));
    }
    EXPECT_EQ(back.method(), ms.method());
    EXPECT_EQ(back.scheme(), ms.scheme());
    EXPECT_EQ(back.image_size(), 77);
}

TEST(MomentFile, HeaderRoundTrip) {
    Scheme s;
    s.mapping = Mapping::polar;
    s.rule = Rule::gauss(4);
    s.strategy = Strategy::fft;
    s.strict = true;
    s.alignment = Alignment::literal;
    s.rings = 33;
    s.fft_size = 70;
    s.interp = Interp::bicubic;
    for (const auto& m : {MethodSpec::jfm(4, 2), MethodSpec::bfm(2.5), MethodSpec::fractional(Family::GPCT, 0.7),
                          MethodSpec::of(Family::OFMM)}) {
        const MomentSet ms(m, 3, s);
        const auto f = parse_moments(serialize_moments(ms, "h"));
        EXPECT_EQ(f.moments.method(), m);
        EXPECT_EQ(f.moments.scheme(), s);
        EXPECT_EQ(f.image_hash, "h");
    }
}

TEST(MomentFile, RecordSetMustEqualOrderSet) {
    const MomentSet ms(MethodSpec::of(Family::ZM), 2, Scheme{});
    auto j = nlohmann::json::parse(serialize_moments(ms));
    auto missing = j;
    missing["records"].erase(missing["records"].begin());
    EXPECT_THROW(parse_moments(missing.dump()), DataError);
    auto dup = j;
    dup["records"][1] = dup["records"][0];
    EXPECT_THROW(parse_moments(dup.dump()), DataError);
    auto outside = j;
    outside["records"][0]["m"] = 1;  // (0, 1) is not a Zernike index
    EXPECT_THROW(parse_moments(outside.dump()), DataError);
    auto garbled = j;
    garbled["records"][0]["re"] = "0x1.zz";
    EXPECT_THROW(parse_moments(garbled.dump()), DataError);
    EXPECT_THROW(parse_moments("{"), DataError);
    EXPECT_THROW(parse_moments("{\"format\":\"other\"}"), DataError);
}

TEST(MomentFile, ImageHash) {
    EXPECT_EQ(image_hash(synthetic::photo(16, 1)), image_hash(synthetic::photo(16, 1)));
    EXPECT_NE(image_hash(synthetic::photo(16, 1)), image_hash(synthetic::photo(16, 2)));
    EXPECT_NE(image_hash(Image(16, 0.0)), image_hash(Image(17, 0.0)));
}

TEST(Config, Validation) {
    EXPECT_THROW(parse_config(nlohmann::json::parse(R"({"methods":["zm"],"K":[]})")), DataError);
    EXPECT_THROW(parse_config(nlohmann::json::parse(R"({"methods":[],"K":[3]})")), DataError);
    EXPECT_THROW(parse_config(nlohmann::json::parse(R"({"methods":["zz"],"K":[3]})")), DataError);
    EXPECT_THROW(parse_config(nlohmann::json::parse(R"({"methods":["zm"],"K":[3],"colour":1})")), DataError);
    EXPECT_THROW(parse_config(nlohmann::json::parse(R"({"methods":["zm"],"K":[3],"scheme":{"mapping":"oval"}})")), DataError);
    const auto c = parse_config(nlohmann::json::parse(
        R"({"methods":["zm","jfm:3,3"],"K":[5,10],"N":64,"scheme":{"mapping":"incircle","strict":true},"seed":7})"));
    EXPECT_EQ(c.methods.size(), 2u);
    EXPECT_EQ(c.seed, 7u);
    EXPECT_EQ(scheme_for(c.methods[0], c).mapping, Mapping::incircle);
    EXPECT_TRUE(scheme_for(c.methods[0], c).strict);
    EXPECT_THROW(run_accuracy(config({"zm"}, {})), DataError);
}

TEST(Config, MappingOverrideMovesFftMethodsOffFft) {
    ExperimentConfig c = config({"pcet"}, {4});
    c.scheme = {{"mapping", "incircle"}};
    EXPECT_EQ(scheme_for(c.methods[0], c).strategy, Strategy::recursive);
    c.scheme = nlohmann::json::object();
    EXPECT_EQ(scheme_for(c.methods[0], c).strategy, Strategy::fft);
}

TEST(Accuracy, ZernikeRecursiveIncircle) {
    ExperimentConfig c = config({"zm"}, {5, 10, 20});
    c.scheme = {{"mapping", "incircle"}, {"strict", true}, {"strategy", "recursive"}};
    const auto ace = column(run_accuracy(c), "ace");
    ASSERT_EQ(ace.size(), 3u);
    for (std::size_t i = 0; i < ace.size(); ++i) {
        EXPECT_LT(ace[i], 1e-2);
        if (i > 0) {
            EXPECT_GE(ace[i], ace[i - 1]);
        }
    }
}

TEST(Accuracy, FftErrorIsFlatInK) {
    ExperimentConfig c = config({"gpcet:2"}, {5, 25});
    c.scheme = {{"fft_size", 128}};
    const auto ace = column(run_accuracy(c), "ace");
    ASSERT_EQ(ace.size(), 2u);
    // Every (s, theta) sample of the unity image is exactly 1, so the angular
    // transform leaves no m != 0 energy at any K.
    EXPECT_LT(ace[1], 1e-12);
    if (ace[0] > 0.0) {
        EXPECT_LT(ace[1] / ace[0], 10.0);
    }
}

TEST(Accuracy, TimingRowsAndUnsupportedCells) {
    ExperimentConfig c = config({"zm", "pcet"}, {4});
    c.strategies = {Strategy::recursive, Strategy::fft};
    c.timing = true;
    c.repeats = 1;
    c.N = 32;
    const auto rep = run_accuracy(c);
    // zm: recursive ace+dt, fft unsupported; pcet: recursive ace+dt, fft ace+dt
    ASSERT_EQ(rep.rows.size(), 7u);
    EXPECT_EQ(rep.rows[2].flag, "unsupported");
    EXPECT_TRUE(std::isnan(rep.rows[2].value));
    EXPECT_EQ(rep.rows[1].flag, "timing");
    EXPECT_EQ(rep.without_timing().rows.size(), 4u);
    c.image = "checker";
    EXPECT_THROW(run_accuracy(c), DataError);
}

TEST(Reconstruction, UnityZernikeK2) {
    ExperimentConfig c = config({"zm"}, {2});
    c.scheme = {{"mapping", "incircle"}, {"strict", true}};
    const auto m = column(run_reconstruction(c), "msre");
    ASSERT_EQ(m.size(), 1u);
    EXPECT_LT(m[0], 1e-4);
}

TEST(Reconstruction, PhotoTrend) {
    ExperimentConfig c = config({"pcet"}, {5, 10, 20});
    c.image = "photo";
    c.N = 256;
    const auto rep = run_reconstruction(c);
    const auto m = column(rep, "msre"), s = column(rep, "ssim");
    ASSERT_EQ(m.size(), 3u);
    EXPECT_GT(m[0], m[1]);
    EXPECT_GT(m[1], m[2]);
    EXPECT_GE(s[2], s[0] - 0.01);
}

TEST(Reconstruction, KMustBeAscendingAndDumpsRasters) {
    ExperimentConfig c = config({"zm"}, {4, 2});
    EXPECT_THROW(run_reconstruction(c), DataError);
    c.K_values = {2};
    c.N = 32;
    c.dump_dir = scratch("dump").string();
    run_reconstruction(c);
    EXPECT_TRUE(fs::exists(fs::path(c.dump_dir) / "recon_ZM_K2.pgm"));
    c.image = scratch("absent.pgm").string();
    EXPECT_THROW(run_reconstruction(c), DataError);
}

TEST(Recognition, SmallGallery) {
    ExperimentConfig c = config({"zm", "chfm"}, {6});
    c.N = 48;
    c.gallery_size = 4;
    for (int a = 0; a < 360; a += 30) c.rotations.push_back(a);
    c.noise_variances = {0.0, 0.1, 0.3};
    c.scheme = {{"mapping", "incircle"}, {"strict", true}};
    const auto rep = run_recognition(c);
    for (const char* m : {"ZM", "CHFM"}) {
        const auto ccp = column(rep, "ccp", m);
        ASSERT_EQ(ccp.size(), 3u);
        EXPECT_EQ(ccp[0], 100.0) << m;
        EXPECT_GE(ccp[0], ccp[1]) << m;
        EXPECT_GE(ccp[1], ccp[2]) << m;
    }
    c.gallery_size = 1;
    EXPECT_THROW(run_recognition(c), DataError);
}

TEST(Report, DeterministicAcrossThreadCounts) {
    ExperimentConfig c = config({"zm", "pcet", "ofmm"}, {4, 8});
    c.N = 40;
    c.image = "photo";
    const auto a = run_reconstruction(c).to_csv();
    c.threads = 3;
    EXPECT_EQ(run_reconstruction(c).to_csv(), a);
    c.gallery_size = 3;
    c.rotations = {0, 45, 90};
    c.noise_variances = {0.0, 0.2};
    c.threads = 1;
    const auto r1 = run_recognition(c).to_csv();
    c.threads = 4;
    EXPECT_EQ(run_recognition(c).to_csv(), r1);
}

TEST(Report, CsvAndJsonLayout) {
    Report r;
    r.rows.push_back({"accuracy", "JFM(3,3)", "mapping=incircle;N=8", 5, "recursive", "ace", 0.1, ""});
    r.rows.push_back({"accuracy", "JFM(3,3)", "p", 5, "recursive", "dt_seconds", std::numeric_limits<double>::infinity(), "timing"});
    const std::string csv = r.to_csv();
    EXPECT_EQ(csv,
              "experiment,method,params,K,strategy,metric,value,flag\n"
              "accuracy,\"JFM(3,3)\",mapping=incircle;N=8,5,recursive,ace,0.10000000000000001,\n"
              "accuracy,\"JFM(3,3)\",p,5,recursive,dt_seconds,inf,timing\n");
    const auto j = r.to_json();
    EXPECT_EQ(j["experiments"]["accuracy"]["JFM(3,3)"].size(), 2u);
    EXPECT_EQ(j["experiments"]["accuracy"]["JFM(3,3)"][0]["value"], "0.10000000000000001");
}

TEST(Report, RowsCarrySchemeProvenance) {
    ExperimentConfig c = config({"zm"}, {2});
    c.N = 16;
    c.scheme = {{"mapping", "incircle"}, {"rule", "gauss:3"}};
    const auto rep = run_accuracy(c);
    EXPECT_EQ(rep.rows[0].params,
              "mapping=incircle;rule=gauss:3;strict=0;alignment=centered;rings=0;fft_size=0;interp=bilinear;N=16;image=unity");
}
