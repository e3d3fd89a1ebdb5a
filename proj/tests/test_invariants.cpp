#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <momentkit/decompose.hpp>
#include <momentkit/invariants.hpp>

using namespace momentkit;

namespace {

MomentSet synthetic_moments(const MethodSpec& method, int K, unsigned seed) {
    MomentSet ms(method, K, default_scheme(method));
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    for (auto& v : ms.values()) v = {g(rng), g(rng)};
    return ms;
}

// M_nm -> exp(j m phi) M_nm
MomentSet rotate_phases(const MomentSet& ms, double phi) {
    MomentSet out = ms;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= std::polar(1.0, ms.orders()[i].m * phi);
    return out;
}

Scheme strict_incircle() {
    Scheme s;
    s.mapping = Mapping::incircle;
    s.strict = true;
    return s;
}

}  // namespace

TEST(Features, ZeroMomentsGiveZeroVector) {
    const MomentSet ms(MethodSpec::of(Family::ZM), 6, Scheme{});
    const auto v = magnitude_features(ms);
    ASSERT_EQ(v.values.size(), order_set_size(Family::ZM, 6));
    for (double x : v.values) EXPECT_EQ(x, 0.0);
}

TEST(Features, PhaseOnlyChangeKeepsModuli) {
    const auto ms = synthetic_moments(MethodSpec::of(Family::PCET), 5, 1);
    const auto a = magnitude_features(ms), b = magnitude_features(rotate_phases(ms, 1.234));
    for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-14);
}

TEST(Features, QuarterTurnIsLossless) {
    const Image img = synthetic::photo(64, 3);
    const Image rot = rotate_image(img, 90.0);
    for (auto method : {MethodSpec::of(Family::ZM), MethodSpec::of(Family::PCET), MethodSpec::of(Family::CHFM)}) {
        const auto a = magnitude_features(decompose(img, method, 8, strict_incircle()));
        const auto b = magnitude_features(decompose(rot, method, 8, strict_incircle()));
        for (std::size_t i = 0; i < a.values.size(); ++i)
            EXPECT_NEAR(a.values[i], b.values[i], 1e-6 * std::max(1.0, a.values[i])) << method.label();
    }
}

TEST(Features, QuarterTurnMultipliesPhase) {
    // A counter-clockwise turn by phi maps M_nm to exp(-j m phi) M_nm.
    const Image img = synthetic::photo(32, 8);
    const auto a = decompose(img, MethodSpec::of(Family::ZM), 6, strict_incircle());
    const auto b = decompose(rotate_image(img, 90.0), MethodSpec::of(Family::ZM), 6, strict_incircle());
    for (std::size_t i = 0; i < a.size(); ++i)
        EXPECT_LT(std::abs(b[i] - a[i] * std::polar(1.0, -a.orders()[i].m * std::numbers::pi / 2)), 1e-12);
}

TEST(Features, ArbitraryAngleFeatureDistanceSmall) {
    const int N = 128;
    const Image img = synthetic::photo(N, 2);
    for (int K : {10, 20}) {
        const auto method = MethodSpec::of(Family::ZM);
        const DecompositionPlan plan(method, K, strict_incircle(), N);
        const auto base = magnitude_features(plan.apply(img));
        double norm = 0.0;
        for (double v : base.values) norm += v * v;
        for (double angle : {10.0, 35.0, 200.0}) {
            const auto rot = magnitude_features(plan.apply(rotate_image(img, angle)));
            EXPECT_LT(euclidean_distance(base.values, rot.values) / std::sqrt(norm), 0.05) << "K=" << K << " angle=" << angle;
        }
    }
}

TEST(Flusser, SingleRealTerm) {
    const auto ms = synthetic_moments(MethodSpec::of(Family::ZM), 6, 2);
    EXPECT_EQ(flusser_invariant(ms, {{{4, 0, 1}}}), ms.at(4, 0));
}

TEST(Flusser, ConjugatePairIsSquaredModulus) {
    const Image img = synthetic::photo(32, 4);
    const auto ms = decompose(img, MethodSpec::of(Family::ZM), 4, strict_incircle());
    const complex v = flusser_invariant(ms, {{{3, 1, 1}, {3, -1, 1}}});
    EXPECT_NEAR(v.real(), std::norm(ms.at(3, 1)), 1e-14);
    EXPECT_NEAR(v.imag(), 0.0, 1e-14);
    EXPECT_GE(v.real(), 0.0);
}

TEST(Flusser, ExactUnderSyntheticRotation) {
    const auto ms = synthetic_moments(MethodSpec::of(Family::PCET), 4, 3);
    const FlusserRecipe recipes[] = {
        {{{2, 2, 1}, {1, -1, 2}}}, {{{3, 3, 1}, {0, -1, 3}}}, {{{1, 2, -1}, {2, 1, 2}}}, {{{0, 0, 2}}}};
    for (const auto& r : recipes) {
        const complex a = flusser_invariant(ms, r), b = flusser_invariant(rotate_phases(ms, 0.7), r);
        EXPECT_LT(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(a)));
    }
}

TEST(Flusser, InvalidRecipes) {
    const auto ms = synthetic_moments(MethodSpec::of(Family::PCET), 4, 4);
    EXPECT_THROW(flusser_invariant(ms, {{{2, 1, 1}}}), DomainError);
    EXPECT_THROW(flusser_invariant(ms, {}), DomainError);
    EXPECT_THROW(flusser_invariant(ms, {{{9, 0, 1}}}), DomainError);
    MomentSet zero(MethodSpec::of(Family::PCET), 2, Scheme{});
    EXPECT_THROW(flusser_invariant(zero, {{{1, 0, -1}}}), DomainError);
}

TEST(Rotate, IdentityAndPermutations) {
    const Image img = synthetic::photo(20, 5);
    EXPECT_EQ(rotate_image(img, 0.0), img);
    EXPECT_EQ(rotate_image(img, 360.0), img);
    EXPECT_EQ(rotate_image(img, -360.0, RotateInterp::nearest), img);
    EXPECT_EQ(rotate_image(rotate_image(img, 90.0), 90.0), rotate_image(img, 180.0));
    EXPECT_EQ(rotate_image(img, 270.0), rotate_image(img, -90.0));
    EXPECT_EQ(rotate_image(rotate_image(img, 90.0), 270.0), img);
}

TEST(Rotate, QuarterTurnMatchesGenericFormula) {
    // Away from rounding the interpolating path reproduces the exact permutation.
    const Image img = synthetic::photo(16, 6);
    const Image exact = rotate_image(img, 90.0);
    const Image near = rotate_image(img, 90.0 + 1e-9, RotateInterp::nearest);
    EXPECT_EQ(exact, near);
}

TEST(Rotate, FillsOutsideWithZero) {
    const Image one = synthetic::unity(32);
    const Image rot = rotate_image(one, 45.0);
    EXPECT_EQ(rot.at(0, 0), 0.0);
    EXPECT_EQ(rot.at(16, 16), 1.0);
}

TEST(Noise, ZeroVarianceIsIdentity) {
    const Image img = synthetic::photo(16, 1);
    EXPECT_EQ(add_gaussian_noise(img, 0.0, 5), img);
    EXPECT_THROW(add_gaussian_noise(img, -0.1, 5), DomainError);
}

TEST(Noise, SampleVarianceAndSeed) {
    const Image gray(128, 0.5);
    const Image a = add_gaussian_noise(gray, 0.05, 42), b = add_gaussian_noise(gray, 0.05, 42);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, add_gaussian_noise(gray, 0.05, 43));
    double mean = 0.0, var = 0.0;
    for (double v : a.data()) mean += v - 0.5;
    mean /= static_cast<double>(a.data().size());
    for (double v : a.data()) var += (v - 0.5 - mean) * (v - 0.5 - mean);
    var /= static_cast<double>(a.data().size() - 1);
    // Clipping at |z| > 0.5 (2.2 sigma) trims the variance by a few percent.
    EXPECT_NEAR(var, 0.05, 0.05 * 0.05 + 0.003);
}

TEST(Classifier, Examples) {
    const MethodSpec m = MethodSpec::of(Family::ZM);
    std::vector<std::pair<std::string, FeatureVector>> gallery = {{"A", {m, 1, {0.0, 0.0}}}, {"B", {m, 1, {1.0, 1.0}}}};
    EXPECT_EQ(nn_classify(FeatureVector{m, 1, {0.1, 0.1}}, gallery), "A");
    EXPECT_EQ(nn_classify(FeatureVector{m, 1, {1.0, 1.0}}, gallery), "B");
    EXPECT_EQ(nn_classify(FeatureVector{m, 1, {0.5, 0.5}}, gallery), "A");
    EXPECT_THROW(nn_classify(FeatureVector{m, 1, {0.5}}, gallery), DomainError);
    gallery.clear();
    EXPECT_THROW(nn_classify(FeatureVector{m, 1, {0.5, 0.5}}, gallery), DomainError);
}

TEST(Classifier, QuarterTurnsAlwaysRecognized) {
    const int N = 48;
    const auto method = MethodSpec::of(Family::PZM);
    const DecompositionPlan plan(method, 6, strict_incircle(), N);
    std::vector<std::pair<int, FeatureVector>> gallery;
    std::vector<Image> images;
    for (int s = 1; s <= 6; ++s) {
        images.push_back(synthetic::photo(N, static_cast<std::uint64_t>(s)));
        gallery.emplace_back(s, magnitude_features(plan.apply(images.back())));
    }
    for (int s = 1; s <= 6; ++s)
        for (double a : {90.0, 180.0, 270.0})
            EXPECT_EQ(nn_classify(magnitude_features(plan.apply(rotate_image(images[static_cast<std::size_t>(s - 1)], a))), gallery), s);
}
