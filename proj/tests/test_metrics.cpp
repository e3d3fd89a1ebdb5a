#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include <momentkit/decompose.hpp>
#include <momentkit/metrics.hpp>

using namespace momentkit;

namespace {

Image disk_filled(int N, double inside, double outside) {
    Field f(N);
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) f.at(r, c) = in_disk(r, c, N) ? inside : outside;
    return Image(std::move(f));
}

}  // namespace

TEST(Ace, ZeroWhenOnlyRotationlessTermsAreNonzero) {
    MomentSet ms(MethodSpec::of(Family::ZM), 4, Scheme{});
    for (std::size_t i = 0; i < ms.size(); ++i)
        if (ms.orders()[i].m == 0) ms[i] = 3.0;
    EXPECT_EQ(ace(ms), 0.0);
    EXPECT_FALSE(ace_report(ms).unstable);
}

TEST(Ace, DividesByFullSetSize) {
    // PZM K=1: (0,0), (1,-1), (1,0), (1,1).
    MomentSet ms(MethodSpec::of(Family::PZM), 1, Scheme{});
    ASSERT_EQ(ms.size(), 4u);
    ms.at(1, -1) = complex(0.12, 0.16);
    ms.at(1, 1) = complex(-0.2, 0.0);
    ms.at(1, 0) = 5.0;
    EXPECT_NEAR(ace(ms), 0.1, 1e-15);
}

TEST(Ace, NonFiniteIsFlagged) {
    MomentSet ms(MethodSpec::of(Family::ZM), 3, Scheme{});
    ms[1] = complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    const auto rep = ace_report(ms);
    EXPECT_TRUE(rep.unstable);
    EXPECT_TRUE(std::isinf(rep.value));
    ms[1] = complex(std::numeric_limits<double>::max(), std::numeric_limits<double>::max());
    EXPECT_TRUE(ace_report(ms).unstable);
}

TEST(Ace, NonNegativeOnRealData) {
    const auto ms = decompose(synthetic::photo(32, 1), MethodSpec::of(Family::PCET), 6);
    EXPECT_GT(ace(ms), 0.0);
}

TEST(Ace, DirectZernikeDegradesBeforeRecursive) {
    Scheme s;
    s.mapping = Mapping::circumcircle;
    s.strategy = Strategy::naive;
    const Image one = synthetic::unity(128);
    const double direct = ace(decompose(one, MethodSpec::of(Family::ZM), 40, s));
    s.strategy = Strategy::recursive;
    const double recursive = ace(decompose(one, MethodSpec::of(Family::ZM), 40, s));
    EXPECT_LT(recursive, direct);
}

TEST(Timing, MedianOfFive) {
    std::vector<int> delays_ms = {30, 1, 20, 5, 40};
    std::size_t call = 0;
    const double t = decomposition_time([&] { std::this_thread::sleep_for(std::chrono::milliseconds(delays_ms[call++])); }, 5);
    EXPECT_EQ(call, 5u);
    EXPECT_GE(t, 0.020);
    EXPECT_LT(t, 0.030);
    EXPECT_THROW(decomposition_time([] {}, 0), DomainError);
}

TEST(Timing, MoreOrdersTakeLonger) {
    const Image img = synthetic::photo(96, 2);
    Scheme s;
    s.strategy = Strategy::naive;
    const auto method = MethodSpec::jfm(3, 3);
    const double t10 = decomposition_time([&] { decompose(img, method, 10, s); }, 3);
    const double t20 = decomposition_time([&] { decompose(img, method, 20, s); }, 3);
    EXPECT_GT(t20, t10);
}

TEST(Msre, Examples) {
    const Image one = synthetic::unity(32);
    EXPECT_EQ(msre(one, one), 0.0);
    EXPECT_EQ(msre(one, Image(32, 0.0)), 1.0);
    EXPECT_NEAR(msre(one, Image(32, 0.9)), 0.01, 1e-14);
    EXPECT_THROW(msre(Image(32, 0.0), one), DomainError);
    EXPECT_THROW(msre(one, Image(16, 1.0)), DomainError);
}

TEST(Msre, IgnoresPixelsOutsideDisk) {
    EXPECT_EQ(msre(disk_filled(32, 0.5, 0.0), disk_filled(32, 0.5, 1.0)), 0.0);
}

TEST(Ssim, Examples) {
    const Image a = synthetic::photo(32, 3), b = synthetic::photo(32, 4);
    EXPECT_NEAR(ssim(a, a), 1.0, 1e-15);
    EXPECT_NEAR(ssim(Image(32, 0.3), Image(32, 0.3)), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(ssim(a, b), ssim(b, a));
    EXPECT_LT(ssim(a, b), 1.0);
    EXPECT_GT(ssim(a, b), -1.0);
}

TEST(Ssim, MatchesHandComputedStatistics) {
    // Statistics computed independently on a 4x4 raster.
    const int N = 4;
    Field fa(N, 0.0), fb(N, 0.0);
    std::vector<double> va, vb;
    double k = 0.0;
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) {
            k += 1.0;
            fa.at(r, c) = std::fmod(k * 0.37, 1.0);
            fb.at(r, c) = std::fmod(k * 0.53, 1.0);
            if (in_disk(r, c, N)) {
                va.push_back(255 * fa.at(r, c));
                vb.push_back(255 * fb.at(r, c));
            }
        }
    const double n = static_cast<double>(va.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < va.size(); ++i) ma += va[i] / n, mb += vb[i] / n;
    double sa = 0, sb = 0, sab = 0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        sa += (va[i] - ma) * (va[i] - ma) / (n - 1);
        sb += (vb[i] - mb) * (vb[i] - mb) / (n - 1);
        sab += (va[i] - ma) * (vb[i] - mb) / (n - 1);
    }
    const double c1 = 2.55 * 2.55, c2 = 7.65 * 7.65;
    const double expect = (2 * ma * mb + c1) * (2 * sab + c2) / ((ma * ma + mb * mb + c1) * (sa + sb + c2));
    EXPECT_NEAR(ssim(Image(fa), Image(fb)), expect, 1e-12);
}

TEST(Ccp, Examples) {
    EXPECT_EQ(ccp<int>({1, 2, 3}, {1, 2, 3}), 100.0);
    EXPECT_EQ(ccp<int>({1, 1, 1, 1, 1, 0, 0, 0, 0, 0}, {1, 1, 1, 1, 1, 1, 1, 1, 1, 1}), 50.0);
    EXPECT_THROW(ccp<int>({1}, {1, 2}), DomainError);
    EXPECT_THROW(ccp<int>({}, {}), DomainError);
    EXPECT_EQ(ccp<std::string>({"a"}, {"b"}), 0.0);
}
