// Decompose a synthetic image, reconstruct it, and compare rotation-invariant
// features of the image and a rotated copy.

#include <cstdio>

#include <momentkit/momentkit.hpp>

namespace mk = momentkit;

int main() {
    const mk::Image img = mk::synthetic::photo(128, 1);

    // Polar complex exponential moments up to K = 12, on the default scheme
    // for the family (polar sampling, FFT).
    const auto pcet = mk::MethodSpec::of(mk::Family::PCET);
    const auto ms = mk::decompose(img, pcet, 12);
    std::printf("%s: %zu moments, M(0,0) = %.6f\n", pcet.label().c_str(), ms.size(), ms.at(0, 0).real());

    const mk::Image rec = mk::reconstruct_image(ms, 128);
    std::printf("reconstruction: MSRE %.5f  SSIM %.4f\n", mk::msre(img, rec), mk::ssim(img, rec));

    // Zernike moments on an explicit Cartesian scheme.
    mk::Scheme s;
    s.mapping = mk::Mapping::incircle;
    s.rule = mk::Rule::upsample(3);
    s.strategy = mk::Strategy::recursive;
    s.strict = true;
    const auto zm = mk::MethodSpec::of(mk::Family::ZM);
    const auto a = mk::magnitude_features(mk::decompose(img, zm, 10, s));
    const auto b = mk::magnitude_features(mk::decompose(mk::rotate_image(img, 30.0), zm, 10, s));
    std::printf("ZM |M_nm| distance, image vs 30 deg rotation: %.5f\n", mk::euclidean_distance(a.values, b.values));

    mk::write_moment_file(ms, "quickstart_pcet.json", mk::image_hash(img));
    mk::write_image(rec, "quickstart_rec.pgm");
    std::printf("wrote quickstart_pcet.json, quickstart_rec.pgm\n");
    return 0;
}
