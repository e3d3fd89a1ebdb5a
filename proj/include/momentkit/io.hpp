#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#ifdef MOMENTKIT_HAVE_PNG
#include <png.h>
#endif

#include "error.hpp"
#include "geometry.hpp"
#include "image.hpp"

namespace momentkit {

// 8-bit quantization used by every writer: round half up after scaling by 255.
inline std::uint8_t to_byte(double v) {
    return static_cast<std::uint8_t>(std::floor(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5));
}

namespace detail {

inline std::vector<std::uint8_t> read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Next whitespace-delimited header token, skipping '#' comments.
inline std::string pgm_token(const std::vector<std::uint8_t>& b, std::size_t& pos) {
    while (pos < b.size()) {
        if (b[pos] == '#') {
            while (pos < b.size() && b[pos] != '\n') ++pos;
        } else if (std::isspace(b[pos])) {
            ++pos;
        } else {
            break;
        }
    }
    std::string tok;
    while (pos < b.size() && !std::isspace(b[pos]) && b[pos] != '#') tok.push_back(static_cast<char>(b[pos++]));
    return tok;
}

inline int pgm_int(const std::vector<std::uint8_t>& b, std::size_t& pos, const char* what) {
    const std::string tok = pgm_token(b, pos);
    if (tok.empty() || tok.size() > 9 || tok.find_first_not_of("0123456789") != std::string::npos)
        throw DataError(std::string("malformed PGM header: bad ") + what);
    return std::stoi(tok);
}

}  // namespace detail

// Binary PGM (P5) with maxval 255.
inline Image decode_pgm(const std::vector<std::uint8_t>& bytes) {
    std::size_t pos = 0;
    if (detail::pgm_token(bytes, pos) != "P5") throw DataError("malformed PGM header: expected P5 magic");
    const int w = detail::pgm_int(bytes, pos, "width");
    const int h = detail::pgm_int(bytes, pos, "height");
    const int maxval = detail::pgm_int(bytes, pos, "maxval");
    if (maxval != 255) throw DataError("unsupported PGM depth: maxval " + std::to_string(maxval) + " (only 8-bit)");
    if (w != h) throw DataError("image must be square (got " + std::to_string(w) + "x" + std::to_string(h) + ")");
    if (w < 2) throw DataError("image size must be >= 2");
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw DataError("malformed PGM header");
    ++pos;  // single whitespace before the raster
    const auto count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (bytes.size() - pos < count) throw DataError("truncated PGM raster");
    std::vector<double> px(count);
    for (std::size_t i = 0; i < count; ++i) px[i] = bytes[pos + i] / 255.0;
    return Image(w, std::move(px));
}

inline std::vector<std::uint8_t> encode_pgm(const Image& image) {
    const std::string header = "P5\n" + std::to_string(image.size()) + " " + std::to_string(image.size()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + image.data().size());
    for (double v : image.data()) out.push_back(to_byte(v));
    return out;
}

inline bool png_supported() {
#ifdef MOMENTKIT_HAVE_PNG
    return true;
#else
    return false;
#endif
}

#ifdef MOMENTKIT_HAVE_PNG
inline Image decode_png(const std::vector<std::uint8_t>& bytes) {
    png_image img{};
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size()))
        throw DataError(std::string("malformed PNG: ") + img.message);
    const bool gray = !(img.format & PNG_FORMAT_FLAG_COLOR);
    const bool deep = (img.format & PNG_FORMAT_FLAG_LINEAR) != 0;
    if (!gray || deep) {
        png_image_free(&img);
        throw DataError(!gray ? "PNG must be grayscale" : "unsupported PNG depth (only 8-bit)");
    }
    if (img.width != img.height) {
        png_image_free(&img);
        throw DataError("image must be square (got " + std::to_string(img.width) + "x" + std::to_string(img.height) + ")");
    }
    img.format = PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> raster(PNG_IMAGE_SIZE(img));
    if (!png_image_finish_read(&img, nullptr, raster.data(), 0, nullptr))
        throw DataError(std::string("malformed PNG: ") + img.message);
    std::vector<double> px(raster.size());
    for (std::size_t i = 0; i < raster.size(); ++i) px[i] = raster[i] / 255.0;
    return Image(static_cast<int>(img.width), std::move(px));
}

inline void write_png(const Image& image, const std::string& path) {
    png_image img{};
    img.version = PNG_IMAGE_VERSION;
    img.width = static_cast<png_uint_32>(image.size());
    img.height = static_cast<png_uint_32>(image.size());
    img.format = PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> raster;
    raster.reserve(image.data().size());
    for (double v : image.data()) raster.push_back(to_byte(v));
    if (!png_image_write_to_file(&img, path.c_str(), 0, raster.data(), 0, nullptr))
        throw DataError("cannot write '" + path + "': " + img.message);
}
#endif

// Format chosen by content: P5 or (when built with libpng) PNG.
inline Image read_image(const std::string& path) {
    const auto bytes = detail::read_bytes(path);
    if (bytes.size() >= 8 && bytes[0] == 0x89 && bytes[1] == 'P' && bytes[2] == 'N' && bytes[3] == 'G') {
#ifdef MOMENTKIT_HAVE_PNG
        return decode_png(bytes);
#else
        throw UnsupportedError("'" + path + "' is a PNG; this build has no PNG support");
#endif
    }
    return decode_pgm(bytes);
}

// Format chosen by extension: ".png" writes PNG, anything else P5.
inline void write_image(const Image& image, const std::string& path) {
    const bool png = path.size() >= 4 && detail::lower(path.substr(path.size() - 4)) == ".png";
    if (png) {
#ifdef MOMENTKIT_HAVE_PNG
        write_png(image, path);
        return;
#else
        throw UnsupportedError("this build has no PNG support");
#endif
    }
    const auto bytes = encode_pgm(image);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("cannot write '" + path + "'");
}

}  // namespace momentkit
