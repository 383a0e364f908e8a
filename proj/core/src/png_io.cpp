#include "lfdepth/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <vector>

#include "lfdepth/errors.hpp"

namespace lfdepth {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) {
            std::fclose(f);
        }
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

Image read_png(const std::filesystem::path& path) {
    FilePtr f(std::fopen(path.string().c_str(), "rb"));
    if (!f) {
        throw io_error("png: cannot open " + path.string());
    }
    png_byte header[8];
    if (std::fread(header, 1, 8, f.get()) != 8 || png_sig_cmp(header, 0, 8) != 0) {
        throw io_error("png: not a PNG file: " + path.string());
    }

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw io_error("png: out of memory reading " + path.string());
    }
    std::vector<png_byte> raw;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw io_error("png: decode failed for " + path.string());
    }
    png_init_io(png, f.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);

    if (depth == 16) {
        png_set_strip_16(png);
    }
    if (color == PNG_COLOR_TYPE_PALETTE) {
        png_set_palette_to_rgb(png);
    }
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
    }
    if (png_get_valid(png, info, PNG_INFO_tRNS)) {
        png_set_tRNS_to_alpha(png);
    }
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const int out_channels = static_cast<int>(png_get_channels(png, info));
    if (out_channels != 1 && out_channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw io_error("png: unsupported channel layout in " + path.string());
    }
    const std::size_t stride = png_get_rowbytes(png, info);
    raw.resize(stride * h);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) {
        rows[y] = raw.data() + y * stride;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    Image out(static_cast<int>(w), static_cast<int>(h), out_channels);
    for (png_uint_32 y = 0; y < h; ++y) {
        const png_byte* row = raw.data() + y * stride;
        for (png_uint_32 x = 0; x < w; ++x) {
            for (int c = 0; c < out_channels; ++c) {
                out.at(static_cast<int>(y), static_cast<int>(x), c) =
                    static_cast<float>(row[x * out_channels + c]) / 255.0f;
            }
        }
    }
    return out;
}

void write_png(const Image& img, const std::filesystem::path& path) {
    if (img.empty()) {
        throw io_error("png: refusing to write an empty image");
    }
    FilePtr f(std::fopen(path.string().c_str(), "wb"));
    if (!f) {
        throw io_error("png: cannot open " + path.string() + " for writing");
    }
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw io_error("png: out of memory writing " + path.string());
    }
    const int w = img.width();
    const int h = img.height();
    const int ch = img.channels();
    std::vector<png_byte> raw(static_cast<std::size_t>(w) * h * ch);
    std::vector<png_bytep> rows(static_cast<std::size_t>(h));
    for (int y = 0; y < h; ++y) {
        rows[static_cast<std::size_t>(y)] = raw.data() + static_cast<std::size_t>(y) * w * ch;
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < ch; ++c) {
                const float v = std::clamp(img.at(y, x, c), 0.0f, 1.0f);
                raw[(static_cast<std::size_t>(y) * w + x) * ch + c] =
                    static_cast<png_byte>(std::lround(v * 255.0f));
            }
        }
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw io_error("png: encode failed for " + path.string());
    }
    png_init_io(png, f.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8,
                 ch == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void write_gray_png(const Map2D& map, const std::filesystem::path& path, double lo, double hi) {
    if (map.empty()) {
        throw io_error("png: refusing to write an empty map");
    }
    if (!(lo < hi)) {
        throw std::invalid_argument("write_gray_png: need lo < hi");
    }
    Image img(map.width(), map.height(), 1);
    const double inv = 1.0 / (hi - lo);
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            const double v = map.at(y, x);
            img.at(y, x) = std::isfinite(v)
                               ? static_cast<float>(std::clamp((v - lo) * inv, 0.0, 1.0))
                               : 0.0f;
        }
    }
    write_png(img, path);
}

}  // namespace lfdepth
