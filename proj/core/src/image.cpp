#include "lfdepth/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lfdepth {

Image::Image(int width, int height, int channels, float fill)
    : width_(width), height_(height), channels_(channels) {
    if (width <= 0 || height <= 0 || (channels != 1 && channels != 3)) {
        throw std::invalid_argument("Image: bad dimensions or channel count");
    }
    data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

Map2D::Map2D(int width, int height, double fill) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("Map2D: bad dimensions");
    }
    data_.assign(static_cast<std::size_t>(width) * height, fill);
}

Image luma(const Image& img) {
    if (img.channels() == 1) {
        return img;
    }
    Image out(img.width(), img.height(), 1);
    const std::size_t n = static_cast<std::size_t>(img.width()) * img.height();
    const float* src = img.data().data();
    float* dst = out.data().data();
    for (std::size_t i = 0; i < n; ++i) {
        dst[i] = 0.2126f * src[3 * i] + 0.7152f * src[3 * i + 1] + 0.0722f * src[3 * i + 2];
    }
    return out;
}

double bilinear_sample(const Image& img, double x, double y, int c) {
    const int w = img.width();
    const int h = img.height();
    const double xc = std::clamp(x, 0.0, static_cast<double>(w - 1));
    const double yc = std::clamp(y, 0.0, static_cast<double>(h - 1));
    const int x0 = static_cast<int>(std::floor(xc));
    const int y0 = static_cast<int>(std::floor(yc));
    const double fx = xc - x0;
    const double fy = yc - y0;
    const int x1 = std::min(x0 + 1, w - 1);
    const int y1 = std::min(y0 + 1, h - 1);
    const double p00 = img.at(y0, x0, c);
    const double p10 = img.at(y0, x1, c);
    const double p01 = img.at(y1, x0, c);
    const double p11 = img.at(y1, x1, c);
    return (1.0 - fy) * ((1.0 - fx) * p00 + fx * p10) + fy * ((1.0 - fx) * p01 + fx * p11);
}

}  // namespace lfdepth
