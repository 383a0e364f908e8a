#pragma once

#include <cstddef>
#include <vector>

namespace lfdepth {

// 2D raster, float storage, row-major, interleaved channels (1 or 3).
class Image {
public:
    Image() = default;
    Image(int width, int height, int channels, float fill = 0.0f);

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }
    bool empty() const { return data_.empty(); }

    float& at(int y, int x, int c = 0) { return data_[index(y, x, c)]; }
    float at(int y, int x, int c = 0) const { return data_[index(y, x, c)]; }

    const std::vector<float>& data() const { return data_; }
    std::vector<float>& data() { return data_; }

    std::size_t index(int y, int x, int c) const {
        return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
    }

private:
    int width_ = 0;
    int height_ = 0;
    int channels_ = 0;
    std::vector<float> data_;
};

// 2D double-precision grid used for confidence maps, error maps and other
// scalar fields derived from images.
class Map2D {
public:
    Map2D() = default;
    Map2D(int width, int height, double fill = 0.0);

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return data_.empty(); }

    double& at(int y, int x) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    double at(int y, int x) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

using ConfidenceMap = Map2D;

// Rec.709 weights; a 1-channel input is returned unchanged.
Image luma(const Image& img);

// Samples channel c at continuous pixel coordinates (x, y) with clamp-to-edge
// borders. The exact evaluation is part of the contract relied on by every
// shear-based consumer:
//   xc = clamp(x, 0, w-1), x0 = floor(xc), fx = xc - x0, x1 = min(x0+1, w-1)
//   (same for y), then in double precision
//   v = (1-fy)*((1-fx)*p00 + fx*p10) + fy*((1-fx)*p01 + fx*p11)
double bilinear_sample(const Image& img, double x, double y, int c = 0);

}  // namespace lfdepth
