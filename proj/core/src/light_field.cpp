#include "lfdepth/light_field.hpp"

#include <stdexcept>

namespace lfdepth {

void SceneMeta::validate() const {
    if (!(focal_length_px > 0.0)) {
        throw std::invalid_argument("SceneMeta: focal length must be positive");
    }
    if (!(baseline > 0.0)) {
        throw std::invalid_argument("SceneMeta: baseline must be positive");
    }
    if (!(disparity_min < disparity_max)) {
        throw std::invalid_argument("SceneMeta: empty disparity range");
    }
}

LightField::LightField(int width, int height, int n_u, int n_v, int channels, float fill)
    : width_(width), height_(height), n_u_(n_u), n_v_(n_v), channels_(channels) {
    if (width <= 0 || height <= 0 || (channels != 1 && channels != 3)) {
        throw std::invalid_argument("LightField: bad dimensions or channel count");
    }
    if (n_u <= 0 || n_v <= 0) {
        throw std::invalid_argument("LightField: angular extents must be positive");
    }
    data_.assign(static_cast<std::size_t>(width) * height * n_u * n_v * channels, fill);
}

Image LightField::view(int v, int u) const {
    Image out(width_, height_, channels_);
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            for (int c = 0; c < channels_; ++c) {
                out.at(y, x, c) = at(y, x, v, u, c);
            }
        }
    }
    return out;
}

LightField LightField::to_luma() const {
    if (channels_ == 1) {
        return *this;
    }
    LightField out(width_, height_, n_u_, n_v_, 1);
    const std::size_t n = data_.size() / 3;
    const float* src = data_.data();
    float* dst = out.data_.data();
    for (std::size_t i = 0; i < n; ++i) {
        dst[i] = 0.2126f * src[3 * i] + 0.7152f * src[3 * i + 1] + 0.0722f * src[3 * i + 2];
    }
    return out;
}

Image center_view(const LightField& lf) {
    return lf.view(lf.center_v(), lf.center_u());
}

}  // namespace lfdepth
