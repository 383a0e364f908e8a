#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lfdepth/image.hpp"

namespace lfdepth {

struct SceneMeta {
    std::string name;
    double focal_length_px = 100.0;
    double baseline = 0.5;
    double disparity_min = -2.0;
    double disparity_max = 2.0;

    double disparity_span() const { return disparity_max - disparity_min; }
    // Throws std::invalid_argument on non-positive focal/baseline or an empty
    // disparity range.
    void validate() const;
};

// 4D radiance volume indexed (y, x, v, u, c). The reference view sits at
// (n_v / 2, n_u / 2); odd angular extents center it exactly.
class LightField {
public:
    LightField() = default;
    LightField(int width, int height, int n_u, int n_v, int channels, float fill = 0.0f);

    int width() const { return width_; }
    int height() const { return height_; }
    int n_u() const { return n_u_; }
    int n_v() const { return n_v_; }
    int channels() const { return channels_; }
    int center_u() const { return n_u_ / 2; }
    int center_v() const { return n_v_ / 2; }
    bool empty() const { return data_.empty(); }

    float& at(int y, int x, int v, int u, int c = 0) { return data_[index(y, x, v, u, c)]; }
    float at(int y, int x, int v, int u, int c = 0) const { return data_[index(y, x, v, u, c)]; }

    std::size_t index(int y, int x, int v, int u, int c) const {
        return (((static_cast<std::size_t>(y) * width_ + x) * n_v_ + v) * n_u_ + u) * channels_ + c;
    }

    Image view(int v, int u) const;
    // Per-view Rec.709 conversion; a 1-channel field is returned unchanged.
    LightField to_luma() const;

    const std::vector<float>& data() const { return data_; }
    std::vector<float>& data() { return data_; }

private:
    int width_ = 0;
    int height_ = 0;
    int n_u_ = 0;
    int n_v_ = 0;
    int channels_ = 0;
    std::vector<float> data_;
};

Image center_view(const LightField& lf);

}  // namespace lfdepth
