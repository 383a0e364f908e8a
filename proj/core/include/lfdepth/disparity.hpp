#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace lfdepth {

// Dense per-pixel disparity with an explicit validity mask. Invalid pixels
// carry NaN in `values` so a forgotten mask check surfaces as NaN downstream
// instead of a plausible number.
class DisparityMap {
public:
    DisparityMap() = default;
    DisparityMap(int width, int height);

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return values_.empty(); }

    double value(int y, int x) const { return values_[flat(y, x)]; }
    bool is_valid(int y, int x) const { return valid_[flat(y, x)] != 0; }

    void set(int y, int x, double d) {
        values_[flat(y, x)] = d;
        valid_[flat(y, x)] = 1;
    }
    void set_invalid(int y, int x) {
        values_[flat(y, x)] = std::nan("");
        valid_[flat(y, x)] = 0;
    }

    std::size_t valid_count() const;

    const std::vector<double>& values() const { return values_; }
    const std::vector<std::uint8_t>& valid_mask() const { return valid_; }

    std::size_t flat(int y, int x) const { return static_cast<std::size_t>(y) * width_ + x; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> values_;
    std::vector<std::uint8_t> valid_;
};

// Depth shares the representation; only the unit differs.
using DepthMap = DisparityMap;

}  // namespace lfdepth
