#pragma once

#include <cstddef>
#include <vector>

namespace lfdepth {

// Per-pixel matching cost for each disparity hypothesis. Slice d is a dense
// width x height plane; `disparities` maps slice index to hypothesis value.
class CostVolume {
public:
    CostVolume() = default;
    CostVolume(int width, int height, std::vector<double> disparities);

    int width() const { return width_; }
    int height() const { return height_; }
    int depth_count() const { return static_cast<int>(disparities_.size()); }
    bool empty() const { return cost_.empty(); }

    double disparity(int d) const { return disparities_[d]; }
    const std::vector<double>& disparities() const { return disparities_; }

    double& at(int d, int y, int x) { return cost_[index(d, y, x)]; }
    double at(int d, int y, int x) const { return cost_[index(d, y, x)]; }

    std::size_t index(int d, int y, int x) const {
        return (static_cast<std::size_t>(d) * height_ + y) * width_ + x;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> disparities_;
    std::vector<double> cost_;
};

// n evenly spaced hypotheses over [lo, hi] inclusive; n == 1 yields {lo}.
std::vector<double> linspace_disparities(double lo, double hi, int n);

}  // namespace lfdepth
