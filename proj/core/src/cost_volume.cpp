#include "lfdepth/cost_volume.hpp"

#include <stdexcept>

namespace lfdepth {

CostVolume::CostVolume(int width, int height, std::vector<double> disparities)
    : width_(width), height_(height), disparities_(std::move(disparities)) {
    if (width <= 0 || height <= 0 || disparities_.empty()) {
        throw std::invalid_argument("CostVolume: bad dimensions or empty hypothesis list");
    }
    cost_.assign(static_cast<std::size_t>(width) * height * disparities_.size(), 0.0);
}

std::vector<double> linspace_disparities(double lo, double hi, int n) {
    if (n <= 0) {
        throw std::invalid_argument("linspace_disparities: need at least one sample");
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double span = hi - lo;
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = lo + span * i / (n - 1);
    }
    out.back() = hi;
    return out;
}

}  // namespace lfdepth
