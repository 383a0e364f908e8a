#include "lfdepth/disparity.hpp"

#include <stdexcept>

namespace lfdepth {

DisparityMap::DisparityMap(int width, int height) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("DisparityMap: bad dimensions");
    }
    const std::size_t n = static_cast<std::size_t>(width) * height;
    values_.assign(n, std::nan(""));
    valid_.assign(n, 0);
}

std::size_t DisparityMap::valid_count() const {
    std::size_t n = 0;
    for (auto v : valid_) {
        n += v;
    }
    return n;
}

}  // namespace lfdepth
