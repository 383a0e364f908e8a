#include "lfdepth/sweep.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lfdepth/image.hpp"
#include "lfdepth/parallel.hpp"

namespace lfdepth {

void SweepParams::validate() const {
    if (n_disparities < 2) {
        throw std::invalid_argument("sweep: n_disparities must be at least 2");
    }
    if (box_radius < 0) {
        throw std::invalid_argument("sweep: box_radius must be non-negative");
    }
}

CostVolume build_cost_volume(const LightField& lf, const SceneMeta& meta,
                             const SweepParams& params) {
    params.validate();
    meta.validate();
    const LightField gray = lf.to_luma();
    const int w = gray.width();
    const int h = gray.height();
    const int nu = gray.n_u();
    const int nv = gray.n_v();
    const int views = nu * nv;
    const int cu = gray.center_u();
    const int cv = gray.center_v();

    CostVolume out(w, h, linspace_disparities(meta.disparity_min, meta.disparity_max,
                                              params.n_disparities));

    std::vector<Image> view_imgs;
    view_imgs.reserve(static_cast<std::size_t>(views));
    for (int u = 0; u < nu; ++u) {
        for (int v = 0; v < nv; ++v) {
            view_imgs.push_back(gray.view(v, u));
        }
    }

    // Per-pixel packs of sheared samples, stored u-major then v so the
    // accumulation loop below walks them contiguously in the pinned order.
    std::vector<float> sheared(static_cast<std::size_t>(w) * h * views);
    std::vector<std::uint8_t> in_frame(params.exclude_clamped ? sheared.size() : 0);

    for (int di = 0; di < out.depth_count(); ++di) {
        const double d = out.disparity(di);
        parallel_for(0, h, [&](int y) {
            for (int u = 0; u < nu; ++u) {
                for (int v = 0; v < nv; ++v) {
                    const int k = u * nv + v;
                    const double offx = (u - cu) * d;
                    const double offy = (v - cv) * d;
                    const double sy = y + offy;
                    const bool row_in = sy >= 0.0 && sy <= h - 1;
                    const Image& view_img = view_imgs[static_cast<std::size_t>(k)];
                    for (int x = 0; x < w; ++x) {
                        const double sx = x + offx;
                        const std::size_t slot =
                            (static_cast<std::size_t>(y) * w + x) * views + k;
                        sheared[slot] =
                            static_cast<float>(bilinear_sample(view_img, sx, sy, 0));
                        if (params.exclude_clamped) {
                            in_frame[slot] = row_in && sx >= 0.0 && sx <= w - 1;
                        }
                    }
                }
            }
        });
        parallel_for(0, h, [&](int y) {
            for (int x = 0; x < w; ++x) {
                const std::size_t base = (static_cast<std::size_t>(y) * w + x) * views;
                double sum = 0.0;
                int count = 0;
                for (int k = 0; k < views; ++k) {
                    if (params.exclude_clamped && !in_frame[base + k]) {
                        continue;
                    }
                    sum += sheared[base + k];
                    ++count;
                }
                if (count == 0) {
                    out.at(di, y, x) = 0.0;
                    continue;
                }
                const double mean = sum / count;
                double acc = 0.0;
                for (int k = 0; k < views; ++k) {
                    if (params.exclude_clamped && !in_frame[base + k]) {
                        continue;
                    }
                    const double dev = sheared[base + k] - mean;
                    acc += dev * dev;
                }
                out.at(di, y, x) = acc / count;
            }
        });
    }
    return out;
}

CostVolume box_filter_cost(const CostVolume& cv, int radius) {
    if (radius < 0) {
        throw std::invalid_argument("box_filter_cost: radius must be non-negative");
    }
    if (radius == 0 || cv.empty()) {
        return cv;
    }
    const int w = cv.width();
    const int h = cv.height();
    CostVolume out(w, h, cv.disparities());
    const int window = (2 * radius + 1) * (2 * radius + 1);
    for (int di = 0; di < cv.depth_count(); ++di) {
        parallel_for(0, h, [&](int y) {
            for (int x = 0; x < w; ++x) {
                double sum = 0.0;
                for (int dy = -radius; dy <= radius; ++dy) {
                    const int sy = std::clamp(y + dy, 0, h - 1);
                    for (int dx = -radius; dx <= radius; ++dx) {
                        const int sx = std::clamp(x + dx, 0, w - 1);
                        sum += cv.at(di, sy, sx);
                    }
                }
                out.at(di, y, x) = sum / window;
            }
        });
    }
    return out;
}

DisparityMap select_disparity(const CostVolume& cv) {
    if (cv.empty()) {
        throw std::invalid_argument("select_disparity: empty cost volume");
    }
    const int w = cv.width();
    const int h = cv.height();
    DisparityMap out(w, h);
    parallel_for(0, h, [&](int y) {
        for (int x = 0; x < w; ++x) {
            int best = 0;
            double best_cost = cv.at(0, y, x);
            for (int di = 1; di < cv.depth_count(); ++di) {
                const double c = cv.at(di, y, x);
                if (c < best_cost) {
                    best_cost = c;
                    best = di;
                }
            }
            out.set(y, x, cv.disparity(best));
        }
    });
    return out;
}

DisparityMap estimate_sweep(const LightField& lf, const SceneMeta& meta,
                            const SweepParams& params) {
    const CostVolume cv = build_cost_volume(lf, meta, params);
    const CostVolume filtered = box_filter_cost(cv, params.box_radius);
    return select_disparity(filtered);
}

}  // namespace lfdepth
