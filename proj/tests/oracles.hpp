#pragma once

// Naive reference implementations written straight from the documented
// contracts, with the dumbest possible loops, so the optimized library paths
// have something honest to diff against.

#include <algorithm>
#include <cmath>
#include <vector>

#include "lfdepth/cost_volume.hpp"
#include "lfdepth/image.hpp"
#include "lfdepth/light_field.hpp"
#include "lfdepth/sweep.hpp"

namespace oracle {

// Single-channel luma value of one 4D sample, float arithmetic as pinned.
inline float luma_at(const lfdepth::LightField& lf, int y, int x, int v, int u) {
    if (lf.channels() == 1) {
        return lf.at(y, x, v, u, 0);
    }
    return 0.2126f * lf.at(y, x, v, u, 0) + 0.7152f * lf.at(y, x, v, u, 1) +
           0.0722f * lf.at(y, x, v, u, 2);
}

// Bilinear sample of one luma view, written from the pinned contract.
inline double bilinear_luma(const lfdepth::LightField& lf, int v, int u, double x, double y) {
    const int w = lf.width();
    const int h = lf.height();
    const double xc = std::clamp(x, 0.0, static_cast<double>(w - 1));
    const double yc = std::clamp(y, 0.0, static_cast<double>(h - 1));
    const int x0 = static_cast<int>(std::floor(xc));
    const int y0 = static_cast<int>(std::floor(yc));
    const double fx = xc - x0;
    const double fy = yc - y0;
    const int x1 = std::min(x0 + 1, w - 1);
    const int y1 = std::min(y0 + 1, h - 1);
    const double p00 = luma_at(lf, y0, x0, v, u);
    const double p10 = luma_at(lf, y0, x1, v, u);
    const double p01 = luma_at(lf, y1, x0, v, u);
    const double p11 = luma_at(lf, y1, x1, v, u);
    return (1.0 - fy) * ((1.0 - fx) * p00 + fx * p10) + fy * ((1.0 - fx) * p01 + fx * p11);
}

// Quadruple-loop plane-sweep cost volume: per hypothesis, per pixel, walk the
// views in u-major then v order, collect float32 sheared samples, then mean
// and population variance in double. Must match build_cost_volume bit for
// bit.
inline lfdepth::CostVolume cost_volume(const lfdepth::LightField& lf,
                                       const lfdepth::SceneMeta& meta,
                                       const lfdepth::SweepParams& params) {
    const int w = lf.width();
    const int h = lf.height();
    const int nu = lf.n_u();
    const int nv = lf.n_v();
    const int cu = lf.center_u();
    const int cv = lf.center_v();
    lfdepth::CostVolume out(
        w, h,
        lfdepth::linspace_disparities(meta.disparity_min, meta.disparity_max,
                                      params.n_disparities));
    for (int di = 0; di < out.depth_count(); ++di) {
        const double d = out.disparity(di);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                std::vector<float> samples;
                std::vector<bool> usable;
                for (int u = 0; u < nu; ++u) {
                    for (int v = 0; v < nv; ++v) {
                        const double sx = x + (u - cu) * d;
                        const double sy = y + (v - cv) * d;
                        samples.push_back(
                            static_cast<float>(bilinear_luma(lf, v, u, sx, sy)));
                        usable.push_back(!params.exclude_clamped ||
                                         (sx >= 0.0 && sx <= w - 1 && sy >= 0.0 &&
                                          sy <= h - 1));
                    }
                }
                double sum = 0.0;
                int count = 0;
                for (std::size_t k = 0; k < samples.size(); ++k) {
                    if (usable[k]) {
                        sum += samples[k];
                        ++count;
                    }
                }
                if (count == 0) {
                    out.at(di, y, x) = 0.0;
                    continue;
                }
                const double mean = sum / count;
                double acc = 0.0;
                for (std::size_t k = 0; k < samples.size(); ++k) {
                    if (usable[k]) {
                        const double dev = samples[k] - mean;
                        acc += dev * dev;
                    }
                }
                out.at(di, y, x) = acc / count;
            }
        }
    }
    return out;
}

// Direct windowed mean with clamped coordinates.
inline lfdepth::CostVolume box_filter(const lfdepth::CostVolume& cv, int radius) {
    lfdepth::CostVolume out(cv.width(), cv.height(), cv.disparities());
    const int n = (2 * radius + 1) * (2 * radius + 1);
    for (int di = 0; di < cv.depth_count(); ++di) {
        for (int y = 0; y < cv.height(); ++y) {
            for (int x = 0; x < cv.width(); ++x) {
                double sum = 0.0;
                for (int dy = -radius; dy <= radius; ++dy) {
                    for (int dx = -radius; dx <= radius; ++dx) {
                        const int sy = std::clamp(y + dy, 0, cv.height() - 1);
                        const int sx = std::clamp(x + dx, 0, cv.width() - 1);
                        sum += cv.at(di, sy, sx);
                    }
                }
                out.at(di, y, x) = sum / n;
            }
        }
    }
    return out;
}

// Gaussian 7x7 weights recomputed from scratch (sigma^2 = 0.5), applied with
// reflect-without-edge-repeat borders.
inline double gaussian7_at(const lfdepth::Image& img, int y, int x, int c) {
    double wsum = 0.0;
    double acc = 0.0;
    for (int dy = -3; dy <= 3; ++dy) {
        for (int dx = -3; dx <= 3; ++dx) {
            int sy = y + dy;
            int sx = x + dx;
            while (sy < 0 || sy >= img.height()) {
                sy = sy < 0 ? -sy : 2 * (img.height() - 1) - sy;
            }
            while (sx < 0 || sx >= img.width()) {
                sx = sx < 0 ? -sx : 2 * (img.width() - 1) - sx;
            }
            const double wgt = std::exp(-(dx * dx + dy * dy) / (2.0 * 0.5));
            wsum += wgt;
            acc += wgt * img.at(sy, sx, c);
        }
    }
    return acc / wsum;
}

}  // namespace oracle
