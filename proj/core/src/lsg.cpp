#include "lfdepth/lsg.hpp"

#include <algorithm>
#include <stdexcept>

#include "lfdepth/image.hpp"
#include "lfdepth/kernels.hpp"
#include "lfdepth/parallel.hpp"

namespace lfdepth {

void LsgParams::validate() const {
    if (window_radius < 0) {
        throw std::invalid_argument("lsg: window_radius must be non-negative");
    }
    if (!(denom_epsilon > 0.0)) {
        throw std::invalid_argument("lsg: denom_epsilon must be positive");
    }
}

DisparityMap estimate_lsg(const LightField& lf, const SceneMeta& meta, const LsgParams& params) {
    params.validate();
    meta.validate();
    if (lf.width() < 2 || lf.height() < 2) {
        throw std::invalid_argument("lsg: need at least 2 samples along each spatial axis");
    }
    const GradientField g = gradients(lf);
    const int w = lf.width();
    const int h = lf.height();
    const bool spatial_denom = params.denominator == LsgParams::Denominator::spatial_gradients;

    // Angular sums first so the window pass below only touches 2D maps.
    Map2D num(w, h);
    Map2D den(w, h);
    parallel_for(0, h, [&](int y) {
        for (int x = 0; x < w; ++x) {
            double p = 0.0;
            double q = 0.0;
            for (int v = 0; v < lf.n_v(); ++v) {
                for (int u = 0; u < lf.n_u(); ++u) {
                    const std::size_t i = g.index(y, x, v, u);
                    const double lx = g.lx[i];
                    const double ly = g.ly[i];
                    const double lu = g.lu[i];
                    const double lv = g.lv[i];
                    p += lx * lu + ly * lv;
                    q += spatial_denom ? lx * lx + ly * ly : lu * lu + lv * lv;
                }
            }
            num.at(y, x) = p;
            den.at(y, x) = q;
        }
    });

    const int r = params.window_radius;
    DisparityMap out(w, h);
    parallel_for(0, h, [&](int y) {
        const int y0 = std::max(0, y - r);
        const int y1 = std::min(h - 1, y + r);
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - r);
            const int x1 = std::min(w - 1, x + r);
            double p = 0.0;
            double q = 0.0;
            for (int yy = y0; yy <= y1; ++yy) {
                for (int xx = x0; xx <= x1; ++xx) {
                    p += num.at(yy, xx);
                    q += den.at(yy, xx);
                }
            }
            if (q < params.denom_epsilon) {
                out.set_invalid(y, x);
                continue;
            }
            const double d = -p / (q + params.denom_epsilon);
            out.set(y, x, std::clamp(d, meta.disparity_min, meta.disparity_max));
        }
    });
    return out;
}

}  // namespace lfdepth
