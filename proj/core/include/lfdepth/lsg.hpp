#pragma once

#include "lfdepth/disparity.hpp"
#include "lfdepth/light_field.hpp"

namespace lfdepth {

struct LsgParams {
    int window_radius = 1;        // spatial patch half-size
    double denom_epsilon = 1e-8;  // division guard; smaller sums mark the pixel invalid
    // The angular form Sum(Lu^2 + Lv^2) is kept selectable for comparison
    // runs; it recovers 1/d instead of d on ideal scenes and is never the
    // default.
    enum class Denominator { spatial_gradients, angular_gradients };
    Denominator denominator = Denominator::spatial_gradients;

    void validate() const;
};

// Closed-form per-pixel least-squares fit of the local EPI slope. For every
// pixel, gradient products are summed over the full angular grid and a
// (2r+1)^2 spatial window (clipped at frame borders), then
//   d = -Sum(Lx*Lu + Ly*Lv) / (Sum(Lx^2 + Ly^2) + eps)
// The leading minus converts the slope to this toolkit's shear convention,
// where shear(lf, d) re-centers a plane at disparity d. Results are clamped
// to the scene disparity range; pixels whose denominator sum stays below eps
// (textureless patches) are invalid.
DisparityMap estimate_lsg(const LightField& lf, const SceneMeta& meta, const LsgParams& params);

}  // namespace lfdepth
