#pragma once

#include "lfdepth/cost_volume.hpp"
#include "lfdepth/disparity.hpp"
#include "lfdepth/light_field.hpp"

namespace lfdepth {

struct SweepParams {
    int n_disparities = 11;
    int box_radius = 1;  // 1 means a 3x3 window
    // Strict border mode: samples whose sheared coordinates fell outside the
    // frame are dropped from the mean/variance with renormalization instead
    // of using clamped coordinates. Off by default.
    bool exclude_clamped = false;

    void validate() const;
};

// Photometric-consistency cost: for each hypothesis d (n_disparities values
// uniformly spanning the scene range, endpoints included), every view is
// sheared by d and the per-pixel population variance across views is the
// cost. Computation is pinned for reproducibility: luma conversion first,
// sheared view samples stored as float32 (as shear() produces), mean then
// squared deviations accumulated in double over views in u-major then
// v-major order, both divided by the view count.
CostVolume build_cost_volume(const LightField& lf, const SceneMeta& meta,
                             const SweepParams& params);

// Per-slice mean over the (2r+1)^2 window with border replication (clamped
// coordinates, so edge samples repeat). Radius 0 is the identity.
CostVolume box_filter_cost(const CostVolume& cv, int radius);

// Winner-take-all argmin per pixel; ties break toward the smallest slice
// index. Every pixel is valid.
DisparityMap select_disparity(const CostVolume& cv);

// build_cost_volume then box_filter_cost(params.box_radius) then
// select_disparity.
DisparityMap estimate_sweep(const LightField& lf, const SceneMeta& meta,
                            const SweepParams& params);

}  // namespace lfdepth
