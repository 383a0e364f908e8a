#pragma once

#include "lfdepth/disparity.hpp"
#include "lfdepth/image.hpp"
#include "lfdepth/light_field.hpp"

namespace lfdepth {

// Per-sample gradients of a 1-channel field along the two spatial and two
// angular axes, same (y, x, v, u) indexing as the source field.
struct GradientField {
    int width = 0;
    int height = 0;
    int n_u = 0;
    int n_v = 0;
    std::vector<float> lx, ly, lu, lv;

    std::size_t index(int y, int x, int v, int u) const {
        return ((static_cast<std::size_t>(y) * width + x) * n_v + v) * n_u + u;
    }
};

// Central differences in the interior, one-sided at borders, zero along
// singleton axes. Color input is converted to luma first. Rejects fields with
// a 1x1 spatial extent.
GradientField gradients(const LightField& lf);

// Re-centers every view onto the plane at disparity d:
//   out(y, x, v, u) = in(y + (v - c_v) * d, x + (u - c_u) * d, v, u)
// sampled bilinearly with clamp-to-edge borders. shear(lf, 0) is an exact
// copy.
LightField shear(const LightField& lf, double d);

// Same per-view re-centering for view (v, u) only.
Image shear_view(const LightField& lf, int v, int u, double d);

// 7x7 Gaussian, sigma^2 = 0.5, borders mirrored without repeating the edge
// sample. Exposed separately so the pyramid stays testable in parts.
Image gaussian_blur7(const Image& img);

// Blur then keep every second sample starting at 0; output dims are
// ceil(in/2). Rejects images smaller than 2x2.
Image pyramid_down(const Image& img);

// Nearest-neighbor upsample to (target_w, target_h), source index
// floor(y * src_h / target_h). Values are multiplied by target_w / src_w so
// disparities keep their per-pixel meaning; invalid pixels stay invalid.
// Target dims must not shrink either axis.
DisparityMap upsample_disparity(const DisparityMap& d, int target_w, int target_h);

}  // namespace lfdepth
