#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "lfdepth/disparity.hpp"
#include "lfdepth/image.hpp"
#include "lfdepth/light_field.hpp"

namespace lfdepth {

enum class KernelKind {
    // max(0, 1 - |x|/h): unit weight at the mode, zero outside the bandwidth.
    triangular,
    // 1 - h/|x| where |x| >= h, else 0: a dispersion score kept only for
    // comparison runs (it rewards samples far from the mode and zeroes out
    // when all radiances agree).
    paper_literal,
};

struct EpiParams {
    int edge_window_rows = 3;
    int edge_window_cols = 7;
    bool transpose_edge_window = false;
    double edge_threshold_level0 = 0.05;
    double edge_threshold_coarse = 0.1;
    double bandwidth = 0.1;            // kernel support h
    double depth_conf_epsilon = 0.03;  // C_d at or below this marks the pixel invalid
    int n_disparities = 11;
    int meanshift_max_iters = 20;
    double meanshift_tol = 1e-4;
    int min_pyramid_extent = 10;  // stop refining once min(w, h) drops below this
    KernelKind kernel = KernelKind::triangular;

    void validate() const;
};

// One sample per view. Grayscale uses component 0 with the rest zero, so the
// Euclidean norm reduces to the absolute difference and one code path serves
// both.
using Radiance = std::array<double, 3>;

// Local contrast: sum of norms |I(x,y) - I(x',y')| over every pixel of the
// rows x cols window centered at (x,y), border coordinates clamped
// (duplicates included, the window always holds rows*cols samples). Color
// images compare with the Euclidean norm over RGB. The image must be at
// least as large as the window.
ConfidenceMap edge_confidence(const Image& img, const EpiParams& params);

// Radiances along the EPI line through (x, y) at slope d: view (v, u)
// contributes the bilinear sample at (x + (u - c_u) * d, y + (v - c_v) * d),
// border clamped, in v-major then u order (the center view contributes its
// own pixel). On a plane at disparity d the samples all agree.
std::vector<Radiance> sample_radiances(const LightField& lf, int x, int y, double d);

struct DensityScore {
    double score = 0.0;  // mean kernel weight at the converged mode, in [0, 1]
    Radiance mode{};
};

// Mean-shift mode seeking over the sample set: starting from `init` (the
// sample mean when not given), iterate
//   mode <- Sum K(r - mode) * r / Sum K(r - mode)
// until the step norm drops below tol or max_iters is hit, then score
// S = mean K(r - mode). If every kernel weight vanishes the score is 0 and
// the mode stays where it was.
DensityScore density_score(std::span<const Radiance> radiances, const EpiParams& params,
                           std::optional<Radiance> init = std::nullopt);

struct EpiEstimate {
    DisparityMap disparity;
    ConfidenceMap confidence;  // C_d where scored, 0 where the edge gate skipped
};

// Single-level estimator: pixels whose edge confidence is below the level's
// threshold (level 0 uses edge_threshold_level0, coarser levels
// edge_threshold_coarse) are skipped. Elsewhere S is evaluated per hypothesis
// (ascending order required; ties take the smallest disparity) and
// C_d = C_e * |S_max - mean_d S|; pixels with C_d <= depth_conf_epsilon are
// invalid. The disparity map gets a final 3x3 median pass; the returned
// confidence is pre-median C_d.
EpiEstimate estimate_epi_level(const LightField& lf, std::span<const double> disparities,
                               const EpiParams& params, int level);

// Fine-to-coarse refinement: estimate at full resolution over the scene
// range, then repeatedly downsample all views (pyramid_down) and halve the
// hypothesis values, estimating again while min(w, h) stays at or above
// min_pyramid_extent. Coarse values are upsampled level by level
// (upsample_disparity rescales them) and fill only pixels still invalid at
// finer levels; remaining holes take the nearest valid value (BFS), then a
// final 3x3 median runs. A field with no confident pixel at any level comes
// back all-invalid.
DisparityMap fine_to_coarse(const LightField& lf, const SceneMeta& meta,
                            const EpiParams& params);

}  // namespace lfdepth
