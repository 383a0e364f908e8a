#pragma once

#include <span>
#include <vector>

#include "lfdepth/disparity.hpp"
#include "lfdepth/image.hpp"
#include "lfdepth/light_field.hpp"

namespace lfdepth {

// Median over the valid samples of the clamped 3x3 window (border
// coordinates clamp, so the window always holds 9 samples, duplicates
// included). Even counts take the lower median. A pixel is valid in the
// output when its window holds at least one valid sample, so isolated holes
// shrink by one ring per pass.
DisparityMap median_filter_3x3(const DisparityMap& d);

// Joint bilateral filter: spatial Gaussian (window radius ceil(3*sigma_s))
// times a range Gaussian on luma differences of the guide, accumulated over
// valid samples and normalized. Invalid pixels receive the weighted mean of
// their valid neighbors when any weight is positive.
DisparityMap bilateral_filter(const DisparityMap& d, const Image& guide, double sigma_s,
                              double sigma_r);

// Optional per-estimator blending controls for fuse_weighted. `global` holds
// one scalar weight per map (all 1 when empty); `confidence` holds one
// optional per-pixel map per estimator (null entries mean uniform 1).
struct FusionWeights {
    std::vector<double> global;
    std::vector<const ConfidenceMap*> confidence;
};

// Per-pixel weighted mean over the estimators whose pixel is valid; the
// weight of map i at (y, x) is global[i] * confidence[i](y, x). Pixels where
// the total weight is zero stay invalid.
DisparityMap fuse_weighted(std::span<const DisparityMap> maps, const FusionWeights& weights);

// Fills every invalid pixel with the value of its nearest valid neighbor
// (multi-source BFS over the 4-neighborhood, deterministic scan order). An
// all-invalid map is returned unchanged.
DisparityMap fill_nearest(const DisparityMap& d);

struct EnergyParams {
    double lambda = 0.1;           // smoothness weight
    double charbonnier_eps = 1e-3;
    double step_size = 0.5;        // initial gradient step, adapted by backtracking
    int max_iters = 100;           // accepted-step budget per pyramid level
    int n_levels = 3;
    double sigma_s = 2.0;          // finishing bilateral, spatial
    double sigma_r = 0.1;          // finishing bilateral, range
    void validate() const;
};

// Accepted-energy history, one sequence per pyramid level (coarsest first),
// each starting with the initial energy. Within a sequence values never
// increase; only strictly improving steps are accepted.
struct EnergyTrace {
    std::vector<std::vector<double>> levels;
};

double charbonnier(double t, double eps);
double charbonnier_deriv(double t, double eps);

// Variational polish of a dense disparity map, coarse to fine:
//   E(D) = Sum rho(I_c - I_n(x + D*du, y + D*dv)) +
//          lambda * Sum_edges w * rho(D_p - D_q)
// with rho the Charbonnier penalty, I_n the horizontal neighbor of the
// center view (vertical when n_u == 1, the center itself for a 1x1 grid,
// which nulls the data term), and edge weights
// w = exp(-(|grad I_c|_p + |grad I_c|_q) / (2*tau)), tau = mean gradient
// magnitude of the level's center view. Gradient descent with doubling /
// halving backtracking accepts only strictly decreasing energies. Invalid
// input pixels are pre-filled from their nearest valid neighbor (an
// all-invalid map is an error); the finest level's result goes through the
// bilateral and median passes above.
DisparityMap energy_refine(const DisparityMap& d0, const LightField& lf,
                           const EnergyParams& params, EnergyTrace* trace = nullptr);

}  // namespace lfdepth
