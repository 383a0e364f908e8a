#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lfdepth/disparity.hpp"
#include "lfdepth/light_field.hpp"

namespace lfdepth {

// Half-open pixel rectangle in center-view coordinates.
struct Rect {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;

    bool contains(double x, double y) const {
        return x >= x0 && x < x1 && y >= y0 && y < y1;
    }
};

// One fronto-parallel textured plane. Layers are listed front to back; the
// backmost layer must cover the full frame (region unset).
struct SynthLayer {
    double disparity = 0.0;
    std::uint64_t seed = 1;
    std::optional<Rect> region;
    double base = 0.5;       // mean radiance
    double amplitude = 0.7;  // peak-to-peak texture contrast
    double lattice = 8.0;    // coarsest octave cell size in pixels
    int octaves = 3;
};

struct SynthSpec {
    int width = 64;
    int height = 64;
    int n_u = 9;
    int n_v = 9;
    int channels = 1;
    std::vector<SynthLayer> layers;
    double noise_sigma = 0.0;
    std::uint64_t noise_seed = 0;
    SceneMeta meta;

    // Throws std::invalid_argument when no layer exists, the backmost layer
    // is windowed, a disparity leaves the meta range, or noise_sigma < 0.
    void validate() const;
};

struct SynthScene {
    LightField field;
    DisparityMap ground_truth;
};

// Deterministic seeded value noise in [0, 1]: smoothstep-interpolated hash
// lattice, `octaves` octaves with doubling frequency and halving amplitude.
// A pure function of its arguments, so evaluation order never matters.
double value_noise(std::uint64_t seed, double x, double y, double lattice, int octaves);

// Renders every sub-aperture view: each layer's texture is rasterized on the
// center-view grid, then view (v, u) samples it bilinearly at
// (x - (u - c_u) * d, y - (v - c_v) * d), so shear(field, d) re-centers a
// layer at disparity d onto its center-view appearance. Front layers win
// where their shifted region covers the pixel. The ground truth is the
// visible layer's disparity in the center view. Gaussian per-sample noise
// (seeded, position-keyed) is added after composition and the result is
// clamped to [0, 1].
SynthScene synth_scene(const SynthSpec& spec);

}  // namespace lfdepth
