#include "lfdepth/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lfdepth/image.hpp"
#include "lfdepth/parallel.hpp"

namespace lfdepth {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double hash01(std::uint64_t seed, std::int64_t ix, std::int64_t iy) {
    std::uint64_t h = seed;
    h = splitmix64(h ^ static_cast<std::uint64_t>(ix));
    h = splitmix64(h ^ static_cast<std::uint64_t>(iy));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double smoothstep(double t) {
    return t * t * (3.0 - 2.0 * t);
}

// One octave on a unit lattice.
double noise_octave(std::uint64_t seed, double x, double y) {
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const auto ix = static_cast<std::int64_t>(fx);
    const auto iy = static_cast<std::int64_t>(fy);
    const double tx = smoothstep(x - fx);
    const double ty = smoothstep(y - fy);
    const double a = hash01(seed, ix, iy);
    const double b = hash01(seed, ix + 1, iy);
    const double c = hash01(seed, ix, iy + 1);
    const double d = hash01(seed, ix + 1, iy + 1);
    const double top = a + (b - a) * tx;
    const double bot = c + (d - c) * tx;
    return top + (bot - top) * ty;
}

// Standard normal from a position-keyed counter, Box-Muller.
double gaussian_at(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t h1 = splitmix64(seed ^ splitmix64(index));
    const std::uint64_t h2 = splitmix64(h1);
    const double u1 = (static_cast<double>(h1 >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(h2 >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

float clamp01(double v) {
    return static_cast<float>(v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v));
}

}  // namespace

double value_noise(std::uint64_t seed, double x, double y, double lattice, int octaves) {
    if (!(lattice > 0.0) || octaves < 1) {
        throw std::invalid_argument("value_noise: need positive lattice and at least one octave");
    }
    double sum = 0.0;
    double norm = 0.0;
    double freq = 1.0 / lattice;
    double amp = 1.0;
    for (int o = 0; o < octaves; ++o) {
        sum += amp * noise_octave(seed + static_cast<std::uint64_t>(o) * 0x517cc1b727220a95ull,
                                  x * freq, y * freq);
        norm += amp;
        freq *= 2.0;
        amp *= 0.5;
    }
    return sum / norm;
}

void SynthSpec::validate() const {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("synth: bad frame size");
    }
    if (n_u < 1 || n_v < 1) {
        throw std::invalid_argument("synth: angular extents must be positive");
    }
    if (channels != 1 && channels != 3) {
        throw std::invalid_argument("synth: channels must be 1 or 3");
    }
    if (layers.empty()) {
        throw std::invalid_argument("synth: need at least one layer");
    }
    if (layers.back().region.has_value()) {
        throw std::invalid_argument("synth: backmost layer must cover the full frame");
    }
    meta.validate();
    for (const auto& layer : layers) {
        if (layer.disparity < meta.disparity_min || layer.disparity > meta.disparity_max) {
            throw std::invalid_argument("synth: layer disparity outside the scene range");
        }
        if (layer.region && (layer.region->x0 >= layer.region->x1 ||
                             layer.region->y0 >= layer.region->y1)) {
            throw std::invalid_argument("synth: empty layer region");
        }
    }
    if (noise_sigma < 0.0) {
        throw std::invalid_argument("synth: noise_sigma must be non-negative");
    }
}

SynthScene synth_scene(const SynthSpec& spec) {
    spec.validate();
    const int w = spec.width;
    const int h = spec.height;
    const int nl = static_cast<int>(spec.layers.size());

    std::vector<Image> rasters;
    rasters.reserve(static_cast<std::size_t>(nl));
    for (int l = 0; l < nl; ++l) {
        const auto& layer = spec.layers[static_cast<std::size_t>(l)];
        Image raster(w, h, spec.channels);
        parallel_for(0, h, [&](int y) {
            for (int x = 0; x < w; ++x) {
                for (int c = 0; c < spec.channels; ++c) {
                    const std::uint64_t seed =
                        layer.seed + static_cast<std::uint64_t>(c) * 0x2545f4914f6cdd1dull;
                    const double n = value_noise(seed, x, y, layer.lattice, layer.octaves);
                    raster.at(y, x, c) = clamp01(layer.base + layer.amplitude * (n - 0.5));
                }
            }
        });
        rasters.push_back(std::move(raster));
    }

    SynthScene out;
    out.field = LightField(w, h, spec.n_u, spec.n_v, spec.channels);
    out.ground_truth = DisparityMap(w, h);
    const int cu = out.field.center_u();
    const int cv = out.field.center_v();

    auto front_layer_at = [&](double x, double y, int du, int dv) -> int {
        for (int l = 0; l < nl; ++l) {
            const auto& layer = spec.layers[static_cast<std::size_t>(l)];
            const double px = x - du * layer.disparity;
            const double py = y - dv * layer.disparity;
            if (!layer.region || layer.region->contains(px, py)) {
                return l;
            }
        }
        return nl - 1;  // unreachable: the backmost layer has no region
    };

    for (int v = 0; v < spec.n_v; ++v) {
        for (int u = 0; u < spec.n_u; ++u) {
            const int du = u - cu;
            const int dv = v - cv;
            parallel_for(0, h, [&](int y) {
                for (int x = 0; x < w; ++x) {
                    const int l = front_layer_at(x, y, du, dv);
                    const auto& layer = spec.layers[static_cast<std::size_t>(l)];
                    const double px = x - du * layer.disparity;
                    const double py = y - dv * layer.disparity;
                    for (int c = 0; c < spec.channels; ++c) {
                        out.field.at(y, x, v, u, c) = static_cast<float>(
                            bilinear_sample(rasters[static_cast<std::size_t>(l)], px, py, c));
                    }
                }
            });
        }
    }

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int l = front_layer_at(x, y, 0, 0);
            out.ground_truth.set(y, x, spec.layers[static_cast<std::size_t>(l)].disparity);
        }
    }

    if (spec.noise_sigma > 0.0) {
        const std::size_t total = out.field.data().size();
        float* data = out.field.data().data();
        parallel_for(0, static_cast<int>(total / 4096) + 1, [&](int block) {
            const std::size_t lo = static_cast<std::size_t>(block) * 4096;
            const std::size_t hi = std::min(total, lo + 4096);
            for (std::size_t i = lo; i < hi; ++i) {
                data[i] = clamp01(data[i] + spec.noise_sigma * gaussian_at(spec.noise_seed, i));
            }
        });
    }
    return out;
}

}  // namespace lfdepth
