#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "lfdepth/kernels.hpp"
#include "lfdepth/synth.hpp"

using namespace lfdepth;

namespace {

SynthSpec base_spec() {
    SynthSpec spec;
    spec.width = 32;
    spec.height = 32;
    spec.n_u = 5;
    spec.n_v = 5;
    spec.meta.name = "synthtest";
    spec.meta.disparity_min = -2.0;
    spec.meta.disparity_max = 2.0;
    return spec;
}

}  // namespace

TEST_CASE("value noise is a pure function with range [0, 1]") {
    for (std::uint64_t seed : {1ull, 42ull, 0xdeadbeefull}) {
        for (double x : {-7.3, 0.0, 2.5, 113.9}) {
            for (double y : {-1.0, 0.25, 64.0}) {
                const double a = value_noise(seed, x, y, 8.0, 3);
                const double b = value_noise(seed, x, y, 8.0, 3);
                CHECK(a == b);
                CHECK(a >= 0.0);
                CHECK(a <= 1.0);
            }
        }
    }
    CHECK_THROWS_AS(value_noise(1, 0.0, 0.0, 0.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(value_noise(1, 0.0, 0.0, 8.0, 0), std::invalid_argument);
}

TEST_CASE("value noise differs across seeds") {
    int differing = 0;
    for (int i = 0; i < 16; ++i) {
        const double a = value_noise(7, i * 1.7, i * 0.9, 4.0, 2);
        const double b = value_noise(8, i * 1.7, i * 0.9, 4.0, 2);
        if (a != b) {
            ++differing;
        }
    }
    CHECK(differing > 8);
}

TEST_CASE("synthesis is deterministic, noise included") {
    SynthSpec spec = base_spec();
    spec.layers.push_back({0.9, 5});
    spec.noise_sigma = 0.05;
    spec.noise_seed = 77;
    const SynthScene a = synth_scene(spec);
    const SynthScene b = synth_scene(spec);
    REQUIRE(a.field.data().size() == b.field.data().size());
    for (std::size_t i = 0; i < a.field.data().size(); ++i) {
        CHECK(a.field.data()[i] == b.field.data()[i]);
    }
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            CHECK(a.ground_truth.value(y, x) == b.ground_truth.value(y, x));
        }
    }

    SynthSpec other = spec;
    other.noise_seed = 78;
    const SynthScene c = synth_scene(other);
    std::size_t diffs = 0;
    for (std::size_t i = 0; i < a.field.data().size(); ++i) {
        diffs += a.field.data()[i] != c.field.data()[i];
    }
    CHECK(diffs > a.field.data().size() / 2);
}

TEST_CASE("all synthesized radiances stay in [0, 1]") {
    SynthSpec spec = base_spec();
    spec.channels = 3;
    spec.layers.push_back({-1.2, 3, std::nullopt, 0.5, 1.4});  // amplitude overshoots
    spec.noise_sigma = 0.3;
    const SynthScene scene = synth_scene(spec);
    for (float s : scene.field.data()) {
        CHECK(s >= 0.0f);
        CHECK(s <= 1.0f);
    }
}

TEST_CASE("a single zero-disparity layer gives identical views and zero truth") {
    SynthSpec spec = base_spec();
    spec.layers.push_back({0.0, 11});
    const SynthScene scene = synth_scene(spec);
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            REQUIRE(scene.ground_truth.is_valid(y, x));
            CHECK(scene.ground_truth.value(y, x) == 0.0);
            const float c = scene.field.at(y, x, spec.n_v / 2, spec.n_u / 2);
            for (int v = 0; v < spec.n_v; ++v) {
                for (int u = 0; u < spec.n_u; ++u) {
                    CHECK(scene.field.at(y, x, v, u) == c);
                }
            }
        }
    }
}

TEST_CASE("a single sloped layer is re-centered by its own disparity") {
    SynthSpec spec = base_spec();
    // a gentle texture keeps the double-interpolation error well under the bound
    spec.layers.push_back({1.5, 21, std::nullopt, 0.5, 0.6, 16.0, 2});
    const SynthScene scene = synth_scene(spec);
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            CHECK(scene.ground_truth.value(y, x) == 1.5);
        }
    }
    const LightField aligned = shear(scene.field, 1.5);
    const Image c = center_view(scene.field);
    const int margin = static_cast<int>(std::ceil(1.5 * spec.n_u / 2.0)) + 1;
    for (int v = 0; v < spec.n_v; ++v) {
        for (int u = 0; u < spec.n_u; ++u) {
            for (int y = margin; y < spec.height - margin; ++y) {
                for (int x = margin; x < spec.width - margin; ++x) {
                    CHECK(std::fabs(aligned.at(y, x, v, u) - c.at(y, x)) < 0.05);
                }
            }
        }
    }
}

TEST_CASE("two layers composit with the front occluding the back") {
    SynthSpec spec = base_spec();
    const Rect rect{8, 10, 20, 24};
    spec.layers.push_back({1.0, 31, rect});
    spec.layers.push_back({-1.0, 32});
    const SynthScene scene = synth_scene(spec);

    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            const double want = rect.contains(x, y) ? 1.0 : -1.0;
            CHECK(scene.ground_truth.value(y, x) == want);
        }
    }

    // in the view one step right of center the front region shifts by
    // d_front, so the column at x1 flips from back to front
    const int cu = spec.n_u / 2;
    const int cv = spec.n_v / 2;
    const int y = 16;
    CHECK_FALSE(rect.contains(rect.x1, y));
    const auto& front = spec.layers[0];
    const double expected_front =
        std::clamp(front.base + front.amplitude *
                                    (value_noise(front.seed, rect.x1 - 1.0, y, front.lattice,
                                                 front.octaves) -
                                     0.5),
                   0.0, 1.0);
    CHECK(scene.field.at(y, rect.x1, cv, cu + 1) ==
          doctest::Approx(expected_front).epsilon(1e-6));

    // the center view shows the back layer at that same pixel
    const auto& back = spec.layers[1];
    const double expected_back =
        std::clamp(back.base + back.amplitude *
                                   (value_noise(back.seed, rect.x1, y, back.lattice,
                                                back.octaves) -
                                    0.5),
                   0.0, 1.0);
    CHECK(scene.field.at(y, rect.x1, cv, cu) ==
          doctest::Approx(expected_back).epsilon(1e-6));
}

TEST_CASE("spec validation rejects inconsistent layer stacks") {
    SynthSpec spec = base_spec();
    CHECK_THROWS_AS(synth_scene(spec), std::invalid_argument);  // no layers

    spec.layers.push_back({0.0, 1, Rect{0, 0, 4, 4}});
    CHECK_THROWS_AS(synth_scene(spec), std::invalid_argument);  // windowed backmost

    spec.layers.clear();
    spec.layers.push_back({5.0, 1});
    CHECK_THROWS_AS(synth_scene(spec), std::invalid_argument);  // outside range

    spec.layers.clear();
    spec.layers.push_back({0.0, 1});
    spec.noise_sigma = -0.1;
    CHECK_THROWS_AS(synth_scene(spec), std::invalid_argument);
}
