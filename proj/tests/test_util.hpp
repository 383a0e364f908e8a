#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

#include "lfdepth/light_field.hpp"

namespace testutil {

// Unique scratch directory per call; contents are left behind for post-mortem
// inspection, the OS temp cleaner owns them.
inline std::filesystem::path make_temp_dir(const std::string& tag) {
    static std::uint64_t counter = 0;
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    const auto dir = std::filesystem::temp_directory_path() /
                     ("lfdepth_" + tag + "_" + std::to_string(stamp) + "_" +
                      std::to_string(counter++));
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string cli_path() {
    const char* p = std::getenv("LFDEPTH_CLI");
    return p ? p : "";
}

inline lfdepth::LightField random_field(std::mt19937_64& rng, int w, int h, int nu, int nv,
                                        int channels) {
    lfdepth::LightField lf(w, h, nu, nv, channels);
    std::uniform_real_distribution<float> dist(0.0f, 1.0f);
    for (auto& s : lf.data()) {
        s = dist(rng);
    }
    return lf;
}

// Fronto-parallel plane in the toolkit convention: view (v, u) shows the
// texture shifted by its angular offset times d0, so shear(lf, d0) re-centers
// every view onto the center-view appearance.
template <typename TexFn>
lfdepth::LightField plane_field(int w, int h, int nu, int nv, double d0, TexFn tex) {
    lfdepth::LightField lf(w, h, nu, nv, 1);
    const int cu = nu / 2;
    const int cv = nv / 2;
    for (int v = 0; v < nv; ++v) {
        for (int u = 0; u < nu; ++u) {
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    lf.at(y, x, v, u) = static_cast<float>(
                        tex(x - (u - cu) * d0, y - (v - cv) * d0));
                }
            }
        }
    }
    return lf;
}

}  // namespace testutil
