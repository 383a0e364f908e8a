#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "lfdepth/disparity.hpp"
#include "lfdepth/light_field.hpp"

namespace lfdepth {

// Parsed form of the flat key=value scene description. Recognized keys:
//   name, image_dir, pattern, n_u, n_v, focal_length_px, baseline,
//   disp_min, disp_max, gt
// '#' starts a comment, blank lines are skipped, unknown keys are an error.
// Relative image_dir and gt are resolved against the config file's directory.
struct SceneConfig {
    std::filesystem::path image_dir;
    std::string pattern = "input_Cam{NNN}.png";
    int n_u = 0;
    int n_v = 0;
    SceneMeta meta;
    std::optional<std::filesystem::path> gt_path;

    // Throws config_error when angular extents are missing or meta is
    // inconsistent.
    void validate() const;
};

struct LoadedScene {
    LightField field;
    SceneMeta meta;
    std::optional<DisparityMap> ground_truth;
};

SceneConfig read_scene_config(const std::filesystem::path& path);
void write_scene_config(const SceneConfig& cfg, const std::filesystem::path& path);

// Replaces "{NNN}" with the zero-padded (width 3) decimal index.
std::string view_filename(const std::string& pattern, int index);

// Loads the n_u * n_v views, row-major by (v, u): index = v * n_u + u.
// Every missing or mismatched view is reported with its index and filename.
LoadedScene load_lightfield(const SceneConfig& cfg);

// Writes views as 8-bit PNGs plus gt.pfm and scene.cfg into dir, creating it
// if needed. Returns the path of the written config.
std::filesystem::path save_scene(const LightField& lf, const SceneMeta& meta,
                                 const DisparityMap& gt, const std::filesystem::path& dir);

}  // namespace lfdepth
