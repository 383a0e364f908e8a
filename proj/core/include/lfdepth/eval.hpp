#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "lfdepth/disparity.hpp"
#include "lfdepth/epi.hpp"
#include "lfdepth/image.hpp"
#include "lfdepth/light_field.hpp"
#include "lfdepth/lsg.hpp"
#include "lfdepth/sweep.hpp"

namespace lfdepth {

// Mean squared difference over pixels valid in both maps. Throws
// std::invalid_argument on a dimension mismatch or when no pixel is jointly
// valid.
double mse(const DisparityMap& pred, const DisparityMap& gt);

// 10 * log10(max_i^2 / mse); an MSE of zero returns +infinity. max_i must be
// positive.
double psnr_from_mse(double mse_value, double max_i);
double psnr(const DisparityMap& pred, const DisparityMap& gt, double max_i);

// |pred - gt| where both are valid, NaN elsewhere (write_gray_png renders
// those black). Symmetric in its arguments.
Map2D error_map(const DisparityMap& pred, const DisparityMap& gt);

// Z = focal_length_px * baseline / d. Pixels with |d| < 1e-9 become invalid
// (depth at infinity). Negative disparities pass through as negative depths;
// their count is reported through negative_count when given so callers can
// warn.
DepthMap disparity_to_depth(const DisparityMap& d, const SceneMeta& meta,
                            std::size_t* negative_count = nullptr);

struct EvalRow {
    std::string algorithm;
    double psnr_db = 0.0;
    double mse = 0.0;
    double runtime_s = 0.0;
    std::string error_map_path;  // empty when map writing was disabled
};

struct EvalReport {
    std::string scene;
    double max_i = 0.0;  // disparity span used for PSNR
    std::vector<EvalRow> rows;
};

struct BenchParams {
    // Recognized ids: lsg, sweep, epi-level0, epi-final. Anything else is a
    // config_error.
    std::vector<std::string> algorithms{"lsg", "sweep", "epi-level0", "epi-final"};
    LsgParams lsg;
    SweepParams sweep;
    EpiParams epi;
    int timing_reps = 3;  // runtime reported as the median repetition
    // Error maps land here as <algorithm>_error.png scaled over [0, max_i];
    // empty disables writing.
    std::filesystem::path error_map_dir;
};

// Runs each requested estimator on the field, timing the estimation call
// only (median over timing_reps repetitions on a monotonic clock), and
// scores it against the ground truth with max_I = the scene disparity span.
// Rows run sequentially in the requested order so timings stay isolated.
// Throws config_error when gt is empty or an algorithm id is unknown.
EvalReport run_benchmark(const LightField& lf, const SceneMeta& meta, const DisparityMap& gt,
                         const BenchParams& params);

// CSV with a `# max_I=<value>` comment line followed by
// `scene,algorithm,psnr_db,mse,runtime_s,error_map` rows. Metrics print with
// enough digits that the PSNR/MSE identity re-checks to 1e-9 from the file.
void write_report_csv(const EvalReport& report, const std::filesystem::path& path);

struct DepthCountRow {
    int count = 0;
    double mse = 0.0;
    double runtime_s = 0.0;
};

// Plane sweeping at each hypothesis count over the scene range; every count
// must be at least 2 (config_error otherwise). Timing matches run_benchmark
// (median of timing_reps).
std::vector<DepthCountRow> depth_count_sweep(const LightField& lf, const SceneMeta& meta,
                                             const DisparityMap& gt, std::span<const int> counts,
                                             const SweepParams& base, int timing_reps = 3);

// CSV with header `count,mse,runtime_s`.
void write_depth_count_csv(std::span<const DepthCountRow> rows,
                           const std::filesystem::path& path);

}  // namespace lfdepth
