#include "lfdepth/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "lfdepth/cost_volume.hpp"
#include "lfdepth/errors.hpp"
#include "lfdepth/png_io.hpp"

namespace lfdepth {

double mse(const DisparityMap& pred, const DisparityMap& gt) {
    if (pred.width() != gt.width() || pred.height() != gt.height()) {
        throw std::invalid_argument("mse: dimension mismatch");
    }
    double sum = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < pred.height(); ++y) {
        for (int x = 0; x < pred.width(); ++x) {
            if (!pred.is_valid(y, x) || !gt.is_valid(y, x)) {
                continue;
            }
            const double d = pred.value(y, x) - gt.value(y, x);
            sum += d * d;
            ++n;
        }
    }
    if (n == 0) {
        throw std::invalid_argument("mse: no jointly valid pixel");
    }
    return sum / static_cast<double>(n);
}

double psnr_from_mse(double mse_value, double max_i) {
    if (!(max_i > 0.0)) {
        throw std::invalid_argument("psnr: max_i must be positive");
    }
    if (mse_value < 0.0) {
        throw std::invalid_argument("psnr: negative mse");
    }
    if (mse_value == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(max_i * max_i / mse_value);
}

double psnr(const DisparityMap& pred, const DisparityMap& gt, double max_i) {
    return psnr_from_mse(mse(pred, gt), max_i);
}

Map2D error_map(const DisparityMap& pred, const DisparityMap& gt) {
    if (pred.width() != gt.width() || pred.height() != gt.height()) {
        throw std::invalid_argument("error_map: dimension mismatch");
    }
    Map2D out(pred.width(), pred.height());
    for (int y = 0; y < pred.height(); ++y) {
        for (int x = 0; x < pred.width(); ++x) {
            if (pred.is_valid(y, x) && gt.is_valid(y, x)) {
                out.at(y, x) = std::fabs(pred.value(y, x) - gt.value(y, x));
            } else {
                out.at(y, x) = std::nan("");
            }
        }
    }
    return out;
}

DepthMap disparity_to_depth(const DisparityMap& d, const SceneMeta& meta,
                            std::size_t* negative_count) {
    meta.validate();
    const double fb = meta.focal_length_px * meta.baseline;
    DepthMap out(d.width(), d.height());
    std::size_t negatives = 0;
    for (int y = 0; y < d.height(); ++y) {
        for (int x = 0; x < d.width(); ++x) {
            if (!d.is_valid(y, x) || std::fabs(d.value(y, x)) < 1e-9) {
                continue;
            }
            const double z = fb / d.value(y, x);
            if (z < 0.0) {
                ++negatives;
            }
            out.set(y, x, z);
        }
    }
    if (negative_count) {
        *negative_count = negatives;
    }
    return out;
}

namespace {

template <typename F>
DisparityMap run_timed(int reps, double* runtime_s, F&& estimator) {
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(reps));
    DisparityMap result;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        result = estimator();
        const auto t1 = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    std::sort(times.begin(), times.end());
    *runtime_s = times[(times.size() - 1) / 2];
    return result;
}

}  // namespace

EvalReport run_benchmark(const LightField& lf, const SceneMeta& meta, const DisparityMap& gt,
                         const BenchParams& params) {
    meta.validate();
    if (gt.empty()) {
        throw config_error("run_benchmark: scene has no ground truth");
    }
    if (gt.width() != lf.width() || gt.height() != lf.height()) {
        throw config_error("run_benchmark: ground truth dimensions differ from the field");
    }
    if (params.timing_reps < 1) {
        throw config_error("run_benchmark: timing_reps must be at least 1");
    }
    if (params.algorithms.empty()) {
        throw config_error("run_benchmark: no algorithms requested");
    }

    EvalReport report;
    report.scene = meta.name;
    report.max_i = meta.disparity_span();

    for (const std::string& algo : params.algorithms) {
        double runtime = 0.0;
        DisparityMap estimate;
        if (algo == "lsg") {
            estimate = run_timed(params.timing_reps, &runtime,
                                 [&] { return estimate_lsg(lf, meta, params.lsg); });
        } else if (algo == "sweep") {
            estimate = run_timed(params.timing_reps, &runtime,
                                 [&] { return estimate_sweep(lf, meta, params.sweep); });
        } else if (algo == "epi-level0") {
            const std::vector<double> hyps = linspace_disparities(
                meta.disparity_min, meta.disparity_max, params.epi.n_disparities);
            estimate = run_timed(params.timing_reps, &runtime, [&] {
                return estimate_epi_level(lf, hyps, params.epi, 0).disparity;
            });
        } else if (algo == "epi-final") {
            estimate = run_timed(params.timing_reps, &runtime,
                                 [&] { return fine_to_coarse(lf, meta, params.epi); });
        } else {
            throw config_error("run_benchmark: unknown algorithm '" + algo + "'");
        }

        EvalRow row;
        row.algorithm = algo;
        row.mse = mse(estimate, gt);
        row.psnr_db = psnr_from_mse(row.mse, report.max_i);
        row.runtime_s = runtime;
        if (!params.error_map_dir.empty()) {
            const auto path = params.error_map_dir / (algo + "_error.png");
            write_gray_png(error_map(estimate, gt), path, 0.0, report.max_i);
            row.error_map_path = path.string();
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

void write_report_csv(const EvalReport& report, const std::filesystem::path& path) {
    FILE* f = std::fopen(path.string().c_str(), "w");
    if (!f) {
        throw io_error("cannot write report: " + path.string());
    }
    std::fprintf(f, "# max_I=%.12g\n", report.max_i);
    std::fprintf(f, "scene,algorithm,psnr_db,mse,runtime_s,error_map\n");
    for (const EvalRow& row : report.rows) {
        std::fprintf(f, "%s,%s,%.12g,%.12g,%.12g,%s\n", report.scene.c_str(),
                     row.algorithm.c_str(), row.psnr_db, row.mse, row.runtime_s,
                     row.error_map_path.c_str());
    }
    if (std::fclose(f) != 0) {
        throw io_error("write failed: " + path.string());
    }
}

std::vector<DepthCountRow> depth_count_sweep(const LightField& lf, const SceneMeta& meta,
                                             const DisparityMap& gt, std::span<const int> counts,
                                             const SweepParams& base, int timing_reps) {
    meta.validate();
    if (gt.empty()) {
        throw config_error("depth_count_sweep: scene has no ground truth");
    }
    if (timing_reps < 1) {
        throw config_error("depth_count_sweep: timing_reps must be at least 1");
    }
    for (int c : counts) {
        if (c < 2) {
            throw config_error("depth_count_sweep: counts must be at least 2");
        }
    }
    std::vector<DepthCountRow> rows;
    rows.reserve(counts.size());
    for (int c : counts) {
        SweepParams p = base;
        p.n_disparities = c;
        DepthCountRow row;
        row.count = c;
        const DisparityMap estimate =
            run_timed(timing_reps, &row.runtime_s, [&] { return estimate_sweep(lf, meta, p); });
        row.mse = mse(estimate, gt);
        rows.push_back(row);
    }
    return rows;
}

void write_depth_count_csv(std::span<const DepthCountRow> rows,
                           const std::filesystem::path& path) {
    FILE* f = std::fopen(path.string().c_str(), "w");
    if (!f) {
        throw io_error("cannot write csv: " + path.string());
    }
    std::fprintf(f, "count,mse,runtime_s\n");
    for (const DepthCountRow& row : rows) {
        std::fprintf(f, "%d,%.12g,%.12g\n", row.count, row.mse, row.runtime_s);
    }
    if (std::fclose(f) != 0) {
        throw io_error("write failed: " + path.string());
    }
}

}  // namespace lfdepth
