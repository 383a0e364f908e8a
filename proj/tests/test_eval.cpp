#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "lfdepth/errors.hpp"
#include "lfdepth/eval.hpp"
#include "lfdepth/synth.hpp"
#include "test_util.hpp"

using namespace lfdepth;

namespace {

struct BenchScene {
    LightField field;
    DisparityMap ground_truth;
    SceneMeta meta;
};

BenchScene bench_scene() {
    SynthSpec spec;
    spec.width = 24;
    spec.height = 24;
    spec.n_u = 3;
    spec.n_v = 3;
    spec.layers.push_back({0.4, 71});
    spec.meta.name = "bench";
    SynthScene scene = synth_scene(spec);
    return {std::move(scene.field), std::move(scene.ground_truth), spec.meta};
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        lines.push_back(line);
    }
    return lines;
}

}  // namespace

TEST_CASE("mse averages squared error over jointly valid pixels") {
    DisparityMap pred(2, 2);
    DisparityMap gt(2, 2);
    pred.set(0, 0, 1.0);
    gt.set(0, 0, 2.0);  // error 1
    pred.set(0, 1, 3.0);
    gt.set(0, 1, 0.0);  // error 3
    pred.set(1, 0, 5.0);
    gt.set_invalid(1, 0);  // not counted
    pred.set_invalid(1, 1);
    gt.set(1, 1, 7.0);  // not counted
    CHECK(mse(pred, gt) == 5.0);  // (1 + 9) / 2
}

TEST_CASE("mse rejects mismatched or disjoint maps") {
    CHECK_THROWS_AS(mse(DisparityMap(3, 3), DisparityMap(4, 3)), std::invalid_argument);
    DisparityMap pred(2, 1);
    DisparityMap gt(2, 1);
    pred.set(0, 0, 1.0);
    gt.set(0, 1, 1.0);  // valid sets do not overlap
    CHECK_THROWS_AS(mse(pred, gt), std::invalid_argument);
}

TEST_CASE("psnr follows the decibel identity") {
    CHECK(psnr_from_mse(0.1, 4.0) ==
          doctest::Approx(10.0 * std::log10(160.0)).epsilon(1e-12));
    CHECK(psnr_from_mse(16.0, 4.0) == 0.0);  // mse equal to max_I^2
    CHECK(psnr_from_mse(0.0, 4.0) == std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(psnr_from_mse(0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(psnr_from_mse(0.1, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(psnr_from_mse(-0.1, 1.0), std::invalid_argument);
}

TEST_CASE("a perfect prediction has infinite psnr") {
    DisparityMap d(3, 3);
    for (int y = 0; y < 3; ++y) {
        for (int x = 0; x < 3; ++x) {
            d.set(y, x, 0.25 * x - 0.5 * y);
        }
    }
    CHECK(psnr(d, d, 4.0) == std::numeric_limits<double>::infinity());
}

TEST_CASE("the error map is absolute and NaN outside the joint support") {
    DisparityMap pred(2, 1);
    DisparityMap gt(2, 1);
    pred.set(0, 0, 1.5);
    gt.set(0, 0, -0.5);
    pred.set_invalid(0, 1);
    gt.set(0, 1, 1.0);
    const Map2D err = error_map(pred, gt);
    CHECK(err.at(0, 0) == 2.0);
    CHECK(std::isnan(err.at(0, 1)));
    CHECK_THROWS_AS(error_map(pred, DisparityMap(3, 1)), std::invalid_argument);
}

TEST_CASE("depth conversion inverts disparity against focal length and baseline") {
    SceneMeta meta;  // f = 100 px, b = 0.5
    DisparityMap d(4, 1);
    d.set(0, 0, 2.0);
    d.set(0, 1, 0.0);
    d.set(0, 2, -1.0);
    d.set(0, 3, 1e-10);
    std::size_t negatives = 99;
    const DepthMap z = disparity_to_depth(d, meta, &negatives);
    CHECK(z.value(0, 0) == 25.0);
    CHECK(!z.is_valid(0, 1));  // zero disparity has no finite depth
    CHECK(z.value(0, 2) == -50.0);
    CHECK(!z.is_valid(0, 3));  // below the zero threshold
    CHECK(negatives == 1);
    CHECK(disparity_to_depth(d, meta, nullptr).value(0, 0) == 25.0);
}

TEST_CASE("the benchmark runs every requested estimator in order") {
    const BenchScene scene = bench_scene();
    BenchParams params;
    params.timing_reps = 1;
    const EvalReport report =
        run_benchmark(scene.field, scene.meta, scene.ground_truth, params);
    CHECK(report.scene == "bench");
    CHECK(report.max_i == 4.0);  // disparity span of the default range
    REQUIRE(report.rows.size() == 4);
    CHECK(report.rows[0].algorithm == "lsg");
    CHECK(report.rows[1].algorithm == "sweep");
    CHECK(report.rows[2].algorithm == "epi-level0");
    CHECK(report.rows[3].algorithm == "epi-final");
    for (const EvalRow& row : report.rows) {
        CHECK(std::isfinite(row.mse));
        CHECK(row.mse >= 0.0);
        CHECK(row.psnr_db > 0.0);
        CHECK(row.runtime_s >= 0.0);
        CHECK(row.error_map_path.empty());
    }
}

TEST_CASE("benchmark metrics are deterministic across runs") {
    const BenchScene scene = bench_scene();
    BenchParams params;
    params.timing_reps = 1;
    params.algorithms = {"sweep", "lsg"};
    const EvalReport a = run_benchmark(scene.field, scene.meta, scene.ground_truth, params);
    const EvalReport b = run_benchmark(scene.field, scene.meta, scene.ground_truth, params);
    REQUIRE(a.rows.size() == 2);
    CHECK(a.rows[0].mse == b.rows[0].mse);
    CHECK(a.rows[0].psnr_db == b.rows[0].psnr_db);
    CHECK(a.rows[1].mse == b.rows[1].mse);
}

TEST_CASE("the benchmark writes one error image per estimator on request") {
    const BenchScene scene = bench_scene();
    const auto dir = testutil::make_temp_dir("eval");
    BenchParams params;
    params.timing_reps = 1;
    params.algorithms = {"sweep"};
    params.error_map_dir = dir;
    const EvalReport report =
        run_benchmark(scene.field, scene.meta, scene.ground_truth, params);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].error_map_path == (dir / "sweep_error.png").string());
    CHECK(std::filesystem::exists(dir / "sweep_error.png"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("the benchmark rejects malformed requests") {
    const BenchScene scene = bench_scene();
    BenchParams params;
    params.timing_reps = 1;

    BenchParams unknown = params;
    unknown.algorithms = {"bogus"};
    try {
        run_benchmark(scene.field, scene.meta, scene.ground_truth, unknown);
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("bogus") != std::string::npos);
    }

    BenchParams none = params;
    none.algorithms.clear();
    CHECK_THROWS_AS(run_benchmark(scene.field, scene.meta, scene.ground_truth, none),
                    config_error);

    BenchParams reps = params;
    reps.timing_reps = 0;
    CHECK_THROWS_AS(run_benchmark(scene.field, scene.meta, scene.ground_truth, reps),
                    config_error);

    CHECK_THROWS_AS(run_benchmark(scene.field, scene.meta, DisparityMap{}, params),
                    config_error);
    CHECK_THROWS_AS(run_benchmark(scene.field, scene.meta, DisparityMap(5, 5), params),
                    config_error);
}

TEST_CASE("report csv round trips its numbers") {
    EvalReport report;
    report.scene = "toy";
    report.max_i = 4.0;
    EvalRow row;
    row.algorithm = "lsg";
    row.psnr_db = 22.5;
    row.mse = 0.03125;
    row.runtime_s = 1.5;
    report.rows.push_back(row);
    row.algorithm = "sweep";
    row.psnr_db = 18.0;
    row.mse = 0.0625;
    row.runtime_s = 0.25;
    row.error_map_path = "maps/sweep_error.png";
    report.rows.push_back(row);

    const auto dir = testutil::make_temp_dir("eval");
    const auto path = dir / "report.csv";
    write_report_csv(report, path);
    const auto lines = read_lines(path);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "# max_I=4");
    CHECK(lines[1] == "scene,algorithm,psnr_db,mse,runtime_s,error_map");
    CHECK(lines[2] == "toy,lsg,22.5,0.03125,1.5,");
    CHECK(lines[3] == "toy,sweep,18,0.0625,0.25,maps/sweep_error.png");
    std::filesystem::remove_all(dir);
}

TEST_CASE("the depth-count sweep reuses the plane-sweep estimator") {
    const BenchScene scene = bench_scene();
    const std::vector<int> counts{5, 11};
    const auto rows = depth_count_sweep(scene.field, scene.meta, scene.ground_truth, counts,
                                        SweepParams{}, 1);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].count == 5);
    CHECK(rows[1].count == 11);

    BenchParams params;
    params.timing_reps = 1;
    params.algorithms = {"sweep"};
    const EvalReport report =
        run_benchmark(scene.field, scene.meta, scene.ground_truth, params);
    CHECK(rows[1].mse == report.rows[0].mse);  // same estimator, same count
}

TEST_CASE("the depth-count sweep validates its inputs") {
    const BenchScene scene = bench_scene();
    const std::vector<int> bad{1};
    CHECK_THROWS_AS(depth_count_sweep(scene.field, scene.meta, scene.ground_truth, bad,
                                      SweepParams{}, 1),
                    config_error);
    const std::vector<int> counts{5};
    CHECK_THROWS_AS(depth_count_sweep(scene.field, scene.meta, scene.ground_truth, counts,
                                      SweepParams{}, 0),
                    config_error);
    CHECK_THROWS_AS(depth_count_sweep(scene.field, scene.meta, DisparityMap{}, counts,
                                      SweepParams{}, 1),
                    config_error);
}

TEST_CASE("depth-count csv lists one row per count") {
    std::vector<DepthCountRow> rows;
    rows.push_back({5, 0.5, 0.125});
    rows.push_back({21, 0.03125, 2.0});
    const auto dir = testutil::make_temp_dir("eval");
    const auto path = dir / "depth.csv";
    write_depth_count_csv(rows, path);
    const auto lines = read_lines(path);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "count,mse,runtime_s");
    CHECK(lines[1] == "5,0.5,0.125");
    CHECK(lines[2] == "21,0.03125,2");
    std::filesystem::remove_all(dir);
}
