#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "lfdepth/eval.hpp"
#include "lfdepth/pfm.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cli = testutil::cli_path();
    REQUIRE(!cli.empty());
    const int rc = std::system((cli + " " + args).c_str());
    REQUIRE(rc != -1);
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Small two-layer scene shared by the workflow tests.
fs::path make_scene(const fs::path& dir) {
    const fs::path scene_dir = dir / "scene";
    const int rc = run_cli("synth --layers 0.8,-0.4 --size 32 --views 3 --seed 5 --out " +
                           scene_dir.string());
    REQUIRE(rc == 0);
    return scene_dir / "scene.cfg";
}

}  // namespace

TEST_CASE("the version flag reports success") {
    CHECK(run_cli("--version > /dev/null") == 0);
}

TEST_CASE("a missing subcommand is a usage error") {
    CHECK(run_cli("2> /dev/null") == 2);
}

TEST_CASE("synthesis writes a loadable scene") {
    const auto dir = testutil::make_temp_dir("cli");
    const fs::path cfg = make_scene(dir);
    CHECK(fs::exists(cfg));
    CHECK(fs::exists(cfg.parent_path() / "gt.pfm"));
    CHECK(fs::exists(cfg.parent_path() / "manifest.cfg"));
    for (int i = 0; i < 9; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "input_Cam%03d.png", i);
        CHECK(fs::exists(cfg.parent_path() / name));
    }
    const lfdepth::DisparityMap gt =
        lfdepth::read_pfm_disparity(cfg.parent_path() / "gt.pfm");
    CHECK(gt.width() == 32);
    CHECK(gt.height() == 32);
}

TEST_CASE("synthesis is reproducible for a fixed seed") {
    const auto dir = testutil::make_temp_dir("cli");
    const std::string args = "synth --layers 0.5 --size 16 --views 3 --seed 9 --out ";
    REQUIRE(run_cli(args + (dir / "a").string()) == 0);
    REQUIRE(run_cli(args + (dir / "b").string()) == 0);
    CHECK(slurp(dir / "a" / "gt.pfm") == slurp(dir / "b" / "gt.pfm"));
    CHECK(slurp(dir / "a" / "input_Cam004.png") == slurp(dir / "b" / "input_Cam004.png"));
}

TEST_CASE("estimation produces disparity artifacts and a manifest") {
    const auto dir = testutil::make_temp_dir("cli");
    const fs::path cfg = make_scene(dir);
    const fs::path out = dir / "est";
    REQUIRE(run_cli("estimate --scene " + cfg.string() + " --algo sweep --refine median --out " +
                    out.string()) == 0);
    CHECK(fs::exists(out / "disparity.png"));
    const lfdepth::DisparityMap d = lfdepth::read_pfm_disparity(out / "disparity.pfm");
    CHECK(d.width() == 32);
    CHECK(d.valid_count() == 32 * 32);
    const std::string manifest = slurp(out / "manifest.cfg");
    CHECK(manifest.find("command=estimate\n") != std::string::npos);
    CHECK(manifest.find("algo=sweep\n") != std::string::npos);
    CHECK(manifest.find("refine=median\n") != std::string::npos);
}

TEST_CASE("estimator parameters are echoed into the manifest") {
    const auto dir = testutil::make_temp_dir("cli");
    const fs::path cfg = make_scene(dir);
    const fs::path out = dir / "est";
    REQUIRE(run_cli("estimate --scene " + cfg.string() +
                    " --algo epi --kernel paper-literal --n-disparities 7 --out " +
                    out.string()) == 0);
    const std::string manifest = slurp(out / "manifest.cfg");
    CHECK(manifest.find("kernel=paper-literal\n") != std::string::npos);
    CHECK(manifest.find("n_disparities=7\n") != std::string::npos);
}

TEST_CASE("estimate and evaluate round trip through PFM files") {
    const auto dir = testutil::make_temp_dir("cli");
    const fs::path cfg = make_scene(dir);
    const fs::path out = dir / "est";
    REQUIRE(run_cli("estimate --scene " + cfg.string() + " --algo sweep --out " +
                    out.string()) == 0);

    const fs::path ev = dir / "eval";
    const fs::path log = dir / "eval.log";
    REQUIRE(run_cli("evaluate --pred " + (out / "disparity.pfm").string() + " --gt " +
                    (cfg.parent_path() / "gt.pfm").string() + " --max-i 4 --out " + ev.string() +
                    " > " + log.string()) == 0);
    CHECK(fs::exists(ev / "error.png"));
    CHECK(fs::exists(ev / "manifest.cfg"));

    const std::string text = slurp(log);
    const auto mse_pos = text.find("mse=");
    const auto psnr_pos = text.find("psnr_db=");
    REQUIRE(mse_pos != std::string::npos);
    REQUIRE(psnr_pos != std::string::npos);
    const double mse_printed = std::stod(text.substr(mse_pos + 4));

    const lfdepth::DisparityMap pred = lfdepth::read_pfm_disparity(out / "disparity.pfm");
    const lfdepth::DisparityMap gt =
        lfdepth::read_pfm_disparity(cfg.parent_path() / "gt.pfm");
    CHECK(mse_printed == doctest::Approx(lfdepth::mse(pred, gt)).epsilon(1e-9));
}

TEST_CASE("comparison reports stable metrics and error maps") {
    const auto dir = testutil::make_temp_dir("cli");
    const fs::path cfg = make_scene(dir);
    auto metrics = [&](const fs::path& out) {
        REQUIRE(run_cli("compare --scene " + cfg.string() +
                        " --algos sweep,lsg --reps 1 --out " + out.string()) == 0);
        std::ifstream in(out / "report.csv");
        REQUIRE(in.good());
        std::string line;
        std::getline(in, line);  // max_I comment
        std::getline(in, line);  // header
        std::vector<std::string> rows;
        while (std::getline(in, line)) {
            // scene,algorithm,psnr,mse stay fixed across runs; runtime varies
            rows.push_back(line.substr(0, line.rfind(',', line.rfind(',') - 1)));
        }
        return rows;
    };
    const auto a = metrics(dir / "cmp_a");
    const auto b = metrics(dir / "cmp_b");
    REQUIRE(a.size() == 2);
    CHECK(a == b);
    CHECK(fs::exists(dir / "cmp_a" / "sweep_error.png"));
    CHECK(fs::exists(dir / "cmp_a" / "lsg_error.png"));
    CHECK(fs::exists(dir / "cmp_a" / "manifest.cfg"));
}

TEST_CASE("the hypothesis-count sweep writes its csv") {
    const auto dir = testutil::make_temp_dir("cli");
    const fs::path cfg = make_scene(dir);
    const fs::path out = dir / "depths";
    REQUIRE(run_cli("sweep-depths --scene " + cfg.string() + " --counts 5,11 --reps 1 --out " +
                    out.string()) == 0);
    const std::string csv = slurp(out / "depth_sweep.csv");
    CHECK(csv.rfind("count,mse,runtime_s\n", 0) == 0);
    CHECK(csv.find("\n5,") != std::string::npos);
    CHECK(csv.find("\n11,") != std::string::npos);
}

TEST_CASE("configuration mistakes exit with code 2") {
    const auto dir = testutil::make_temp_dir("cli");
    const fs::path cfg = make_scene(dir);
    const std::string quiet = " 2> /dev/null";
    CHECK(run_cli("estimate --scene " + cfg.string() + " --algo bogus --out " +
                  (dir / "x").string() + quiet) == 2);
    CHECK(run_cli("estimate --scene " + cfg.string() + " --algo sweep --refine bogus --out " +
                  (dir / "x").string() + quiet) == 2);
    CHECK(run_cli("sweep-depths --scene " + cfg.string() + " --counts 1 --out " +
                  (dir / "x").string() + quiet) == 2);
    CHECK(run_cli("synth --layers 9.0 --out " + (dir / "x").string() + quiet) == 2);
    CHECK(run_cli("synth --layers 0.5,abc --out " + (dir / "x").string() + quiet) == 2);
    CHECK(run_cli("estimate --scene " + cfg.string() + " --out " + (dir / "x").string() +
                  quiet) == 2);  // missing required --algo
}

TEST_CASE("missing files exit with code 3") {
    const auto dir = testutil::make_temp_dir("cli");
    const std::string quiet = " 2> /dev/null";
    CHECK(run_cli("estimate --scene " + (dir / "nope.cfg").string() + " --algo sweep --out " +
                  (dir / "x").string() + quiet) == 3);
    CHECK(run_cli("evaluate --pred " + (dir / "a.pfm").string() + " --gt " +
                  (dir / "b.pfm").string() + quiet) == 3);
}
