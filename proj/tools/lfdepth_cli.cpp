// Command-line frontend: scene ingestion, estimation, refinement, synthesis
// and evaluation wired into reproducible runs. Every successful run writes a
// key=value manifest echoing the effective parameters.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "lfdepth/epi.hpp"
#include "lfdepth/errors.hpp"
#include "lfdepth/eval.hpp"
#include "lfdepth/lsg.hpp"
#include "lfdepth/parallel.hpp"
#include "lfdepth/pfm.hpp"
#include "lfdepth/png_io.hpp"
#include "lfdepth/refine.hpp"
#include "lfdepth/scene_io.hpp"
#include "lfdepth/sweep.hpp"
#include "lfdepth/synth.hpp"

#ifndef LFDEPTH_VERSION
#define LFDEPTH_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace lfdepth;

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Same key=value dialect as the scene config, so one parser serves the whole
// toolchain.
class Manifest {
public:
    void add(const std::string& key, const std::string& value) {
        entries_.emplace_back(key, value);
    }
    void add(const std::string& key, const char* value) { entries_.emplace_back(key, value); }
    void add(const std::string& key, double value) { add(key, format_double(value)); }
    void add(const std::string& key, int value) { add(key, std::to_string(value)); }
    void add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }

    void write(const fs::path& path) const {
        FILE* f = std::fopen(path.string().c_str(), "w");
        if (!f) {
            throw io_error("cannot write manifest: " + path.string());
        }
        for (const auto& [k, v] : entries_) {
            std::fprintf(f, "%s=%s\n", k.c_str(), v.c_str());
        }
        if (std::fclose(f) != 0) {
            throw io_error("write failed: " + path.string());
        }
    }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string tok =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (tok.empty()) {
            throw config_error(std::string(what) + ": empty entry in '" + text + "'");
        }
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) {
                throw std::invalid_argument(tok);
            }
        } catch (const std::exception&) {
            throw config_error(std::string(what) + ": bad number '" + tok + "'");
        }
        if (comma == std::string::npos) {
            break;
        }
        pos = comma + 1;
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    for (double v : parse_double_list(text, what)) {
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v) {
            throw config_error(std::string(what) + ": expected integers in '" + text + "'");
        }
        out.push_back(i);
    }
    return out;
}

KernelKind parse_kernel(const std::string& name) {
    if (name == "triangular") {
        return KernelKind::triangular;
    }
    if (name == "paper-literal") {
        return KernelKind::paper_literal;
    }
    throw config_error("unknown kernel '" + name + "'");
}

Map2D disparity_values(const DisparityMap& d) {
    Map2D out(d.width(), d.height());
    out.data() = d.values();  // NaN at invalid pixels renders black
    return out;
}

// Shared estimator / refinement knobs. Each subcommand registers the subset
// it honors; the manifest echoes whatever applied.
struct EstimatorOpts {
    int threads = 0;
    int n_disparities = 11;
    int box_radius = 1;
    bool exclude_clamped = false;
    int window_radius = 1;
    double denom_epsilon = 1e-8;
    std::string kernel = "triangular";
    double bandwidth = 0.1;
    double edge_threshold_level0 = 0.05;
    double edge_threshold_coarse = 0.1;
    double depth_conf_epsilon = 0.03;
    int min_pyramid_extent = 10;
    double lambda = 0.1;
    double charbonnier_eps = 1e-3;
    double step_size = 0.5;
    int max_iters = 100;
    int n_levels = 3;
    double sigma_s = 2.0;
    double sigma_r = 0.1;

    LsgParams lsg() const {
        LsgParams p;
        p.window_radius = window_radius;
        p.denom_epsilon = denom_epsilon;
        return p;
    }
    SweepParams sweep() const {
        SweepParams p;
        p.n_disparities = n_disparities;
        p.box_radius = box_radius;
        p.exclude_clamped = exclude_clamped;
        return p;
    }
    EpiParams epi() const {
        EpiParams p;
        p.n_disparities = n_disparities;
        p.kernel = parse_kernel(kernel);
        p.bandwidth = bandwidth;
        p.edge_threshold_level0 = edge_threshold_level0;
        p.edge_threshold_coarse = edge_threshold_coarse;
        p.depth_conf_epsilon = depth_conf_epsilon;
        p.min_pyramid_extent = min_pyramid_extent;
        return p;
    }
    EnergyParams energy() const {
        EnergyParams p;
        p.lambda = lambda;
        p.charbonnier_eps = charbonnier_eps;
        p.step_size = step_size;
        p.max_iters = max_iters;
        p.n_levels = n_levels;
        p.sigma_s = sigma_s;
        p.sigma_r = sigma_r;
        return p;
    }

    void add_common(CLI::App* cmd) {
        cmd->add_option("--threads", threads, "worker threads, 0 = hardware default");
    }
    void add_estimators(CLI::App* cmd) {
        cmd->add_option("--n-disparities", n_disparities, "hypothesis count (sweep, epi)");
        cmd->add_option("--box-radius", box_radius, "cost aggregation radius (sweep)");
        cmd->add_flag("--exclude-clamped", exclude_clamped,
                      "drop out-of-frame sheared samples (sweep)");
        cmd->add_option("--window-radius", window_radius, "gradient window radius (lsg)");
        cmd->add_option("--denom-epsilon", denom_epsilon, "denominator guard (lsg)");
        cmd->add_option("--kernel", kernel, "density kernel: triangular | paper-literal (epi)");
        cmd->add_option("--bandwidth", bandwidth, "kernel bandwidth h (epi)");
        cmd->add_option("--edge-threshold", edge_threshold_level0,
                        "edge confidence gate at full resolution (epi)");
        cmd->add_option("--edge-threshold-coarse", edge_threshold_coarse,
                        "edge confidence gate at coarser levels (epi)");
        cmd->add_option("--conf-epsilon", depth_conf_epsilon,
                        "depth confidence validity threshold (epi)");
        cmd->add_option("--min-extent", min_pyramid_extent,
                        "stop the pyramid below this spatial extent (epi)");
    }
    void add_refine(CLI::App* cmd) {
        cmd->add_option("--lambda", lambda, "smoothness weight (energy)");
        cmd->add_option("--charbonnier-eps", charbonnier_eps, "penalty epsilon (energy)");
        cmd->add_option("--step-size", step_size, "initial gradient step (energy)");
        cmd->add_option("--max-iters", max_iters, "accepted steps per level (energy)");
        cmd->add_option("--levels", n_levels, "pyramid levels (energy)");
        cmd->add_option("--sigma-s", sigma_s, "bilateral spatial sigma");
        cmd->add_option("--sigma-r", sigma_r, "bilateral range sigma");
    }

    void echo(Manifest& m) const {
        m.add("threads", num_threads());
        m.add("n_disparities", n_disparities);
        m.add("box_radius", box_radius);
        m.add("exclude_clamped", exclude_clamped ? 1 : 0);
        m.add("window_radius", window_radius);
        m.add("denom_epsilon", denom_epsilon);
        m.add("kernel", kernel);
        m.add("bandwidth", bandwidth);
        m.add("edge_threshold_level0", edge_threshold_level0);
        m.add("edge_threshold_coarse", edge_threshold_coarse);
        m.add("depth_conf_epsilon", depth_conf_epsilon);
        m.add("min_pyramid_extent", min_pyramid_extent);
        m.add("lambda", lambda);
        m.add("charbonnier_eps", charbonnier_eps);
        m.add("step_size", step_size);
        m.add("max_iters", max_iters);
        m.add("n_levels", n_levels);
        m.add("sigma_s", sigma_s);
        m.add("sigma_r", sigma_r);
    }
};

DisparityMap run_estimator(const std::string& algo, const LoadedScene& scene,
                           const EstimatorOpts& opts) {
    if (algo == "lsg") {
        return estimate_lsg(scene.field, scene.meta, opts.lsg());
    }
    if (algo == "sweep") {
        return estimate_sweep(scene.field, scene.meta, opts.sweep());
    }
    if (algo == "epi") {
        return fine_to_coarse(scene.field, scene.meta, opts.epi());
    }
    throw config_error("unknown algorithm '" + algo + "' (expected lsg | sweep | epi)");
}

int cmd_estimate(const std::string& scene_path, const std::string& algo,
                 const std::string& refine, const fs::path& out_dir, EstimatorOpts& opts) {
    set_num_threads(opts.threads);
    const SceneConfig cfg = read_scene_config(scene_path);
    const LoadedScene scene = load_lightfield(cfg);

    DisparityMap disparity = run_estimator(algo, scene, opts);
    if (refine == "median") {
        disparity = median_filter_3x3(disparity);
    } else if (refine == "bilateral") {
        disparity = bilateral_filter(disparity, center_view(scene.field), opts.sigma_s,
                                     opts.sigma_r);
    } else if (refine == "energy") {
        disparity = energy_refine(disparity, scene.field, opts.energy());
    } else if (refine == "fuse") {
        // Multi-estimator fusion: blend the chosen estimator with the other
        // two, equal weights.
        std::vector<DisparityMap> maps;
        maps.push_back(std::move(disparity));
        for (const char* other : {"lsg", "sweep", "epi"}) {
            if (algo != other) {
                maps.push_back(run_estimator(other, scene, opts));
            }
        }
        disparity = fuse_weighted(maps, FusionWeights{});
    } else if (!refine.empty() && refine != "none") {
        throw config_error("unknown refine stage '" + refine +
                           "' (expected median | bilateral | energy | fuse)");
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    write_pfm_disparity(disparity, out_dir / "disparity.pfm");
    write_gray_png(disparity_values(disparity), out_dir / "disparity.png",
                   scene.meta.disparity_min, scene.meta.disparity_max);

    Manifest m;
    m.add("command", "estimate");
    m.add("version", LFDEPTH_VERSION);
    m.add("scene", scene_path);
    m.add("scene_name", scene.meta.name);
    m.add("algo", algo);
    m.add("refine", refine.empty() ? "none" : refine);
    opts.echo(m);
    m.add("out", out_dir.string());
    m.write(out_dir / "manifest.cfg");
    return 0;
}

int cmd_compare(const std::string& scene_path, const std::string& algos_text, int reps,
                const fs::path& out_dir, EstimatorOpts& opts) {
    set_num_threads(opts.threads);
    const SceneConfig cfg = read_scene_config(scene_path);
    const LoadedScene scene = load_lightfield(cfg);
    if (!scene.ground_truth) {
        throw config_error("compare needs a scene with ground truth");
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);

    BenchParams bench;
    bench.algorithms.clear();
    std::size_t pos = 0;
    while (pos <= algos_text.size()) {
        const std::size_t comma = algos_text.find(',', pos);
        bench.algorithms.push_back(algos_text.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (comma == std::string::npos) {
            break;
        }
        pos = comma + 1;
    }
    bench.lsg = opts.lsg();
    bench.sweep = opts.sweep();
    bench.epi = opts.epi();
    bench.timing_reps = reps;
    bench.error_map_dir = out_dir;

    const EvalReport report =
        run_benchmark(scene.field, scene.meta, *scene.ground_truth, bench);
    write_report_csv(report, out_dir / "report.csv");

    Manifest m;
    m.add("command", "compare");
    m.add("version", LFDEPTH_VERSION);
    m.add("scene", scene_path);
    m.add("scene_name", scene.meta.name);
    m.add("algos", algos_text);
    m.add("reps", reps);
    m.add("max_i", report.max_i);
    opts.echo(m);
    m.add("out", out_dir.string());
    m.write(out_dir / "manifest.cfg");
    return 0;
}

struct SynthOpts {
    std::string layers_text;
    std::string rects_text;
    int size = 64;
    int views = 9;
    int channels = 1;
    std::uint64_t seed = 1;
    double noise_sigma = 0.0;
    double disp_min = -2.0;
    double disp_max = 2.0;
    double focal = 100.0;
    double baseline = 0.5;
    double base = 0.5;
    double amplitude = 0.7;
    double lattice = 8.0;
    int octaves = 3;
    std::string name = "synth";
};

int cmd_synth(const SynthOpts& so, int threads, const fs::path& out_dir) {
    set_num_threads(threads);
    const std::vector<double> disparities = parse_double_list(so.layers_text, "--layers");

    std::vector<Rect> rects;
    if (!so.rects_text.empty()) {
        std::size_t pos = 0;
        while (pos <= so.rects_text.size()) {
            const std::size_t sep = so.rects_text.find(';', pos);
            const std::string group = so.rects_text.substr(
                pos, sep == std::string::npos ? std::string::npos : sep - pos);
            const std::vector<int> v = parse_int_list(group, "--rects");
            if (v.size() != 4) {
                throw config_error("--rects: expected x0,y0,x1,y1 groups");
            }
            rects.push_back({v[0], v[1], v[2], v[3]});
            if (sep == std::string::npos) {
                break;
            }
            pos = sep + 1;
        }
        if (rects.size() != disparities.size() - 1) {
            throw config_error("--rects: need exactly one rectangle per non-backmost layer");
        }
    }

    SynthSpec spec;
    spec.width = so.size;
    spec.height = so.size;
    spec.n_u = so.views;
    spec.n_v = so.views;
    spec.channels = so.channels;
    spec.noise_sigma = so.noise_sigma;
    spec.noise_seed = so.seed + 1000;
    spec.meta.name = so.name;
    spec.meta.focal_length_px = so.focal;
    spec.meta.baseline = so.baseline;
    spec.meta.disparity_min = so.disp_min;
    spec.meta.disparity_max = so.disp_max;
    for (std::size_t i = 0; i < disparities.size(); ++i) {
        SynthLayer layer;
        layer.disparity = disparities[i];
        layer.seed = so.seed + i;
        layer.base = so.base;
        layer.amplitude = so.amplitude;
        layer.lattice = so.lattice;
        layer.octaves = so.octaves;
        if (i + 1 < disparities.size()) {
            // Front layers default to a centered half-size window.
            layer.region = rects.empty()
                               ? Rect{so.size / 4, so.size / 4, 3 * so.size / 4, 3 * so.size / 4}
                               : rects[i];
        }
        spec.layers.push_back(layer);
    }
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }

    const SynthScene scene = synth_scene(spec);
    save_scene(scene.field, spec.meta, scene.ground_truth, out_dir);

    Manifest m;
    m.add("command", "synth");
    m.add("version", LFDEPTH_VERSION);
    m.add("name", so.name);
    m.add("layers", so.layers_text);
    m.add("rects", so.rects_text.empty() ? "default" : so.rects_text);
    m.add("size", so.size);
    m.add("views", so.views);
    m.add("channels", so.channels);
    m.add("seed", so.seed);
    m.add("noise_sigma", so.noise_sigma);
    m.add("noise_seed", spec.noise_seed);
    m.add("disp_min", so.disp_min);
    m.add("disp_max", so.disp_max);
    m.add("focal_length_px", so.focal);
    m.add("baseline", so.baseline);
    m.add("base", so.base);
    m.add("amplitude", so.amplitude);
    m.add("lattice", so.lattice);
    m.add("octaves", so.octaves);
    m.add("out", out_dir.string());
    m.write(out_dir / "manifest.cfg");
    return 0;
}

int cmd_sweep_depths(const std::string& scene_path, const std::string& counts_text, int reps,
                     const fs::path& out_dir, EstimatorOpts& opts) {
    set_num_threads(opts.threads);
    const SceneConfig cfg = read_scene_config(scene_path);
    const LoadedScene scene = load_lightfield(cfg);
    if (!scene.ground_truth) {
        throw config_error("sweep-depths needs a scene with ground truth");
    }
    const std::vector<int> counts = parse_int_list(counts_text, "--counts");

    const std::vector<DepthCountRow> rows = depth_count_sweep(
        scene.field, scene.meta, *scene.ground_truth, counts, opts.sweep(), reps);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    write_depth_count_csv(rows, out_dir / "depth_sweep.csv");

    Manifest m;
    m.add("command", "sweep-depths");
    m.add("version", LFDEPTH_VERSION);
    m.add("scene", scene_path);
    m.add("scene_name", scene.meta.name);
    m.add("counts", counts_text);
    m.add("reps", reps);
    m.add("box_radius", opts.box_radius);
    m.add("exclude_clamped", opts.exclude_clamped ? 1 : 0);
    m.add("threads", num_threads());
    m.add("out", out_dir.string());
    m.write(out_dir / "manifest.cfg");
    return 0;
}

int cmd_evaluate(const std::string& pred_path, const std::string& gt_path, double max_i,
                 const std::string& out_dir_text) {
    const DisparityMap pred = read_pfm_disparity(pred_path);
    const DisparityMap gt = read_pfm_disparity(gt_path);
    double mse_value;
    double psnr_value;
    try {
        mse_value = mse(pred, gt);
        psnr_value = psnr_from_mse(mse_value, max_i);
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
    std::printf("mse=%s\n", format_double(mse_value).c_str());
    std::printf("psnr_db=%s\n", format_double(psnr_value).c_str());

    if (!out_dir_text.empty()) {
        const fs::path out_dir(out_dir_text);
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        write_gray_png(error_map(pred, gt), out_dir / "error.png", 0.0, max_i);
        Manifest m;
        m.add("command", "evaluate");
        m.add("version", LFDEPTH_VERSION);
        m.add("pred", pred_path);
        m.add("gt", gt_path);
        m.add("max_i", max_i);
        m.add("mse", mse_value);
        m.add("psnr_db", psnr_value);
        m.add("out", out_dir_text);
        m.write(out_dir / "manifest.cfg");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"light field depth estimation toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", LFDEPTH_VERSION);

    EstimatorOpts opts;

    auto* estimate = app.add_subcommand("estimate", "run one estimator on a scene");
    std::string est_scene;
    std::string est_algo;
    std::string est_refine;
    std::string est_out;
    estimate->add_option("--scene", est_scene, "scene config path")->required();
    estimate->add_option("--algo", est_algo, "lsg | sweep | epi")->required();
    estimate->add_option("--refine", est_refine, "median | bilateral | energy | fuse");
    estimate->add_option("--out", est_out, "output directory")->required();
    opts.add_common(estimate);
    opts.add_estimators(estimate);
    opts.add_refine(estimate);

    auto* compare = app.add_subcommand("compare", "benchmark estimators against ground truth");
    std::string cmp_scene;
    std::string cmp_algos = "lsg,sweep,epi-level0,epi-final";
    std::string cmp_out;
    int cmp_reps = 3;
    compare->add_option("--scene", cmp_scene, "scene config path")->required();
    compare->add_option("--algos", cmp_algos, "comma list of lsg | sweep | epi-level0 | epi-final")
        ->capture_default_str();
    compare->add_option("--reps", cmp_reps, "timing repetitions (median reported)");
    compare->add_option("--out", cmp_out, "output directory")->required();
    opts.add_common(compare);
    opts.add_estimators(compare);

    auto* synth = app.add_subcommand("synth", "generate a synthetic scene with ground truth");
    SynthOpts so;
    int synth_threads = 0;
    std::string synth_out;
    synth->add_option("--layers", so.layers_text, "comma list of layer disparities, front first")
        ->required();
    synth->add_option("--rects", so.rects_text,
                      "x0,y0,x1,y1 groups separated by ';', one per non-backmost layer");
    synth->add_option("--size", so.size, "square spatial extent");
    synth->add_option("--views", so.views, "angular extent per axis (odd)");
    synth->add_option("--channels", so.channels, "1 = grayscale, 3 = RGB");
    synth->add_option("--seed", so.seed, "base seed; layer i uses seed + i");
    synth->add_option("--noise", so.noise_sigma, "Gaussian radiance noise sigma");
    synth->add_option("--disp-min", so.disp_min, "scene disparity range minimum");
    synth->add_option("--disp-max", so.disp_max, "scene disparity range maximum");
    synth->add_option("--focal", so.focal, "focal length in pixels");
    synth->add_option("--baseline", so.baseline, "baseline per angular step");
    synth->add_option("--base", so.base, "layer mean radiance");
    synth->add_option("--amplitude", so.amplitude, "layer texture contrast");
    synth->add_option("--lattice", so.lattice, "noise lattice cell size");
    synth->add_option("--octaves", so.octaves, "noise octave count");
    synth->add_option("--name", so.name, "scene name");
    synth->add_option("--threads", synth_threads, "worker threads, 0 = hardware default");
    synth->add_option("--out", synth_out, "output directory")->required();

    auto* sweep_depths =
        app.add_subcommand("sweep-depths", "plane-sweep MSE/runtime over hypothesis counts");
    std::string swd_scene;
    std::string swd_counts;
    std::string swd_out;
    int swd_reps = 3;
    sweep_depths->add_option("--scene", swd_scene, "scene config path")->required();
    sweep_depths->add_option("--counts", swd_counts, "comma list of hypothesis counts")
        ->required();
    sweep_depths->add_option("--reps", swd_reps, "timing repetitions (median reported)");
    sweep_depths->add_option("--out", swd_out, "output directory")->required();
    opts.add_common(sweep_depths);
    sweep_depths->add_option("--box-radius", opts.box_radius, "cost aggregation radius");

    auto* evaluate = app.add_subcommand("evaluate", "metrics for an existing disparity PFM pair");
    std::string ev_pred;
    std::string ev_gt;
    std::string ev_out;
    double ev_max_i = 4.0;
    evaluate->add_option("--pred", ev_pred, "estimated disparity PFM")->required();
    evaluate->add_option("--gt", ev_gt, "ground-truth disparity PFM")->required();
    evaluate->add_option("--max-i", ev_max_i, "PSNR peak value (disparity span)");
    evaluate->add_option("--out", ev_out, "optional directory for error map + manifest");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (estimate->parsed()) {
            return cmd_estimate(est_scene, est_algo, est_refine, est_out, opts);
        }
        if (compare->parsed()) {
            return cmd_compare(cmp_scene, cmp_algos, cmp_reps, cmp_out, opts);
        }
        if (synth->parsed()) {
            return cmd_synth(so, synth_threads, synth_out);
        }
        if (sweep_depths->parsed()) {
            return cmd_sweep_depths(swd_scene, swd_counts, swd_reps, swd_out, opts);
        }
        if (evaluate->parsed()) {
            return cmd_evaluate(ev_pred, ev_gt, ev_max_i, ev_out);
        }
    } catch (const config_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const io_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
