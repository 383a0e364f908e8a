#include "lfdepth/scene_io.hpp"

#include <fstream>
#include <sstream>

#include "lfdepth/errors.hpp"
#include "lfdepth/pfm.hpp"
#include "lfdepth/png_io.hpp"

namespace lfdepth {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::exception&) {
        throw config_error("scene config: bad integer for '" + key + "': " + value);
    }
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::exception&) {
        throw config_error("scene config: bad number for '" + key + "': " + value);
    }
}

}  // namespace

void SceneConfig::validate() const {
    if (n_u <= 0 || n_v <= 0) {
        throw config_error("scene config: n_u and n_v must be positive");
    }
    try {
        meta.validate();
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("scene config: ") + e.what());
    }
}

SceneConfig read_scene_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw io_error("scene config: cannot open " + path.string());
    }
    SceneConfig cfg;
    cfg.image_dir = path.parent_path();
    std::optional<std::filesystem::path> image_dir_key;
    std::optional<std::filesystem::path> gt_key;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error("scene config: line " + std::to_string(lineno) +
                               " is not key=value: " + line);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "name") {
            cfg.meta.name = value;
        } else if (key == "image_dir") {
            image_dir_key = value;
        } else if (key == "pattern") {
            cfg.pattern = value;
        } else if (key == "n_u") {
            cfg.n_u = parse_int(key, value);
        } else if (key == "n_v") {
            cfg.n_v = parse_int(key, value);
        } else if (key == "focal_length_px") {
            cfg.meta.focal_length_px = parse_real(key, value);
        } else if (key == "baseline") {
            cfg.meta.baseline = parse_real(key, value);
        } else if (key == "disp_min") {
            cfg.meta.disparity_min = parse_real(key, value);
        } else if (key == "disp_max") {
            cfg.meta.disparity_max = parse_real(key, value);
        } else if (key == "gt") {
            gt_key = value;
        } else {
            throw config_error("scene config: unknown key '" + key + "' at line " +
                               std::to_string(lineno));
        }
    }

    const auto base = path.parent_path();
    if (image_dir_key) {
        cfg.image_dir = image_dir_key->is_absolute() ? *image_dir_key : base / *image_dir_key;
    }
    if (gt_key) {
        cfg.gt_path = gt_key->is_absolute() ? *gt_key : base / *gt_key;
    }
    cfg.validate();
    return cfg;
}

void write_scene_config(const SceneConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw io_error("scene config: cannot write " + path.string());
    }
    if (!cfg.meta.name.empty()) {
        out << "name=" << cfg.meta.name << "\n";
    }
    out << "image_dir=" << cfg.image_dir.string() << "\n";
    out << "pattern=" << cfg.pattern << "\n";
    out << "n_u=" << cfg.n_u << "\n";
    out << "n_v=" << cfg.n_v << "\n";
    out << "focal_length_px=" << cfg.meta.focal_length_px << "\n";
    out << "baseline=" << cfg.meta.baseline << "\n";
    out << "disp_min=" << cfg.meta.disparity_min << "\n";
    out << "disp_max=" << cfg.meta.disparity_max << "\n";
    if (cfg.gt_path) {
        out << "gt=" << cfg.gt_path->string() << "\n";
    }
    if (!out) {
        throw io_error("scene config: write failed for " + path.string());
    }
}

std::string view_filename(const std::string& pattern, int index) {
    const auto pos = pattern.find("{NNN}");
    if (pos == std::string::npos) {
        throw config_error("scene config: pattern lacks a {NNN} placeholder: " + pattern);
    }
    std::string num = std::to_string(index);
    while (num.size() < 3) {
        num.insert(num.begin(), '0');
    }
    std::string out = pattern;
    out.replace(pos, 5, num);
    return out;
}

LoadedScene load_lightfield(const SceneConfig& cfg) {
    cfg.validate();
    LoadedScene scene;
    scene.meta = cfg.meta;

    for (int v = 0; v < cfg.n_v; ++v) {
        for (int u = 0; u < cfg.n_u; ++u) {
            const int idx = v * cfg.n_u + u;
            const auto file = cfg.image_dir / view_filename(cfg.pattern, idx);
            if (!std::filesystem::exists(file)) {
                throw io_error("load_lightfield: view " + std::to_string(idx) + " missing: " +
                               file.string());
            }
            Image img;
            try {
                img = read_png(file);
            } catch (const io_error& e) {
                throw io_error("load_lightfield: view " + std::to_string(idx) + ": " + e.what());
            }
            if (scene.field.empty()) {
                scene.field = LightField(img.width(), img.height(), cfg.n_u, cfg.n_v,
                                         img.channels());
            } else if (img.width() != scene.field.width() || img.height() != scene.field.height() ||
                       img.channels() != scene.field.channels()) {
                throw io_error("load_lightfield: view " + std::to_string(idx) +
                               " dimensions differ from view 0: " + file.string());
            }
            for (int y = 0; y < img.height(); ++y) {
                for (int x = 0; x < img.width(); ++x) {
                    for (int c = 0; c < img.channels(); ++c) {
                        scene.field.at(y, x, v, u, c) = img.at(y, x, c);
                    }
                }
            }
        }
    }

    if (cfg.gt_path) {
        DisparityMap gt = read_pfm_disparity(*cfg.gt_path);
        if (gt.width() != scene.field.width() || gt.height() != scene.field.height()) {
            throw io_error("load_lightfield: ground truth dimensions " +
                           std::to_string(gt.width()) + "x" + std::to_string(gt.height()) +
                           " do not match the views");
        }
        scene.ground_truth = std::move(gt);
    }
    return scene;
}

std::filesystem::path save_scene(const LightField& lf, const SceneMeta& meta,
                                 const DisparityMap& gt, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw io_error("save_scene: cannot create " + dir.string());
    }
    SceneConfig cfg;
    cfg.image_dir = ".";
    cfg.n_u = lf.n_u();
    cfg.n_v = lf.n_v();
    cfg.meta = meta;
    for (int v = 0; v < lf.n_v(); ++v) {
        for (int u = 0; u < lf.n_u(); ++u) {
            const int idx = v * lf.n_u() + u;
            write_png(lf.view(v, u), dir / view_filename(cfg.pattern, idx));
        }
    }
    write_pfm_disparity(gt, dir / "gt.pfm");
    cfg.gt_path = "gt.pfm";
    const auto cfg_path = dir / "scene.cfg";
    write_scene_config(cfg, cfg_path);
    return cfg_path;
}

}  // namespace lfdepth
