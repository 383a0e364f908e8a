#include "lfdepth/refine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <utility>

#include "lfdepth/kernels.hpp"
#include "lfdepth/parallel.hpp"

namespace lfdepth {

DisparityMap median_filter_3x3(const DisparityMap& d) {
    const int w = d.width();
    const int h = d.height();
    DisparityMap out(w, h);
    parallel_for(0, h, [&](int y) {
        double window[9];
        for (int x = 0; x < w; ++x) {
            int n = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                const int sy = std::clamp(y + dy, 0, h - 1);
                for (int dx = -1; dx <= 1; ++dx) {
                    const int sx = std::clamp(x + dx, 0, w - 1);
                    if (d.is_valid(sy, sx)) {
                        window[n++] = d.value(sy, sx);
                    }
                }
            }
            if (n == 0) {
                out.set_invalid(y, x);
                continue;
            }
            std::sort(window, window + n);
            out.set(y, x, window[(n - 1) / 2]);
        }
    });
    return out;
}

DisparityMap bilateral_filter(const DisparityMap& d, const Image& guide, double sigma_s,
                              double sigma_r) {
    if (!(sigma_s > 0.0) || !(sigma_r > 0.0)) {
        throw std::invalid_argument("bilateral_filter: sigmas must be positive");
    }
    if (guide.width() != d.width() || guide.height() != d.height()) {
        throw std::invalid_argument("bilateral_filter: guide dimensions must match the map");
    }
    const Image gray = luma(guide);
    const int w = d.width();
    const int h = d.height();
    const int radius = static_cast<int>(std::ceil(3.0 * sigma_s));
    const double inv_s = -0.5 / (sigma_s * sigma_s);
    const double inv_r = -0.5 / (sigma_r * sigma_r);
    DisparityMap out(w, h);
    parallel_for(0, h, [&](int y) {
        for (int x = 0; x < w; ++x) {
            const double g0 = gray.at(y, x);
            double acc = 0.0;
            double wsum = 0.0;
            for (int dy = -radius; dy <= radius; ++dy) {
                const int sy = y + dy;
                if (sy < 0 || sy >= h) {
                    continue;
                }
                for (int dx = -radius; dx <= radius; ++dx) {
                    const int sx = x + dx;
                    if (sx < 0 || sx >= w || !d.is_valid(sy, sx)) {
                        continue;
                    }
                    const double dg = gray.at(sy, sx) - g0;
                    const double wgt = std::exp((dx * dx + dy * dy) * inv_s + dg * dg * inv_r);
                    acc += wgt * d.value(sy, sx);
                    wsum += wgt;
                }
            }
            if (wsum > 0.0) {
                out.set(y, x, acc / wsum);
            } else {
                out.set_invalid(y, x);
            }
        }
    });
    return out;
}

DisparityMap fuse_weighted(std::span<const DisparityMap> maps, const FusionWeights& weights) {
    if (maps.empty()) {
        throw std::invalid_argument("fuse_weighted: no maps");
    }
    const int w = maps[0].width();
    const int h = maps[0].height();
    for (const auto& m : maps) {
        if (m.width() != w || m.height() != h) {
            throw std::invalid_argument("fuse_weighted: dimension mismatch");
        }
    }
    if (!weights.global.empty() && weights.global.size() != maps.size()) {
        throw std::invalid_argument("fuse_weighted: one global weight per map required");
    }
    if (!weights.confidence.empty() && weights.confidence.size() != maps.size()) {
        throw std::invalid_argument("fuse_weighted: one confidence entry per map required");
    }
    for (std::size_t i = 0; i < weights.confidence.size(); ++i) {
        const auto* c = weights.confidence[i];
        if (c && (c->width() != w || c->height() != h)) {
            throw std::invalid_argument("fuse_weighted: confidence dimension mismatch");
        }
    }
    for (double g : weights.global) {
        if (!(g >= 0.0)) {
            throw std::invalid_argument("fuse_weighted: weights must be non-negative");
        }
    }

    DisparityMap out(w, h);
    parallel_for(0, h, [&](int y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            double wsum = 0.0;
            for (std::size_t i = 0; i < maps.size(); ++i) {
                if (!maps[i].is_valid(y, x)) {
                    continue;
                }
                double wgt = weights.global.empty() ? 1.0 : weights.global[i];
                if (!weights.confidence.empty() && weights.confidence[i]) {
                    wgt *= weights.confidence[i]->at(y, x);
                }
                if (wgt <= 0.0) {
                    continue;
                }
                acc += wgt * maps[i].value(y, x);
                wsum += wgt;
            }
            if (wsum > 0.0) {
                out.set(y, x, acc / wsum);
            } else {
                out.set_invalid(y, x);
            }
        }
    });
    return out;
}

DisparityMap fill_nearest(const DisparityMap& d) {
    const int w = d.width();
    const int h = d.height();
    DisparityMap out = d;
    std::deque<std::pair<int, int>> queue;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (out.is_valid(y, x)) {
                queue.emplace_back(y, x);
            }
        }
    }
    if (queue.empty() || queue.size() == static_cast<std::size_t>(w) * h) {
        return out;
    }
    constexpr int dy[4] = {-1, 1, 0, 0};
    constexpr int dx[4] = {0, 0, -1, 1};
    while (!queue.empty()) {
        const auto [y, x] = queue.front();
        queue.pop_front();
        for (int k = 0; k < 4; ++k) {
            const int ny = y + dy[k];
            const int nx = x + dx[k];
            if (ny < 0 || ny >= h || nx < 0 || nx >= w || out.is_valid(ny, nx)) {
                continue;
            }
            out.set(ny, nx, out.value(y, x));
            queue.emplace_back(ny, nx);
        }
    }
    return out;
}

void EnergyParams::validate() const {
    if (!(lambda >= 0.0)) {
        throw std::invalid_argument("energy: lambda must be non-negative");
    }
    if (!(charbonnier_eps > 0.0)) {
        throw std::invalid_argument("energy: charbonnier_eps must be positive");
    }
    if (!(step_size > 0.0)) {
        throw std::invalid_argument("energy: step_size must be positive");
    }
    if (max_iters < 1 || n_levels < 1) {
        throw std::invalid_argument("energy: max_iters and n_levels must be at least 1");
    }
    if (!(sigma_s > 0.0) || !(sigma_r > 0.0)) {
        throw std::invalid_argument("energy: bilateral sigmas must be positive");
    }
}

double charbonnier(double t, double eps) {
    return std::sqrt(t * t + eps * eps);
}

double charbonnier_deriv(double t, double eps) {
    return t / charbonnier(t, eps);
}

namespace {

// Free-form nearest-neighbor resample (either direction); values scale with
// the width ratio like upsample_disparity.
DisparityMap resample_disparity(const DisparityMap& d, int tw, int th) {
    const double scale = static_cast<double>(tw) / d.width();
    DisparityMap out(tw, th);
    for (int y = 0; y < th; ++y) {
        const int sy = std::min(d.height() - 1,
                                static_cast<int>(static_cast<long long>(y) * d.height() / th));
        for (int x = 0; x < tw; ++x) {
            const int sx = std::min(d.width() - 1,
                                    static_cast<int>(static_cast<long long>(x) * d.width() / tw));
            if (d.is_valid(sy, sx)) {
                out.set(y, x, d.value(sy, sx) * scale);
            }
        }
    }
    return out;
}

Map2D gradient_magnitude(const Image& img) {
    const int w = img.width();
    const int h = img.height();
    Map2D out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double gx = 0.0;
            double gy = 0.0;
            if (w > 1) {
                const float a = img.at(y, x > 0 ? x - 1 : x);
                const float b = img.at(y, x < w - 1 ? x + 1 : x);
                gx = (x == 0 || x == w - 1) ? b - a : 0.5 * (b - a);
            }
            if (h > 1) {
                const float a = img.at(y > 0 ? y - 1 : y, x);
                const float b = img.at(y < h - 1 ? y + 1 : y, x);
                gy = (y == 0 || y == h - 1) ? b - a : 0.5 * (b - a);
            }
            out.at(y, x) = std::sqrt(gx * gx + gy * gy);
        }
    }
    return out;
}

struct EnergyLevel {
    Image center;
    Image neighbor;
    Map2D weight_right;  // edge (y,x)-(y,x+1)
    Map2D weight_down;   // edge (y,x)-(y+1,x)
};

// Warped neighbor sample and its derivative with respect to the disparity.
// Coordinates clamp like bilinear_sample; a clamped axis contributes zero
// derivative because the interpolant is constant past the border.
void warp_sample(const Image& img, double wx, double wy, int du, int dv, double* value,
                 double* ddisp) {
    const int w = img.width();
    const int h = img.height();
    const double xc = std::clamp(wx, 0.0, static_cast<double>(w - 1));
    const double yc = std::clamp(wy, 0.0, static_cast<double>(h - 1));
    const int x0 = static_cast<int>(std::floor(xc));
    const int y0 = static_cast<int>(std::floor(yc));
    const double fx = xc - x0;
    const double fy = yc - y0;
    const int x1 = std::min(x0 + 1, w - 1);
    const int y1 = std::min(y0 + 1, h - 1);
    const double p00 = img.at(y0, x0);
    const double p10 = img.at(y0, x1);
    const double p01 = img.at(y1, x0);
    const double p11 = img.at(y1, x1);
    *value = (1.0 - fy) * ((1.0 - fx) * p00 + fx * p10) + fy * ((1.0 - fx) * p01 + fx * p11);
    double gx = (1.0 - fy) * (p10 - p00) + fy * (p11 - p01);
    double gy = (1.0 - fx) * (p01 - p00) + fx * (p11 - p10);
    if (wx < 0.0 || wx > w - 1) {
        gx = 0.0;
    }
    if (wy < 0.0 || wy > h - 1) {
        gy = 0.0;
    }
    *ddisp = du * gx + dv * gy;
}

struct EnergyProblem {
    const EnergyLevel* level = nullptr;
    int du = 0;
    int dv = 0;
    double lambda = 0.0;
    double eps = 1e-3;

    double energy(const std::vector<double>& disp) const {
        const int w = level->center.width();
        const int h = level->center.height();
        std::vector<double> row_sums(static_cast<std::size_t>(h), 0.0);
        parallel_for(0, h, [&](int y) {
            double sum = 0.0;
            for (int x = 0; x < w; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * w + x;
                double warped = 0.0;
                double unused = 0.0;
                warp_sample(level->neighbor, x + disp[i] * du, y + disp[i] * dv, du, dv,
                            &warped, &unused);
                sum += charbonnier(level->center.at(y, x) - warped, eps);
                if (x + 1 < w) {
                    sum += lambda * level->weight_right.at(y, x) *
                           charbonnier(disp[i] - disp[i + 1], eps);
                }
                if (y + 1 < h) {
                    sum += lambda * level->weight_down.at(y, x) *
                           charbonnier(disp[i] - disp[i + w], eps);
                }
            }
            row_sums[static_cast<std::size_t>(y)] = sum;
        });
        double total = 0.0;
        for (double s : row_sums) {
            total += s;
        }
        return total;
    }

    void gradient(const std::vector<double>& disp, std::vector<double>& grad) const {
        const int w = level->center.width();
        const int h = level->center.height();
        grad.assign(disp.size(), 0.0);
        parallel_for(0, h, [&](int y) {
            for (int x = 0; x < w; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * w + x;
                double warped = 0.0;
                double ddisp = 0.0;
                warp_sample(level->neighbor, x + disp[i] * du, y + disp[i] * dv, du, dv,
                            &warped, &ddisp);
                double g = -charbonnier_deriv(level->center.at(y, x) - warped, eps) * ddisp;
                // Every edge touching this pixel, each recomputed locally so
                // rows stay write-disjoint under parallel execution.
                if (x + 1 < w) {
                    g += lambda * level->weight_right.at(y, x) *
                         charbonnier_deriv(disp[i] - disp[i + 1], eps);
                }
                if (x > 0) {
                    g -= lambda * level->weight_right.at(y, x - 1) *
                         charbonnier_deriv(disp[i - 1] - disp[i], eps);
                }
                if (y + 1 < h) {
                    g += lambda * level->weight_down.at(y, x) *
                         charbonnier_deriv(disp[i] - disp[i + w], eps);
                }
                if (y > 0) {
                    g -= lambda * level->weight_down.at(y - 1, x) *
                         charbonnier_deriv(disp[i - w] - disp[i], eps);
                }
                grad[i] = g;
            }
        });
    }
};

}  // namespace

DisparityMap energy_refine(const DisparityMap& d0, const LightField& lf,
                           const EnergyParams& params, EnergyTrace* trace) {
    params.validate();
    if (d0.width() != lf.width() || d0.height() != lf.height()) {
        throw std::invalid_argument("energy_refine: map and field dimensions differ");
    }
    DisparityMap dense = d0.valid_count() == d0.values().size() ? d0 : fill_nearest(d0);
    if (dense.valid_count() == 0) {
        throw std::invalid_argument("energy_refine: no valid pixel to start from");
    }

    const LightField gray = lf.to_luma();
    const int cu = gray.center_u();
    const int cv = gray.center_v();
    int du = 0;
    int dv = 0;
    int nu_pick = cu;
    int nv_pick = cv;
    if (gray.n_u() > 1) {
        nu_pick = cu + 1;
        du = 1;
    } else if (gray.n_v() > 1) {
        nv_pick = cv + 1;
        dv = 1;
    }

    std::vector<EnergyLevel> levels;  // finest first
    levels.push_back({center_view(gray), gray.view(nv_pick, nu_pick), Map2D(), Map2D()});
    while (static_cast<int>(levels.size()) < params.n_levels &&
           levels.back().center.width() >= 2 && levels.back().center.height() >= 2) {
        EnergyLevel next{pyramid_down(levels.back().center), pyramid_down(levels.back().neighbor),
                         Map2D(), Map2D()};
        levels.push_back(std::move(next));
    }
    for (auto& lvl : levels) {
        const Map2D mag = gradient_magnitude(lvl.center);
        double tau = 0.0;
        for (double m : mag.data()) {
            tau += m;
        }
        tau = std::max(tau / static_cast<double>(mag.data().size()), 1e-12);
        const int w = lvl.center.width();
        const int h = lvl.center.height();
        lvl.weight_right = Map2D(w, h);
        lvl.weight_down = Map2D(w, h);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (x + 1 < w) {
                    lvl.weight_right.at(y, x) =
                        std::exp(-(mag.at(y, x) + mag.at(y, x + 1)) / (2.0 * tau));
                }
                if (y + 1 < h) {
                    lvl.weight_down.at(y, x) =
                        std::exp(-(mag.at(y, x) + mag.at(y + 1, x)) / (2.0 * tau));
                }
            }
        }
    }

    if (trace) {
        trace->levels.clear();
    }

    DisparityMap current = resample_disparity(dense, levels.back().center.width(),
                                              levels.back().center.height());
    for (int li = static_cast<int>(levels.size()) - 1; li >= 0; --li) {
        const EnergyLevel& lvl = levels[static_cast<std::size_t>(li)];
        const int w = lvl.center.width();
        const int h = lvl.center.height();
        if (current.width() != w || current.height() != h) {
            current = resample_disparity(current, w, h);
        }
        std::vector<double> disp = current.values();

        EnergyProblem problem{&lvl, du, dv, params.lambda, params.charbonnier_eps};
        double e = problem.energy(disp);
        std::vector<double> accepted_energies{e};

        std::vector<double> grad;
        std::vector<double> proposal(disp.size());
        double step = params.step_size;
        const double step_floor = params.step_size * 0x1.0p-48;
        const double step_ceiling = params.step_size * 64.0;
        int accepted = 0;
        while (accepted < params.max_iters) {
            problem.gradient(disp, grad);
            bool improved = false;
            while (step >= step_floor) {
                for (std::size_t i = 0; i < disp.size(); ++i) {
                    proposal[i] = disp[i] - step * grad[i];
                }
                const double e_new = problem.energy(proposal);
                if (e_new < e) {
                    disp.swap(proposal);
                    e = e_new;
                    accepted_energies.push_back(e);
                    ++accepted;
                    step = std::min(step * 2.0, step_ceiling);
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!improved) {
                break;
            }
        }
        if (trace) {
            trace->levels.push_back(std::move(accepted_energies));
        }

        current = DisparityMap(w, h);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                current.set(y, x, disp[static_cast<std::size_t>(y) * w + x]);
            }
        }
    }

    const DisparityMap smoothed =
        bilateral_filter(current, center_view(lf), params.sigma_s, params.sigma_r);
    return median_filter_3x3(smoothed);
}

}  // namespace lfdepth
