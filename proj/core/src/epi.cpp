#include "lfdepth/epi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "lfdepth/cost_volume.hpp"
#include "lfdepth/kernels.hpp"
#include "lfdepth/parallel.hpp"
#include "lfdepth/refine.hpp"

namespace lfdepth {

void EpiParams::validate() const {
    if (edge_window_rows < 1 || edge_window_cols < 1 || edge_window_rows % 2 == 0 ||
        edge_window_cols % 2 == 0) {
        throw std::invalid_argument("epi: edge window extents must be odd and positive");
    }
    if (!(bandwidth > 0.0)) {
        throw std::invalid_argument("epi: bandwidth must be positive");
    }
    if (!(edge_threshold_level0 > 0.0) || !(edge_threshold_coarse > 0.0)) {
        throw std::invalid_argument("epi: edge thresholds must be positive");
    }
    if (!(depth_conf_epsilon > 0.0)) {
        throw std::invalid_argument("epi: depth_conf_epsilon must be positive");
    }
    if (n_disparities < 2) {
        throw std::invalid_argument("epi: at least two disparity hypotheses required");
    }
    if (meanshift_max_iters < 1) {
        throw std::invalid_argument("epi: meanshift_max_iters must be at least 1");
    }
    if (!(meanshift_tol > 0.0)) {
        throw std::invalid_argument("epi: meanshift_tol must be positive");
    }
    if (min_pyramid_extent < 2) {
        throw std::invalid_argument("epi: min_pyramid_extent must be at least 2");
    }
}

namespace {

// Grayscale radiances keep zero tails, so the norm collapses to |r0| and the
// scalar fast path below computes bit-identical values.
double radiance_norm(const Radiance& r) {
    if (r[1] == 0.0 && r[2] == 0.0) {
        return std::fabs(r[0]);
    }
    return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
}

double kernel_weight(double t, const EpiParams& params) {
    if (params.kernel == KernelKind::triangular) {
        return t < params.bandwidth ? 1.0 - t / params.bandwidth : 0.0;
    }
    return t >= params.bandwidth ? 1.0 - params.bandwidth / t : 0.0;
}

// Single-channel mirror of density_score; every sum runs in the same order
// over the same double values, keeping the two paths bit-identical on
// grayscale input.
double density_score_scalar(const double* r, int n, const EpiParams& params) {
    double mode = 0.0;
    for (int i = 0; i < n; ++i) {
        mode += r[i];
    }
    mode /= n;
    for (int iter = 0; iter < params.meanshift_max_iters; ++iter) {
        double wsum = 0.0;
        double msum = 0.0;
        for (int i = 0; i < n; ++i) {
            const double weight = kernel_weight(std::fabs(r[i] - mode), params);
            wsum += weight;
            msum += weight * r[i];
        }
        if (wsum == 0.0) {
            return 0.0;
        }
        const double next = msum / wsum;
        const double step = std::fabs(next - mode);
        mode = next;
        if (step < params.meanshift_tol) {
            break;
        }
    }
    double score = 0.0;
    for (int i = 0; i < n; ++i) {
        score += kernel_weight(std::fabs(r[i] - mode), params);
    }
    return score / n;
}

}  // namespace

ConfidenceMap edge_confidence(const Image& img, const EpiParams& params) {
    params.validate();
    int rows = params.edge_window_rows;
    int cols = params.edge_window_cols;
    if (params.transpose_edge_window) {
        std::swap(rows, cols);
    }
    if (img.height() < rows || img.width() < cols) {
        throw std::invalid_argument("edge_confidence: image smaller than the window");
    }
    const int rh = rows / 2;
    const int rw = cols / 2;
    const int w = img.width();
    const int h = img.height();
    const int ch = img.channels();
    ConfidenceMap out(w, h);
    parallel_for(0, h, [&](int y) {
        for (int x = 0; x < w; ++x) {
            double sum = 0.0;
            for (int dy = -rh; dy <= rh; ++dy) {
                const int sy = std::clamp(y + dy, 0, h - 1);
                for (int dx = -rw; dx <= rw; ++dx) {
                    const int sx = std::clamp(x + dx, 0, w - 1);
                    if (ch == 1) {
                        sum += std::fabs(static_cast<double>(img.at(y, x)) - img.at(sy, sx));
                    } else {
                        double sq = 0.0;
                        for (int c = 0; c < ch; ++c) {
                            const double d =
                                static_cast<double>(img.at(y, x, c)) - img.at(sy, sx, c);
                            sq += d * d;
                        }
                        sum += std::sqrt(sq);
                    }
                }
            }
            out.at(y, x) = sum;
        }
    });
    return out;
}

std::vector<Radiance> sample_radiances(const LightField& lf, int x, int y, double d) {
    if (lf.empty()) {
        throw std::invalid_argument("sample_radiances: empty field");
    }
    if (x < 0 || x >= lf.width() || y < 0 || y >= lf.height()) {
        throw std::invalid_argument("sample_radiances: pixel out of range");
    }
    const int cu = lf.center_u();
    const int cv = lf.center_v();
    std::vector<Radiance> out;
    out.reserve(static_cast<std::size_t>(lf.n_u()) * lf.n_v());
    for (int v = 0; v < lf.n_v(); ++v) {
        for (int u = 0; u < lf.n_u(); ++u) {
            const Image view = lf.view(v, u);
            const double sx = x + (u - cu) * d;
            const double sy = y + (v - cv) * d;
            Radiance r{};
            for (int c = 0; c < lf.channels(); ++c) {
                r[static_cast<std::size_t>(c)] = bilinear_sample(view, sx, sy, c);
            }
            out.push_back(r);
        }
    }
    return out;
}

DensityScore density_score(std::span<const Radiance> radiances, const EpiParams& params,
                           std::optional<Radiance> init) {
    params.validate();
    if (radiances.empty()) {
        throw std::invalid_argument("density_score: no samples");
    }
    const int n = static_cast<int>(radiances.size());
    Radiance mode{};
    if (init) {
        mode = *init;
    } else {
        for (const Radiance& r : radiances) {
            for (int c = 0; c < 3; ++c) {
                mode[static_cast<std::size_t>(c)] += r[static_cast<std::size_t>(c)];
            }
        }
        for (int c = 0; c < 3; ++c) {
            mode[static_cast<std::size_t>(c)] /= n;
        }
    }
    for (int iter = 0; iter < params.meanshift_max_iters; ++iter) {
        double wsum = 0.0;
        Radiance msum{};
        for (const Radiance& r : radiances) {
            Radiance diff{r[0] - mode[0], r[1] - mode[1], r[2] - mode[2]};
            const double weight = kernel_weight(radiance_norm(diff), params);
            wsum += weight;
            for (int c = 0; c < 3; ++c) {
                msum[static_cast<std::size_t>(c)] += weight * r[static_cast<std::size_t>(c)];
            }
        }
        if (wsum == 0.0) {
            return {0.0, mode};
        }
        Radiance next{msum[0] / wsum, msum[1] / wsum, msum[2] / wsum};
        const Radiance delta{next[0] - mode[0], next[1] - mode[1], next[2] - mode[2]};
        const double step = radiance_norm(delta);
        mode = next;
        if (step < params.meanshift_tol) {
            break;
        }
    }
    double score = 0.0;
    for (const Radiance& r : radiances) {
        Radiance diff{r[0] - mode[0], r[1] - mode[1], r[2] - mode[2]};
        score += kernel_weight(radiance_norm(diff), params);
    }
    return {score / n, mode};
}

EpiEstimate estimate_epi_level(const LightField& lf, std::span<const double> disparities,
                               const EpiParams& params, int level) {
    params.validate();
    if (lf.empty()) {
        throw std::invalid_argument("estimate_epi_level: empty field");
    }
    if (disparities.empty()) {
        throw std::invalid_argument("estimate_epi_level: no disparity hypotheses");
    }
    for (std::size_t i = 1; i < disparities.size(); ++i) {
        if (!(disparities[i] > disparities[i - 1])) {
            throw std::invalid_argument("estimate_epi_level: hypotheses must be ascending");
        }
    }
    if (level < 0) {
        throw std::invalid_argument("estimate_epi_level: negative level");
    }

    const int w = lf.width();
    const int h = lf.height();
    const int nu = lf.n_u();
    const int nv = lf.n_v();
    const int cu = lf.center_u();
    const int cv = lf.center_v();
    const int ch = lf.channels();
    const int n_views = nu * nv;
    const int n_d = static_cast<int>(disparities.size());
    const double threshold =
        level == 0 ? params.edge_threshold_level0 : params.edge_threshold_coarse;

    const ConfidenceMap ce = edge_confidence(center_view(lf), params);
    std::vector<Image> views;
    views.reserve(static_cast<std::size_t>(n_views));
    for (int v = 0; v < nv; ++v) {
        for (int u = 0; u < nu; ++u) {
            views.push_back(lf.view(v, u));
        }
    }

    DisparityMap disp(w, h);
    ConfidenceMap conf(w, h);
    parallel_for(0, h, [&](int y) {
        std::vector<double> scalar_samples(static_cast<std::size_t>(n_views));
        std::vector<Radiance> rad_samples(static_cast<std::size_t>(n_views));
        for (int x = 0; x < w; ++x) {
            if (ce.at(y, x) < threshold) {
                continue;
            }
            double score_sum = 0.0;
            double score_max = 0.0;
            int best = 0;
            for (int di = 0; di < n_d; ++di) {
                const double d = disparities[static_cast<std::size_t>(di)];
                double s;
                if (ch == 1) {
                    int k = 0;
                    for (int v = 0; v < nv; ++v) {
                        const double sy = y + (v - cv) * d;
                        for (int u = 0; u < nu; ++u) {
                            scalar_samples[static_cast<std::size_t>(k++)] = bilinear_sample(
                                views[static_cast<std::size_t>(v) * nu + u], x + (u - cu) * d, sy);
                        }
                    }
                    s = density_score_scalar(scalar_samples.data(), n_views, params);
                } else {
                    int k = 0;
                    for (int v = 0; v < nv; ++v) {
                        const double sy = y + (v - cv) * d;
                        for (int u = 0; u < nu; ++u) {
                            const Image& view = views[static_cast<std::size_t>(v) * nu + u];
                            const double sx = x + (u - cu) * d;
                            Radiance r{};
                            for (int c = 0; c < ch; ++c) {
                                r[static_cast<std::size_t>(c)] = bilinear_sample(view, sx, sy, c);
                            }
                            rad_samples[static_cast<std::size_t>(k++)] = r;
                        }
                    }
                    s = density_score(rad_samples, params).score;
                }
                score_sum += s;
                if (di == 0 || s > score_max) {
                    score_max = s;
                    best = di;
                }
            }
            const double cd = ce.at(y, x) * std::fabs(score_max - score_sum / n_d);
            conf.at(y, x) = cd;
            if (cd > params.depth_conf_epsilon) {
                disp.set(y, x, disparities[static_cast<std::size_t>(best)]);
            }
        }
    });
    return {median_filter_3x3(disp), std::move(conf)};
}

namespace {

LightField downsample_views(const LightField& lf) {
    const Image first = pyramid_down(lf.view(0, 0));
    LightField out(first.width(), first.height(), lf.n_u(), lf.n_v(), lf.channels());
    for (int v = 0; v < lf.n_v(); ++v) {
        for (int u = 0; u < lf.n_u(); ++u) {
            const Image small = (v == 0 && u == 0) ? first : pyramid_down(lf.view(v, u));
            for (int y = 0; y < out.height(); ++y) {
                for (int x = 0; x < out.width(); ++x) {
                    for (int c = 0; c < out.channels(); ++c) {
                        out.at(y, x, v, u, c) = small.at(y, x, c);
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace

DisparityMap fine_to_coarse(const LightField& lf, const SceneMeta& meta,
                            const EpiParams& params) {
    meta.validate();
    params.validate();
    std::vector<double> hyps =
        linspace_disparities(meta.disparity_min, meta.disparity_max, params.n_disparities);

    std::vector<DisparityMap> maps;
    maps.push_back(estimate_epi_level(lf, hyps, params, 0).disparity);
    LightField current = lf;
    for (int level = 1;; ++level) {
        if (std::min(current.width(), current.height()) < 2) {
            break;
        }
        LightField down = downsample_views(current);
        if (std::min(down.width(), down.height()) < params.min_pyramid_extent) {
            break;
        }
        for (double& d : hyps) {
            d *= 0.5;
        }
        maps.push_back(estimate_epi_level(down, hyps, params, level).disparity);
        current = std::move(down);
    }

    DisparityMap merged = std::move(maps.back());
    for (int i = static_cast<int>(maps.size()) - 2; i >= 0; --i) {
        DisparityMap finer = std::move(maps[static_cast<std::size_t>(i)]);
        const DisparityMap up = upsample_disparity(merged, finer.width(), finer.height());
        for (int y = 0; y < finer.height(); ++y) {
            for (int x = 0; x < finer.width(); ++x) {
                if (!finer.is_valid(y, x) && up.is_valid(y, x)) {
                    finer.set(y, x, up.value(y, x));
                }
            }
        }
        merged = std::move(finer);
    }
    merged = fill_nearest(merged);
    return median_filter_3x3(merged);
}

}  // namespace lfdepth
