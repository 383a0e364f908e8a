#include "lfdepth/kernels.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "lfdepth/parallel.hpp"

namespace lfdepth {

namespace {

// Reflect without repeating the edge sample: -1 -> 1, dim -> dim-2.
int mirror_index(int t, int dim) {
    while (t < 0 || t >= dim) {
        if (t < 0) {
            t = -t;
        }
        if (t >= dim) {
            t = 2 * (dim - 1) - t;
        }
    }
    return t;
}

const std::array<double, 49>& gaussian7_taps() {
    static const std::array<double, 49> taps = [] {
        std::array<double, 49> k{};
        double sum = 0.0;
        for (int dy = -3; dy <= 3; ++dy) {
            for (int dx = -3; dx <= 3; ++dx) {
                // sigma^2 = 0.5, so the exponent is just -(dx^2 + dy^2)
                const double w = std::exp(-static_cast<double>(dx * dx + dy * dy));
                k[static_cast<std::size_t>((dy + 3) * 7 + dx + 3)] = w;
                sum += w;
            }
        }
        for (auto& w : k) {
            w /= sum;
        }
        return k;
    }();
    return taps;
}

}  // namespace

GradientField gradients(const LightField& lf) {
    if (lf.width() == 1 && lf.height() == 1) {
        throw std::invalid_argument("gradients: 1x1 spatial extent");
    }
    const LightField gray = lf.to_luma();
    const int w = gray.width();
    const int h = gray.height();
    const int nu = gray.n_u();
    const int nv = gray.n_v();

    GradientField g;
    g.width = w;
    g.height = h;
    g.n_u = nu;
    g.n_v = nv;
    const std::size_t n = static_cast<std::size_t>(w) * h * nu * nv;
    g.lx.assign(n, 0.0f);
    g.ly.assign(n, 0.0f);
    g.lu.assign(n, 0.0f);
    g.lv.assign(n, 0.0f);

    auto diff = [](float prev, float next, int pos, int dim) -> float {
        if (dim == 1) {
            return 0.0f;
        }
        if (pos == 0 || pos == dim - 1) {
            return next - prev;  // one-sided: exactly one of next/prev is the sample itself
        }
        return 0.5f * (next - prev);
    };

    parallel_for(0, h, [&](int y) {
        for (int x = 0; x < w; ++x) {
            for (int v = 0; v < nv; ++v) {
                for (int u = 0; u < nu; ++u) {
                    const std::size_t i = g.index(y, x, v, u);
                    if (w > 1) {
                        const float a = gray.at(y, x > 0 ? x - 1 : x, v, u);
                        const float b = gray.at(y, x < w - 1 ? x + 1 : x, v, u);
                        g.lx[i] = diff(a, b, x, w);
                    }
                    if (h > 1) {
                        const float a = gray.at(y > 0 ? y - 1 : y, x, v, u);
                        const float b = gray.at(y < h - 1 ? y + 1 : y, x, v, u);
                        g.ly[i] = diff(a, b, y, h);
                    }
                    if (nu > 1) {
                        const float a = gray.at(y, x, v, u > 0 ? u - 1 : u);
                        const float b = gray.at(y, x, v, u < nu - 1 ? u + 1 : u);
                        g.lu[i] = diff(a, b, u, nu);
                    }
                    if (nv > 1) {
                        const float a = gray.at(y, x, v > 0 ? v - 1 : v, u);
                        const float b = gray.at(y, x, v < nv - 1 ? v + 1 : v, u);
                        g.lv[i] = diff(a, b, v, nv);
                    }
                }
            }
        }
    });
    return g;
}

Image shear_view(const LightField& lf, int v, int u, double d) {
    const Image src = lf.view(v, u);
    const double offx = (u - lf.center_u()) * d;
    const double offy = (v - lf.center_v()) * d;
    if (offx == 0.0 && offy == 0.0) {
        return src;
    }
    Image out(lf.width(), lf.height(), lf.channels());
    for (int y = 0; y < lf.height(); ++y) {
        for (int x = 0; x < lf.width(); ++x) {
            for (int c = 0; c < lf.channels(); ++c) {
                out.at(y, x, c) =
                    static_cast<float>(bilinear_sample(src, x + offx, y + offy, c));
            }
        }
    }
    return out;
}

LightField shear(const LightField& lf, double d) {
    LightField out(lf.width(), lf.height(), lf.n_u(), lf.n_v(), lf.channels());
    const int views = lf.n_u() * lf.n_v();
    parallel_for(0, views, [&](int i) {
        const int v = i / lf.n_u();
        const int u = i % lf.n_u();
        const Image sheared = shear_view(lf, v, u, d);
        for (int y = 0; y < lf.height(); ++y) {
            for (int x = 0; x < lf.width(); ++x) {
                for (int c = 0; c < lf.channels(); ++c) {
                    out.at(y, x, v, u, c) = sheared.at(y, x, c);
                }
            }
        }
    });
    return out;
}

Image gaussian_blur7(const Image& img) {
    if (img.width() < 2 || img.height() < 2) {
        throw std::invalid_argument("gaussian_blur7: image too small to mirror");
    }
    const auto& taps = gaussian7_taps();
    const int w = img.width();
    const int h = img.height();
    const int ch = img.channels();
    Image out(w, h, ch);
    parallel_for(0, h, [&](int y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < ch; ++c) {
                double acc = 0.0;
                for (int dy = -3; dy <= 3; ++dy) {
                    const int sy = mirror_index(y + dy, h);
                    for (int dx = -3; dx <= 3; ++dx) {
                        const int sx = mirror_index(x + dx, w);
                        acc += taps[static_cast<std::size_t>((dy + 3) * 7 + dx + 3)] *
                               img.at(sy, sx, c);
                    }
                }
                out.at(y, x, c) = static_cast<float>(acc);
            }
        }
    });
    return out;
}

Image pyramid_down(const Image& img) {
    if (img.width() < 2 || img.height() < 2) {
        throw std::invalid_argument("pyramid_down: image too small");
    }
    const Image blurred = gaussian_blur7(img);
    const int ow = (img.width() + 1) / 2;
    const int oh = (img.height() + 1) / 2;
    Image out(ow, oh, img.channels());
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            for (int c = 0; c < img.channels(); ++c) {
                out.at(y, x, c) = blurred.at(2 * y, 2 * x, c);
            }
        }
    }
    return out;
}

DisparityMap upsample_disparity(const DisparityMap& d, int target_w, int target_h) {
    if (target_w < d.width() || target_h < d.height()) {
        throw std::invalid_argument("upsample_disparity: target smaller than source");
    }
    const double scale = static_cast<double>(target_w) / d.width();
    DisparityMap out(target_w, target_h);
    for (int y = 0; y < target_h; ++y) {
        const int sy = std::min(d.height() - 1,
                                static_cast<int>(static_cast<long long>(y) * d.height() / target_h));
        for (int x = 0; x < target_w; ++x) {
            const int sx = std::min(d.width() - 1,
                                    static_cast<int>(static_cast<long long>(x) * d.width() / target_w));
            if (d.is_valid(sy, sx)) {
                out.set(y, x, d.value(sy, sx) * scale);
            }
        }
    }
    return out;
}

}  // namespace lfdepth
