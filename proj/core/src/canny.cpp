#include "sidkit/canny.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace sidkit {

CannyConfig CannyConfig::automatic(double sigma) {
    if (!(sigma > 0.0))
        throw ValueError("CannyConfig: gaussian_sigma must be positive");
    CannyConfig cfg;
    cfg.mode = Mode::Auto;
    cfg.gaussian_sigma = sigma;
    return cfg;
}

CannyConfig CannyConfig::manual(double low, double up, double sigma) {
    if (!(sigma > 0.0))
        throw ValueError("CannyConfig: gaussian_sigma must be positive");
    CannyConfig cfg;
    cfg.mode = Mode::Manual;
    cfg.theta_low = std::clamp(low, 0.0, 255.0);
    cfg.theta_up = std::clamp(up, 0.0, 255.0);
    cfg.gaussian_sigma = sigma;
    if (!(cfg.theta_low < cfg.theta_up))
        throw ValueError("CannyConfig: theta_low must be below theta_up");
    return cfg;
}

namespace {

double median_intensity(const GrayImage& img) {
    std::array<std::size_t, 256> hist{};
    for (std::uint8_t v : img.data())
        ++hist[v];
    const std::size_t n = img.data().size();
    // Even counts average the two middle values, odd counts take the middle.
    const std::size_t lo_rank = (n - 1) / 2;
    const std::size_t hi_rank = n / 2;
    int lo = -1, hi = -1;
    std::size_t seen = 0;
    for (int v = 0; v < 256; ++v) {
        seen += hist[static_cast<std::size_t>(v)];
        if (lo < 0 && seen > lo_rank)
            lo = v;
        if (hi < 0 && seen > hi_rank) {
            hi = v;
            break;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> gaussian_blur(const GrayImage& img, double sigma) {
    const int h = img.height();
    const int w = img.width();
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        kernel[static_cast<std::size_t>(k + radius)] = std::exp(-(k * k) / (2.0 * sigma * sigma));
        sum += kernel[static_cast<std::size_t>(k + radius)];
    }
    for (double& v : kernel)
        v /= sum;

    // Separable passes with replicated borders.
    std::vector<double> tmp(img.data().size()), out(img.data().size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int xx = std::clamp(x + k, 0, w - 1);
                acc += kernel[static_cast<std::size_t>(k + radius)] * img.at(y, xx);
            }
            tmp[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int yy = std::clamp(y + k, 0, h - 1);
                acc += kernel[static_cast<std::size_t>(k + radius)] *
                       tmp[static_cast<std::size_t>(yy) * w + x];
            }
            out[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
    return out;
}

} // namespace

std::pair<double, double> canny_thresholds(const GrayImage& image, const CannyConfig& cfg) {
    if (cfg.mode == CannyConfig::Mode::Manual)
        return {cfg.theta_low, cfg.theta_up};
    const double m = median_intensity(image);
    return {std::max(0.0, (1.0 - 0.33) * m), std::min(255.0, (1.0 + 0.33) * m)};
}

DenseMap canny(const GrayImage& image, const CannyConfig& cfg) {
    const int h = image.height();
    const int w = image.width();
    const auto [theta_low, theta_up] = canny_thresholds(image, cfg);

    const std::vector<double> blurred = gaussian_blur(image, cfg.gaussian_sigma);

    auto pix = [&](int y, int x) {
        return blurred[static_cast<std::size_t>(std::clamp(y, 0, h - 1)) * w +
                       std::clamp(x, 0, w - 1)];
    };

    std::vector<double> gx(blurred.size()), gy(blurred.size()), mag(blurred.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double sx = (pix(y - 1, x + 1) + 2.0 * pix(y, x + 1) + pix(y + 1, x + 1)) -
                              (pix(y - 1, x - 1) + 2.0 * pix(y, x - 1) + pix(y + 1, x - 1));
            const double sy = (pix(y + 1, x - 1) + 2.0 * pix(y + 1, x) + pix(y + 1, x + 1)) -
                              (pix(y - 1, x - 1) + 2.0 * pix(y - 1, x) + pix(y - 1, x + 1));
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            gx[i] = sx;
            gy[i] = sy;
            mag[i] = std::hypot(sx, sy);
        }
    }

    // Non-maximum suppression along the quantized gradient direction.
    // Ties keep the earlier pixel (strict > against -dir, >= against +dir),
    // so a symmetric ridge thins to a single line.
    std::vector<double> thin(mag.size(), 0.0);
    constexpr double pi = std::numbers::pi;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (mag[i] == 0.0)
                continue;
            double angle = std::atan2(gy[i], gx[i]);
            if (angle < 0.0)
                angle += pi;
            if (angle >= pi)
                angle -= pi;
            int dy, dx;
            if (angle < pi / 8.0 || angle >= 7.0 * pi / 8.0) {
                dy = 0; dx = 1;        // horizontal gradient, vertical edge
            } else if (angle < 3.0 * pi / 8.0) {
                dy = 1; dx = 1;        // down-right gradient
            } else if (angle < 5.0 * pi / 8.0) {
                dy = 1; dx = 0;        // vertical gradient
            } else {
                dy = 1; dx = -1;       // down-left gradient
            }
            auto m_at = [&](int yy, int xx) {
                if (yy < 0 || yy >= h || xx < 0 || xx >= w)
                    return 0.0;
                return mag[static_cast<std::size_t>(yy) * w + xx];
            };
            if (mag[i] > m_at(y - dy, x - dx) && mag[i] >= m_at(y + dy, x + dx))
                thin[i] = mag[i];
        }
    }

    // Double threshold then hysteresis from the strong pixels.
    std::vector<std::uint8_t> state(mag.size(), 0); // 0 none, 1 weak, 2 strong
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < thin.size(); ++i) {
        if (thin[i] > theta_up) {
            state[i] = 2;
            stack.push_back(i);
        } else if (thin[i] > theta_low) {
            state[i] = 1;
        }
    }
    std::vector<float> edges(mag.size(), 0.0f);
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        edges[i] = 1.0f;
        const int y = static_cast<int>(i) / w;
        const int x = static_cast<int>(i) % w;
        for (int ny = y - 1; ny <= y + 1; ++ny) {
            for (int nx = x - 1; nx <= x + 1; ++nx) {
                if (ny < 0 || ny >= h || nx < 0 || nx >= w)
                    continue;
                const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
                if (state[ni] == 1) {
                    state[ni] = 2;
                    stack.push_back(ni);
                }
            }
        }
    }
    return DenseMap(h, w, 1, std::move(edges));
}

} // namespace sidkit
