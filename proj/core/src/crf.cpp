#include "sidkit/crf.hpp"

#include <cmath>
#include <vector>

namespace sidkit {
namespace {

// Mean field with fixed unaries P and pairwise kernel
//   k(i,j) = w1 exp(-|p|^2 / 2 sa^2 - |I|^2 / 2 sb^2) + w2 exp(-|p|^2 / 2 sg^2).
// Per iteration: Q'_i(l) ∝ P_i(l) exp(-sum_{j != i} k(i,j) Q_j(1-l)).
// Both label messages are accumulated by the same loop so that swapping the
// input channels swaps the output channels exactly. With w1 = w2 = 0 every
// message is exactly zero and the input passes through bit-for-bit.
DenseMap mean_field(const DenseMap& prob, const std::vector<double>& features, int feat_dim,
                    const CrfConfig& cfg) {
    cfg.validate();
    if (prob.channels() != 2)
        throw ValueError("crf_refine: probability map must have 2 channels");
    const int h = prob.height();
    const int w = prob.width();
    const std::size_t n = prob.pixels();

    for (std::size_t i = 0; i < n; ++i) {
        const double sum = static_cast<double>(prob.data()[2 * i]) +
                           static_cast<double>(prob.data()[2 * i + 1]);
        if (std::abs(sum - 1.0) > 1e-6)
            throw ValueError("crf_refine: input rows must sum to 1");
    }

    const double inv_2sa2 = 1.0 / (2.0 * cfg.sigma_alpha * cfg.sigma_alpha);
    const double inv_2sb2 = 1.0 / (2.0 * cfg.sigma_beta * cfg.sigma_beta);
    const double inv_2sg2 = 1.0 / (2.0 * cfg.sigma_gamma * cfg.sigma_gamma);

    auto kernel = [&](std::size_t i, std::size_t j) {
        const int yi = static_cast<int>(i) / w, xi = static_cast<int>(i) % w;
        const int yj = static_cast<int>(j) / w, xj = static_cast<int>(j) % w;
        const double dp2 = static_cast<double>(yi - yj) * (yi - yj) +
                           static_cast<double>(xi - xj) * (xi - xj);
        double dc2 = 0.0;
        for (int c = 0; c < feat_dim; ++c) {
            const double d = features[i * feat_dim + c] - features[j * feat_dim + c];
            dc2 += d * d;
        }
        return cfg.w1 * std::exp(-dp2 * inv_2sa2 - dc2 * inv_2sb2) +
               cfg.w2 * std::exp(-dp2 * inv_2sg2);
    };

    // Cache the kernel matrix when it fits; recompute per pass otherwise.
    const bool cache = n * n <= (16ull << 20);
    std::vector<double> kmat;
    if (cache) {
        kmat.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (j != i)
                    kmat[i * n + j] = kernel(i, j);
    }

    std::vector<double> p0(n), p1(n), q0(n), q1(n);
    for (std::size_t i = 0; i < n; ++i) {
        p0[i] = prob.data()[2 * i];
        p1[i] = prob.data()[2 * i + 1];
        q0[i] = p0[i];
        q1[i] = p1[i];
    }

    std::vector<double> m0(n), m1(n);
    for (int iter = 0; iter < cfg.iterations; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc0 = 0.0, acc1 = 0.0;
            if (cache) {
                const double* row = kmat.data() + i * n;
                for (std::size_t j = 0; j < n; ++j) {
                    acc0 += row[j] * q0[j];
                    acc1 += row[j] * q1[j];
                }
            } else {
                for (std::size_t j = 0; j < n; ++j) {
                    if (j == i)
                        continue;
                    const double k = kernel(i, j);
                    acc0 += k * q0[j];
                    acc1 += k * q1[j];
                }
            }
            m0[i] = acc0;
            m1[i] = acc1;
        }
        for (std::size_t i = 0; i < n; ++i) {
            // Potts: label l pays the mass of the opposite label.
            const double u0 = p0[i] * std::exp(-m1[i]);
            const double u1 = p1[i] * std::exp(-m0[i]);
            const double z = u0 + u1;
            q0[i] = u0 / z;
            q1[i] = u1 / z;
        }
    }

    std::vector<float> out(n * 2);
    for (std::size_t i = 0; i < n; ++i) {
        out[2 * i] = static_cast<float>(q0[i]);
        out[2 * i + 1] = static_cast<float>(q1[i]);
    }
    return DenseMap(h, w, 2, std::move(out));
}

} // namespace

DenseMap crf_refine(const DenseMap& prob, const GrayImage& image, const CrfConfig& cfg) {
    if (image.height() != prob.height() || image.width() != prob.width())
        throw ShapeError("crf_refine: image/probability shape mismatch");
    std::vector<double> features(prob.pixels());
    for (std::size_t i = 0; i < features.size(); ++i)
        features[i] = static_cast<double>(image.data()[i]);
    return mean_field(prob, features, 1, cfg);
}

DenseMap crf_refine(const DenseMap& prob, const DenseMap& image, const CrfConfig& cfg) {
    if (image.channels() != 3)
        throw ValueError("crf_refine: color image must have 3 channels");
    if (!image.same_grid(prob.height(), prob.width()))
        throw ShapeError("crf_refine: image/probability shape mismatch");
    std::vector<double> features(prob.pixels() * 3);
    for (std::size_t i = 0; i < prob.pixels(); ++i)
        for (int c = 0; c < 3; ++c)
            features[i * 3 + c] = 255.0 * static_cast<double>(image.data()[i * 3 + c]);
    return mean_field(prob, features, 3, cfg);
}

DenseMap unary_from_saliency(const DenseMap& saliency) {
    require_probability(saliency, "unary_from_saliency");
    std::vector<float> data(saliency.pixels() * 2);
    for (std::size_t i = 0; i < saliency.pixels(); ++i) {
        const float s = saliency.data()[i];
        data[2 * i] = 1.0f - s;
        data[2 * i + 1] = s;
    }
    return DenseMap(saliency.height(), saliency.width(), 2, std::move(data));
}

} // namespace sidkit
