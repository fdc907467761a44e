#include "sidkit/toy_trainer.hpp"

#include <cmath>
#include <random>


namespace sidkit {

ToyTrainer::ToyTrainer(std::vector<GrayImage> images, double learning_rate, int steps_per_epoch)
    : images_(std::move(images)), learning_rate_(learning_rate),
      steps_per_epoch_(steps_per_epoch) {
    if (images_.empty())
        throw ValueError("ToyTrainer: needs at least one image");
    if (steps_per_epoch_ < 1)
        throw ValueError("ToyTrainer: steps_per_epoch must be >= 1");
}

ParamVector ToyTrainer::train(const ParamVector& params, const LabelSet& labels, int epochs) {
    if (params.values.size() != 2)
        throw ValueError("ToyTrainer: expects params [weight, bias]");
    if (labels.size() != images_.size())
        throw ShapeError("ToyTrainer: label/image counts disagree");

    double w = params.values[0];
    double b = params.values[1];
    std::size_t total = 0;
    for (const GrayImage& img : images_)
        total += img.data().size();

    for (int e = 0; e < epochs * steps_per_epoch_; ++e) {
        double gw = 0.0, gb = 0.0;
        for (std::size_t i = 0; i < images_.size(); ++i) {
            const GrayImage& img = images_[i];
            const DenseMap& lab = labels[i];
            if (!lab.same_grid(img.height(), img.width()) || lab.channels() != 1)
                throw ShapeError("ToyTrainer: label map shape mismatch");
            for (std::size_t p = 0; p < img.data().size(); ++p) {
                const double x = img.data()[p] / 255.0 - 0.5;
                const double z = w * x + b;
                const double s = 1.0 / (1.0 + std::exp(-z));
                const double d = s - static_cast<double>(lab.data()[p]);
                gw += d * x;
                gb += d;
            }
        }
        w -= learning_rate_ * gw / static_cast<double>(total);
        b -= learning_rate_ * gb / static_cast<double>(total);
    }

    ParamVector out;
    out.values = {w, b};
    out.iteration_index = params.iteration_index;
    return out;
}

LabelSet ToyTrainer::predict(const ParamVector& params) const {
    if (params.values.size() != 2)
        throw ValueError("ToyTrainer: expects params [weight, bias]");
    const double w = params.values[0];
    const double b = params.values[1];

    LabelSet out;
    out.reserve(images_.size());
    for (const GrayImage& img : images_) {
        std::vector<float> data(img.data().size());
        for (std::size_t p = 0; p < data.size(); ++p) {
            const double x = img.data()[p] / 255.0 - 0.5;
            data[p] = static_cast<float>(1.0 / (1.0 + std::exp(-(w * x + b))));
        }
        out.push_back(DenseMap::probability(img.height(), img.width(), 1, std::move(data)));
    }
    return out;
}

ToyPtsScene make_toy_pts_scene(std::uint64_t seed) {
    // One bright disk (the salient instance) plus two thin mid-intensity
    // distractor strips that the initial pseudo labels wrongly mark salient.
    // The intensity model commits to the strips at first; the CRF
    // regeneration wipes them and later rounds learn the corrected
    // threshold, so accuracy climbs over the loop.
    const int h = 28, w = 28;
    const int cy = 14, cx = 18, r = 6;
    std::vector<double> intensity(static_cast<std::size_t>(h) * w, 0.20);
    std::vector<float> clean(static_cast<std::size_t>(h) * w, 0.0f);
    std::vector<float> noisy(static_cast<std::size_t>(h) * w, 0.0f);

    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if ((y - cy) * (y - cy) + (x - cx) * (x - cx) <= r * r) {
                const std::size_t i = static_cast<std::size_t>(y) * w + x;
                intensity[i] = 0.70;
                clean[i] = 1.0f;
                noisy[i] = 1.0f;
            }
        }
    auto strip = [&](int y0, int x0, int hh, int ww) {
        for (int y = y0; y < y0 + hh; ++y)
            for (int x = x0; x < x0 + ww; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * w + x;
                intensity[i] = 0.45;
                noisy[i] = 1.0f;
            }
    };
    strip(4, 3, 1, 10);
    strip(20, 3, 2, 10);

    std::mt19937_64 gen(seed ^ 0xc2b2ae3d27d4eb4full);
    std::vector<std::uint8_t> img(intensity.size());
    for (std::size_t i = 0; i < intensity.size(); ++i) {
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        const double v = std::clamp(intensity[i] + (2.0 * u - 1.0) * 0.02, 0.0, 1.0);
        img[i] = static_cast<std::uint8_t>(std::lround(255.0 * v));
    }
    for (std::size_t i = 0; i < noisy.size(); ++i)
        if (static_cast<double>(gen() >> 11) * 0x1.0p-53 < 0.03)
            noisy[i] = 1.0f - noisy[i];

    ToyPtsScene scene;
    scene.images.emplace_back(h, w, std::move(img));
    scene.clean.push_back(DenseMap::probability(h, w, 1, std::move(clean)));
    scene.noisy.push_back(DenseMap::probability(h, w, 1, std::move(noisy)));

    // Kernels sized for the toy: appearance sigma tolerates the jitter but
    // separates the three intensity levels; the smoothness term erodes the
    // thin strips without threatening the disk.
    scene.crf.w1 = 2.0;
    scene.crf.w2 = 2.0;
    scene.crf.sigma_alpha = 3.0;
    scene.crf.sigma_beta = 15.0;
    scene.crf.sigma_gamma = 1.2;
    scene.crf.iterations = 2;
    return scene;
}

double pixel_accuracy(const LabelSet& predictions, const LabelSet& clean) {
    if (predictions.size() != clean.size())
        throw ShapeError("pixel_accuracy: set sizes disagree");
    std::size_t hits = 0, total = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (!predictions[i].same_shape(clean[i]))
            throw ShapeError("pixel_accuracy: map shapes disagree");
        for (std::size_t p = 0; p < predictions[i].size(); ++p) {
            const bool a = predictions[i].data()[p] >= 0.5f;
            const bool b = clean[i].data()[p] >= 0.5f;
            hits += a == b;
            ++total;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(total);
}

} // namespace sidkit
