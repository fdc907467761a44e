#pragma once

#include "sidkit/pts.hpp"

namespace sidkit {

/// Per-pixel logistic regression on centered intensity, the stand-in model
/// for the progressive loop: params = [weight, bias], prediction =
/// sigmoid(w * (intensity/255 - 1/2) + b). One epoch runs a fixed number of
/// full-batch gradient steps on binary cross entropy against (possibly soft)
/// pseudo labels, so a run is deterministic for fixed inputs.
class ToyTrainer : public TrainerPort {
public:
    explicit ToyTrainer(std::vector<GrayImage> images, double learning_rate = 5.0,
                        int steps_per_epoch = 60);

    ParamVector train(const ParamVector& params, const LabelSet& labels, int epochs) override;
    LabelSet predict(const ParamVector& params) const override;

    static ParamVector initial_params() { return ParamVector{{0.0, 0.0}, 0}; }

    const std::vector<GrayImage>& images() const { return images_; }

private:
    std::vector<GrayImage> images_;
    double learning_rate_;
    int steps_per_epoch_;
};

/// Pixel accuracy of predictions thresholded at 0.5 against clean masks.
double pixel_accuracy(const LabelSet& predictions, const LabelSet& clean);

/// The scripted noisy-label scene the progressive loop is exercised on: a
/// textured disk image, its clean mask, and pseudo labels corrupted by a
/// false-positive blob, a hole and seeded pixel flips. Carries CRF settings
/// sized for the scene's contrast and jitter.
struct ToyPtsScene {
    std::vector<GrayImage> images;
    LabelSet clean;
    LabelSet noisy;
    CrfConfig crf;
};

ToyPtsScene make_toy_pts_scene(std::uint64_t seed);

} // namespace sidkit
