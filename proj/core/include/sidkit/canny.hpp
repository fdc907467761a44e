#pragma once

#include "sidkit/dense_map.hpp"

namespace sidkit {

/// Canny thresholds either fixed by hand or derived from the gray median m:
/// theta_low = max(0, 0.67 m), theta_up = min(255, 1.33 m).
struct CannyConfig {
    enum class Mode { Auto, Manual };

    Mode mode = Mode::Auto;
    double theta_low = 0.0;   // intensity units, 0..255
    double theta_up = 0.0;
    double gaussian_sigma = 1.4;

    static CannyConfig automatic(double sigma = 1.4);
    /// Manual thresholds; values are clipped into [0,255] and must satisfy
    /// low < up after clipping.
    static CannyConfig manual(double low, double up, double sigma = 1.4);
};

/// Full edge pipeline: Gaussian blur, Sobel gradients, non-maximum
/// suppression, double threshold, 8-connected hysteresis. Returns a binary
/// single-channel map with values in {0,1}. A constant image yields an
/// all-zero map.
DenseMap canny(const GrayImage& image, const CannyConfig& cfg);

/// The thresholds a config resolves to for a given image (auto mode reads
/// the image median; manual mode returns the clipped pair).
std::pair<double, double> canny_thresholds(const GrayImage& image, const CannyConfig& cfg);

} // namespace sidkit
