#pragma once

#include "sidkit/dense_map.hpp"

namespace sidkit {

/// Dense-CRF mean-field settings. Defaults carry the appearance kernel
/// weight w1 with spatial sigma_alpha and color sigma_beta, plus the
/// smoothness kernel weight w2 with sigma_gamma.
struct CrfConfig {
    double w1 = 4.0;
    double w2 = 3.0;
    double sigma_alpha = 49.0; // pixels
    double sigma_beta = 5.0;   // intensity, 0..255 scale
    double sigma_gamma = 3.0;  // pixels
    int iterations = 5;

    void validate() const {
        if (w1 < 0.0 || w2 < 0.0)
            throw ValueError("CrfConfig: kernel weights must be >= 0");
        if (!(sigma_alpha > 0.0) || !(sigma_beta > 0.0) || !(sigma_gamma > 0.0))
            throw ValueError("CrfConfig: sigmas must be positive");
        if (iterations < 1)
            throw ValueError("CrfConfig: iterations must be >= 1");
    }
};

/// Mean-field refinement of a 2-channel [background, foreground] probability
/// map under a Potts model with exact O(N^2) message passing. Rows of the
/// input must sum to 1 within 1e-6; the output is renormalized after every
/// iteration. Intended for desk-scale grids (<= 128x128).
DenseMap crf_refine(const DenseMap& prob, const GrayImage& image, const CrfConfig& cfg);

/// Same with a 3-channel image in [0,1]; color distances are taken on the
/// 0..255 scale so sigma_beta means the same thing for both overloads.
DenseMap crf_refine(const DenseMap& prob, const DenseMap& image, const CrfConfig& cfg);

/// Turns a single-channel saliency map s into the 2-channel unary [1-s, s].
DenseMap unary_from_saliency(const DenseMap& saliency);

} // namespace sidkit
