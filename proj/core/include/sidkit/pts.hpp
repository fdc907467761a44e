#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sidkit/crf.hpp"
#include "sidkit/dense_map.hpp"

namespace sidkit {

/// Flat weight vector standing in for the saliency branch parameters.
struct ParamVector {
    std::vector<double> values;
    int iteration_index = 0;
};

/// One single-channel probability map per training image.
using LabelSet = std::vector<DenseMap>;

/// Elementwise omega = alpha * prev + (1 - alpha) * curr. The degenerate
/// alphas return their argument untouched; otherwise each coordinate is
/// clamped into [min(prev,curr), max(prev,curr)] to absorb rounding.
ParamVector ema_refresh(const ParamVector& prev, const ParamVector& curr, double alpha);

struct PtsConfig {
    int iterations = 6;   // R
    int epochs = 8;       // E per iteration
    int refresh_from = 2; // EMA applies when r > refresh_from
    std::function<double(int)> alpha_rule = [](int r) {
        return static_cast<double>(r) / (r + 1);
    };

    void validate() const {
        if (iterations < 1)
            throw ValueError("PtsConfig: iterations must be >= 1");
        if (epochs < 1)
            throw ValueError("PtsConfig: epochs must be >= 1");
    }
};

/// Abstract trainer the loop drives; implementations must be deterministic
/// for a fixed seed.
class TrainerPort {
public:
    virtual ~TrainerPort() = default;
    virtual ParamVector train(const ParamVector& params, const LabelSet& labels,
                              int epochs) = 0;
    virtual LabelSet predict(const ParamVector& params) const = 0;
};

struct PtsIterationRecord {
    int r = 0;
    double alpha = 0.0;
    bool ema_applied = false;
    std::uint64_t label_hash = 0; // FNV-1a of the pseudo labels trained on
};

struct PtsResult {
    ParamVector params;
    std::vector<PtsIterationRecord> trail;
};

struct PtsObservation {
    int r = 0;
    double alpha = 0.0;
    bool ema_applied = false;
    const ParamVector* params = nullptr;      // weights closing iteration r
    const LabelSet* trained_labels = nullptr; // pseudo labels used at r
    const LabelSet* predictions = nullptr;    // predictions of those weights
};

using PtsObserver = std::function<void(const PtsObservation&)>;

std::uint64_t hash_labels(const LabelSet& labels);

/// The progressive loop: train E epochs on the current pseudo labels,
/// refresh by EMA once r exceeds refresh_from, then regenerate the labels
/// from CRF-refined predictions. Trainer failures rethrow with the iteration
/// index attached. Returns the final weights plus a replayable audit trail.
PtsResult run_pts(const LabelSet& init_labels, const ParamVector& init_params,
                  TrainerPort& trainer, const std::vector<GrayImage>& images,
                  const CrfConfig& crf_cfg, const PtsConfig& cfg,
                  const PtsObserver& observer = nullptr);

} // namespace sidkit
