#pragma once

#include <map>
#include <vector>

#include "sidkit/dense_map.hpp"
#include "sidkit/label_map.hpp"

namespace sidkit {

/// Binary pixel mask on an image grid.
struct PixelMask {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> bits;

    int area() const;
    bool same_grid(const PixelMask& o) const {
        return height == o.height && width == o.width;
    }
};

/// One mask per instance id 1..count(), in id order.
std::vector<PixelMask> masks_from_labels(const InstanceLabelMap& labels);

struct ScoredInstance {
    PixelMask mask; // never empty
    double score = 0.0;
};

/// |a ∩ b| / |a ∪ b|.
double mask_iou(const PixelMask& a, const PixelMask& b);

/// Mean saliency over the mask pixels, the default prediction confidence.
double mean_saliency_score(const PixelMask& mask, const DenseMap& saliency);

/// Average precision at mask-IoU threshold tau: predictions sorted by score
/// (ties keep insertion order), each greedily matched to the unmatched
/// ground truth of highest IoU when that IoU >= tau, all-point interpolated
/// area under the precision/recall curve. No ground truth or no predictions
/// gives 0.
double average_precision(const std::vector<ScoredInstance>& preds,
                         const std::vector<PixelMask>& gts, double tau);

enum class EvalMode { Pooled, PerImage };

struct ImageDetections {
    std::vector<ScoredInstance> preds;
    std::vector<PixelMask> gts;
};

struct EvalReport {
    EvalMode mode = EvalMode::Pooled;
    std::map<double, double> map_at;                     // tau -> mAP
    std::map<double, std::vector<double>> ap_per_image;  // tau -> per-image AP
};

/// mAP over a detection set. Pooled mode ranks all detections across images
/// on one precision/recall curve (matching stays within each image);
/// per-image mode averages the per-image APs.
EvalReport evaluate(const std::vector<ImageDetections>& images, const std::vector<double>& taus,
                    EvalMode mode = EvalMode::Pooled);

} // namespace sidkit
