#pragma once

#include "sidkit/affinity.hpp"
#include "sidkit/dense_map.hpp"
#include "sidkit/label_map.hpp"

namespace sidkit {

struct RandomWalkConfig {
    int steps = 16;  // power of M applied to the seeds
    int chi = 4;     // affinity distillation power
    int radius = 5;  // neighborhood radius in pixels

    void validate() const {
        if (steps < 1)
            throw ValueError("RandomWalkConfig: steps must be >= 1");
        if (chi < 1)
            throw ValueError("RandomWalkConfig: chi must be >= 1");
        if (radius < 1)
            throw ValueError("RandomWalkConfig: radius must be >= 1");
    }
};

/// Seed vector for one instance: indicator(label == id) * saliency * (1 - B).
std::vector<double> walk_seed(const InstanceLabelMap& instances, int id,
                              const DenseMap& boundary, const DenseMap& saliency);

/// Random-walk refinement: every instance's saliency mass is propagated
/// through M = D^-1 H^chi for cfg.steps steps; a pixel takes the instance
/// with the largest propagated value when that value exceeds 1e-6, else
/// background. Ties go to the lower instance id. Surviving instances are
/// relabeled contiguously.
InstanceLabelMap random_walk(const InstanceLabelMap& instances, const DenseMap& boundary,
                             const DenseMap& saliency, const RandomWalkConfig& cfg);

/// Same, reusing a prebuilt affinity operator for the boundary map.
InstanceLabelMap random_walk(const InstanceLabelMap& instances, const DenseMap& boundary,
                             const DenseMap& saliency, const AffinityOperator& affinity,
                             int steps);

} // namespace sidkit
