#pragma once

#include <filesystem>
#include <string>

#include "sidkit/centroid.hpp"
#include "sidkit/crf.hpp"
#include "sidkit/random_walk.hpp"

namespace sidkit {

/// Knobs for the full saliency + boundary + offsets -> instances pipeline.
/// Loadable from a key=value text file; unknown keys are rejected and every
/// value is validated against the owning module's bounds.
struct PipelineConfig {
    double theta = 0.5;   // salient-instance IoU filter threshold
    double eps = 0.5;     // fixed-point tolerance, pixels
    int max_iters = 100;  // chase cap
    int radius = 5;       // affinity neighborhood
    int chi = 4;          // affinity power
    int steps = 16;       // walk steps
    CrfConfig crf;
    std::uint64_t seed = 0;

    static PipelineConfig load(const std::filesystem::path& path);
    /// Applies one key=value assignment; throws ValueError on unknown keys
    /// or unparsable values.
    void set(const std::string& key, const std::string& value);
    void validate() const;

    RandomWalkConfig walk() const { return {steps, chi, radius}; }
};

struct AssembleResult {
    InstanceLabelMap labels;
    int count = 0;              // T*
    std::vector<int> areas;     // per surviving instance
    std::vector<double> scores; // mean saliency per surviving instance
};

/// Instance assembly: chase the offsets, extract centroids inside the
/// binarized salient region, assign salient pixels to centroids, drop
/// instances failing the saliency-overlap filter and refine by boundary
/// random walk. A scene with no salient centroid yields an all-background
/// labeling with count 0. Throws EmptyCentroids when the chased field has
/// no fixed point anywhere.
AssembleResult assemble(const DenseMap& saliency, const DenseMap& boundary,
                        const OffsetField& offsets, const PipelineConfig& cfg);

} // namespace sidkit
