#pragma once

#include <cstdint>
#include <vector>

#include "sidkit/errors.hpp"

namespace sidkit {

/// Per-pixel instance labeling: 0 = background, 1..count() = instance ids.
/// Ids always form a contiguous range with every id present at least once.
class InstanceLabelMap {
public:
    InstanceLabelMap() = default;

    InstanceLabelMap(int height, int width, std::vector<std::int32_t> labels)
        : height_(height), width_(width), labels_(std::move(labels)) {
        if (height <= 0 || width <= 0)
            throw ValueError("InstanceLabelMap: dimensions must be positive");
        if (labels_.size() != static_cast<std::size_t>(height) * width)
            throw ValueError("InstanceLabelMap: label count does not match height*width");
        validate_contiguous();
    }

    static InstanceLabelMap background(int height, int width) {
        return InstanceLabelMap(height, width,
                                std::vector<std::int32_t>(static_cast<std::size_t>(height) * width, 0));
    }

    int height() const { return height_; }
    int width() const { return width_; }
    int count() const { return count_; }

    std::int32_t at(int y, int x) const { return labels_[static_cast<std::size_t>(y) * width_ + x]; }
    const std::vector<std::int32_t>& labels() const { return labels_; }

    /// Pixel area of each instance id 1..count(), index 0 holding instance 1.
    std::vector<int> areas() const;

    bool operator==(const InstanceLabelMap&) const = default;

private:
    void validate_contiguous();

    int height_ = 0;
    int width_ = 0;
    int count_ = 0;
    std::vector<std::int32_t> labels_;
};

/// Remaps arbitrary non-negative raw labels to a contiguous 1..T range,
/// preserving first-appearance order in row-major scan.
InstanceLabelMap compact_labels(int height, int width, const std::vector<std::int32_t>& raw);

} // namespace sidkit
