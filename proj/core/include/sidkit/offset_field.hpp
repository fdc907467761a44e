#pragma once

#include <utility>
#include <vector>

#include "sidkit/errors.hpp"

namespace sidkit {

/// Per-pixel 2-vector (dy, dx) in pixel units pointing toward the pixel's
/// instance centroid. The pointed-to location p + v is clamped into the
/// image rect at construction, so chases never leave the grid.
class OffsetField {
public:
    struct Vec {
        float dy = 0.0f;
        float dx = 0.0f;
        bool operator==(const Vec&) const = default;
    };

    OffsetField() = default;

    OffsetField(int height, int width)
        : height_(height), width_(width),
          vecs_(static_cast<std::size_t>(check(height, width))) {}

    OffsetField(int height, int width, std::vector<Vec> vectors)
        : height_(height), width_(width), vecs_(std::move(vectors)) {
        if (vecs_.size() != static_cast<std::size_t>(check(height, width)))
            throw ValueError("OffsetField: vector count does not match height*width");
        clamp_targets();
    }

    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t pixels() const { return vecs_.size(); }

    Vec& at(int y, int x) { return vecs_[static_cast<std::size_t>(y) * width_ + x]; }
    const Vec& at(int y, int x) const { return vecs_[static_cast<std::size_t>(y) * width_ + x]; }
    const std::vector<Vec>& vectors() const { return vecs_; }

    /// Pointed-to location p + v, rounded to the nearest pixel and clamped.
    std::pair<int, int> target(int y, int x) const;

    bool operator==(const OffsetField&) const = default;

private:
    static std::int64_t check(int height, int width) {
        if (height <= 0 || width <= 0)
            throw ValueError("OffsetField: dimensions must be positive");
        return static_cast<std::int64_t>(height) * width;
    }
    void clamp_targets();

    int height_ = 0;
    int width_ = 0;
    std::vector<Vec> vecs_;
};

} // namespace sidkit
