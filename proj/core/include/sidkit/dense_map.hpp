#pragma once

#include <cstdint>
#include <vector>

#include "sidkit/errors.hpp"

namespace sidkit {

/// Dense H x W x C grid of floats, row-major and channel-minor:
/// value(y, x, c) lives at data[(y * width + x) * channels + c].
/// Carries saliency maps, boundary maps, probability maps and feature
/// tensors alike; probability maps additionally keep every value in [0,1].
class DenseMap {
public:
    DenseMap() = default;

    DenseMap(int height, int width, int channels)
        : height_(height), width_(width), channels_(channels),
          data_(static_cast<std::size_t>(check_dims(height, width, channels)), 0.0f) {}

    DenseMap(int height, int width, int channels, std::vector<float> data)
        : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
        if (data_.size() != static_cast<std::size_t>(check_dims(height, width, channels)))
            throw ValueError("DenseMap: data length does not match height*width*channels");
    }

    /// Constructs a map validated as a probability map: every value must lie
    /// in [0,1] within 1e-9 slop; slop is clamped away so the invariant holds.
    static DenseMap probability(int height, int width, int channels, std::vector<float> data);

    int height() const { return height_; }
    int width() const { return width_; }
    int channels() const { return channels_; }
    std::size_t size() const { return data_.size(); }
    std::size_t pixels() const { return static_cast<std::size_t>(height_) * width_; }

    float& at(int y, int x, int c = 0) {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }
    float at(int y, int x, int c = 0) const {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }

    const std::vector<float>& data() const { return data_; }
    std::vector<float>& data() { return data_; }

    bool same_shape(const DenseMap& o) const {
        return height_ == o.height_ && width_ == o.width_ && channels_ == o.channels_;
    }
    bool same_grid(int h, int w) const { return height_ == h && width_ == w; }

    bool operator==(const DenseMap& o) const = default;

private:
    static std::int64_t check_dims(int height, int width, int channels) {
        if (height <= 0 || width <= 0 || channels <= 0)
            throw ValueError("DenseMap: dimensions must be positive");
        return static_cast<std::int64_t>(height) * width * channels;
    }

    int height_ = 0;
    int width_ = 0;
    int channels_ = 0;
    std::vector<float> data_;
};

/// 8-bit grayscale image, intensities 0..255. Input for Canny and for the
/// CRF bilateral term.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int height, int width)
        : height_(height), width_(width),
          data_(static_cast<std::size_t>(check(height, width)), 0) {}
    GrayImage(int height, int width, std::vector<std::uint8_t> data)
        : height_(height), width_(width), data_(std::move(data)) {
        if (data_.size() != static_cast<std::size_t>(check(height, width)))
            throw ValueError("GrayImage: data length does not match height*width");
    }

    int height() const { return height_; }
    int width() const { return width_; }
    std::uint8_t& at(int y, int x) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    std::uint8_t at(int y, int x) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    const std::vector<std::uint8_t>& data() const { return data_; }

private:
    static std::int64_t check(int height, int width) {
        if (height <= 0 || width <= 0)
            throw ValueError("GrayImage: dimensions must be positive");
        return static_cast<std::int64_t>(height) * width;
    }

    int height_ = 0;
    int width_ = 0;
    std::vector<std::uint8_t> data_;
};

/// BT.601 luma of a 3-channel map with values in [0,1]:
/// intensity = round(255 * (0.299 R + 0.587 G + 0.114 B)).
GrayImage to_gray(const DenseMap& map);

/// Throws ValueError unless the map is single-channel with values in [0,1].
void require_probability(const DenseMap& map, const char* what);

} // namespace sidkit
