#include "sidkit/dense_map.hpp"

#include <algorithm>
#include <cmath>

namespace sidkit {

DenseMap DenseMap::probability(int height, int width, int channels, std::vector<float> data) {
    constexpr float slop = 1e-9f;
    for (float& v : data) {
        if (!(v >= -slop && v <= 1.0f + slop))
            throw ValueError("probability map value outside [0,1]");
        v = std::clamp(v, 0.0f, 1.0f);
    }
    return DenseMap(height, width, channels, std::move(data));
}

GrayImage to_gray(const DenseMap& map) {
    if (map.channels() != 3)
        throw ValueError("to_gray: expected a 3-channel map");
    GrayImage out(map.height(), map.width());
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            const double luma = 0.299 * map.at(y, x, 0) + 0.587 * map.at(y, x, 1) +
                                0.114 * map.at(y, x, 2);
            const double v = std::round(255.0 * luma);
            out.at(y, x) = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
        }
    }
    return out;
}

void require_probability(const DenseMap& map, const char* what) {
    if (map.channels() != 1)
        throw ValueError(std::string(what) + ": expected a single-channel map");
    for (float v : map.data())
        if (!(v >= 0.0f && v <= 1.0f))
            throw ValueError(std::string(what) + ": values must lie in [0,1]");
}

} // namespace sidkit
