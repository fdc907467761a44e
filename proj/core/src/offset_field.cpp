#include "sidkit/offset_field.hpp"

#include <algorithm>
#include <cmath>

namespace sidkit {

std::pair<int, int> OffsetField::target(int y, int x) const {
    const Vec& v = at(y, x);
    int ty = static_cast<int>(std::lround(static_cast<double>(y) + v.dy));
    int tx = static_cast<int>(std::lround(static_cast<double>(x) + v.dx));
    ty = std::clamp(ty, 0, height_ - 1);
    tx = std::clamp(tx, 0, width_ - 1);
    return {ty, tx};
}

void OffsetField::clamp_targets() {
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            Vec& v = at(y, x);
            const double ty = std::clamp(static_cast<double>(y) + v.dy, 0.0,
                                         static_cast<double>(height_ - 1));
            const double tx = std::clamp(static_cast<double>(x) + v.dx, 0.0,
                                         static_cast<double>(width_ - 1));
            v.dy = static_cast<float>(ty - y);
            v.dx = static_cast<float>(tx - x);
        }
    }
}

} // namespace sidkit
