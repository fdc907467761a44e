#include "sidkit/label_map.hpp"

#include <algorithm>
#include <unordered_map>

namespace sidkit {

void InstanceLabelMap::validate_contiguous() {
    std::int32_t max_id = 0;
    for (std::int32_t v : labels_) {
        if (v < 0)
            throw ValueError("InstanceLabelMap: negative label id");
        max_id = std::max(max_id, v);
    }
    std::vector<bool> seen(static_cast<std::size_t>(max_id) + 1, false);
    for (std::int32_t v : labels_)
        seen[static_cast<std::size_t>(v)] = true;
    for (std::int32_t id = 1; id <= max_id; ++id)
        if (!seen[static_cast<std::size_t>(id)])
            throw ValueError("InstanceLabelMap: label ids are not contiguous");
    count_ = max_id;
}

std::vector<int> InstanceLabelMap::areas() const {
    std::vector<int> out(static_cast<std::size_t>(count_), 0);
    for (std::int32_t v : labels_)
        if (v > 0)
            ++out[static_cast<std::size_t>(v) - 1];
    return out;
}

InstanceLabelMap compact_labels(int height, int width, const std::vector<std::int32_t>& raw) {
    std::unordered_map<std::int32_t, std::int32_t> remap;
    std::vector<std::int32_t> out(raw.size(), 0);
    std::int32_t next = 1;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] <= 0)
            continue;
        auto [it, inserted] = remap.try_emplace(raw[i], next);
        if (inserted)
            ++next;
        out[i] = it->second;
    }
    return InstanceLabelMap(height, width, std::move(out));
}

} // namespace sidkit
