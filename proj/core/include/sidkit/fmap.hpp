#pragma once

#include <filesystem>

#include "sidkit/dense_map.hpp"
#include "sidkit/label_map.hpp"
#include "sidkit/offset_field.hpp"

namespace sidkit {

// FMAP: magic "FMAP", then height/width/channels as little-endian uint32,
// then float32 little-endian payload, row-major channel-minor.
// Any dimension above 65536 is refused on both read and write.

DenseMap load_map(const std::filesystem::path& path);
void save_map(const DenseMap& map, const std::filesystem::path& path);

/// Label maps travel as channels=1 FMAP with integer-valued floats.
InstanceLabelMap load_labels(const std::filesystem::path& path);
void save_labels(const InstanceLabelMap& labels, const std::filesystem::path& path);

/// Offset fields travel as channels=2 FMAP, channel 0 = dy, channel 1 = dx.
OffsetField load_offsets(const std::filesystem::path& path);
void save_offsets(const OffsetField& field, const std::filesystem::path& path);

} // namespace sidkit
