#pragma once

#include <cstdint>
#include <vector>

#include "sidkit/dense_map.hpp"
#include "sidkit/label_map.hpp"
#include "sidkit/offset_field.hpp"

namespace sidkit {

enum class ShapeKind { Disk, Rectangle };

struct ShapeSpec {
    ShapeKind kind = ShapeKind::Disk;
    int center_y = 0;
    int center_x = 0;
    int size_a = 0;          // disk radius, or rectangle height
    int size_b = 0;          // rectangle width (ignored for disks)
    double intensity = 0.8;  // in [0,1]
};

struct SceneSpec {
    int height = 0;
    int width = 0;
    std::vector<ShapeSpec> shapes;
    std::uint64_t seed = 0;
    double texture = 0.0;      // uniform image jitter amplitude
    double max_overlap = 0.0;  // allowed |A∩B| / min(|A|,|B|) between shapes
    double background = 0.15;
};

/// Mutually consistent ground-truth bundle: the saliency map is the union of
/// the shape masks, the boundary map is a one-pixel outline ring just outside
/// each shape, offsets point every shape pixel at its shape's mass center
/// (background carries zeros), and labels enumerate shapes in spec order.
struct SceneBundle {
    DenseMap image;     // 3 channels
    DenseMap saliency;  // single channel, {0,1}
    DenseMap boundary;  // single channel, {0,1}
    OffsetField offsets;
    InstanceLabelMap labels;
    int count = 0;      // T, the subitizing ground truth
};

SceneBundle generate(const SceneSpec& spec);

/// Seeded random scene: `count` shapes are drawn in [min_shapes, max_shapes],
/// placed with a 2-pixel border margin and pairwise gaps of at least 2
/// pixels so outline rings never touch another shape.
SceneSpec random_scene(std::uint64_t seed, int height, int width, int min_shapes,
                       int max_shapes, double texture = 0.0);

} // namespace sidkit
