#include "sidkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sidkit {
namespace {

std::vector<std::uint8_t> rasterize(const ShapeSpec& s, int h, int w) {
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(h) * w, 0);
    if (s.kind == ShapeKind::Disk) {
        const int r = s.size_a;
        for (int y = std::max(0, s.center_y - r); y <= std::min(h - 1, s.center_y + r); ++y)
            for (int x = std::max(0, s.center_x - r); x <= std::min(w - 1, s.center_x + r); ++x)
                if ((y - s.center_y) * (y - s.center_y) + (x - s.center_x) * (x - s.center_x) <=
                    r * r)
                    mask[static_cast<std::size_t>(y) * w + x] = 1;
    } else {
        const int hh = s.size_a / 2, hw = s.size_b / 2;
        for (int y = std::max(0, s.center_y - hh);
             y <= std::min(h - 1, s.center_y - hh + s.size_a - 1); ++y)
            for (int x = std::max(0, s.center_x - hw);
                 x <= std::min(w - 1, s.center_x - hw + s.size_b - 1); ++x)
                mask[static_cast<std::size_t>(y) * w + x] = 1;
    }
    return mask;
}

bool in_bounds(const ShapeSpec& s, int h, int w, int margin) {
    if (s.kind == ShapeKind::Disk) {
        return s.center_y - s.size_a >= margin && s.center_y + s.size_a < h - margin &&
               s.center_x - s.size_a >= margin && s.center_x + s.size_a < w - margin;
    }
    const int hh = s.size_a / 2, hw = s.size_b / 2;
    return s.center_y - hh >= margin && s.center_y - hh + s.size_a - 1 < h - margin &&
           s.center_x - hw >= margin && s.center_x - hw + s.size_b - 1 < w - margin;
}

} // namespace

SceneBundle generate(const SceneSpec& spec) {
    if (spec.height < 4 || spec.width < 4)
        throw ValueError("generate: scene must be at least 4x4");
    for (const ShapeSpec& s : spec.shapes) {
        if (s.intensity < 0.0 || s.intensity > 1.0)
            throw ValueError("generate: shape intensity outside [0,1]");
        if (s.size_a < 1 || (s.kind == ShapeKind::Rectangle && s.size_b < 1))
            throw ValueError("generate: degenerate shape size");
        if (!in_bounds(s, spec.height, spec.width, 0))
            throw ValueError("generate: shape does not fit within bounds");
    }

    const int h = spec.height, w = spec.width;
    const std::size_t n = static_cast<std::size_t>(h) * w;

    std::vector<std::vector<std::uint8_t>> masks;
    masks.reserve(spec.shapes.size());
    for (const ShapeSpec& s : spec.shapes)
        masks.push_back(rasterize(s, h, w));

    for (std::size_t a = 0; a < masks.size(); ++a) {
        for (std::size_t b = a + 1; b < masks.size(); ++b) {
            long long inter = 0, area_a = 0, area_b = 0;
            for (std::size_t i = 0; i < n; ++i) {
                inter += masks[a][i] && masks[b][i];
                area_a += masks[a][i];
                area_b += masks[b][i];
            }
            const double ratio =
                static_cast<double>(inter) / static_cast<double>(std::min(area_a, area_b));
            if (ratio > spec.max_overlap)
                throw ValueError("generate: shapes overlap beyond the configured ratio");
        }
    }

    std::vector<std::int32_t> labels(n, 0);
    for (std::size_t k = 0; k < masks.size(); ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (masks[k][i])
                labels[i] = static_cast<std::int32_t>(k) + 1; // later shapes win overlaps

    std::vector<float> saliency(n, 0.0f);
    for (std::size_t i = 0; i < n; ++i)
        saliency[i] = labels[i] > 0 ? 1.0f : 0.0f;

    // Outline ring: background pixels 8-adjacent to any shape pixel. Keeping
    // the wall outside the shapes lets the random walk fill whole instances,
    // and 8-adjacency leaves no diagonal gap a Bresenham line could slip
    // through.
    std::vector<float> boundary(n, 0.0f);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (labels[i] != 0)
                continue;
            bool near_shape = false;
            for (int dy = -1; dy <= 1 && !near_shape; ++dy)
                for (int dx = -1; dx <= 1 && !near_shape; ++dx) {
                    const int ny = y + dy, nx = x + dx;
                    if (ny >= 0 && ny < h && nx >= 0 && nx < w &&
                        labels[static_cast<std::size_t>(ny) * w + nx] != 0)
                        near_shape = true;
                }
            if (near_shape)
                boundary[i] = 1.0f;
        }
    }

    // Mass center per shape, floor of the coordinate means, matching the
    // centroid extraction rounding.
    std::vector<std::pair<int, int>> centers(masks.size());
    for (std::size_t k = 0; k < masks.size(); ++k) {
        long long sy = 0, sx = 0, cnt = 0;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                if (masks[k][static_cast<std::size_t>(y) * w + x]) {
                    sy += y;
                    sx += x;
                    ++cnt;
                }
        centers[k] = {static_cast<int>(sy / cnt), static_cast<int>(sx / cnt)};
    }

    std::vector<OffsetField::Vec> vecs(n);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (labels[i] > 0) {
                const auto [cy, cx] = centers[static_cast<std::size_t>(labels[i]) - 1];
                vecs[i].dy = static_cast<float>(cy - y);
                vecs[i].dx = static_cast<float>(cx - x);
            }
        }
    }

    std::mt19937_64 gen(spec.seed);
    std::vector<float> image(n * 3);
    for (std::size_t i = 0; i < n; ++i) {
        double base = spec.background;
        if (labels[i] > 0)
            base = spec.shapes[static_cast<std::size_t>(labels[i]) - 1].intensity;
        double jitter = 0.0;
        if (spec.texture > 0.0) {
            const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
            jitter = (2.0 * u - 1.0) * spec.texture;
        }
        const float v = static_cast<float>(std::clamp(base + jitter, 0.0, 1.0));
        image[3 * i] = v;
        image[3 * i + 1] = v;
        image[3 * i + 2] = v;
    }

    SceneBundle bundle;
    bundle.image = DenseMap::probability(h, w, 3, std::move(image));
    bundle.saliency = DenseMap::probability(h, w, 1, std::move(saliency));
    bundle.boundary = DenseMap::probability(h, w, 1, std::move(boundary));
    bundle.offsets = OffsetField(h, w, std::move(vecs));
    bundle.labels = InstanceLabelMap(h, w, std::move(labels));
    bundle.count = static_cast<int>(spec.shapes.size());
    return bundle;
}

SceneSpec random_scene(std::uint64_t seed, int height, int width, int min_shapes,
                       int max_shapes, double texture) {
    if (min_shapes < 0 || max_shapes < min_shapes)
        throw ValueError("random_scene: bad shape count range");
    std::mt19937_64 gen(seed ^ 0x9e3779b97f4a7c15ull);
    auto uniform_int = [&gen](int lo, int hi) {
        return lo + static_cast<int>(gen() % static_cast<std::uint64_t>(hi - lo + 1));
    };

    SceneSpec spec;
    spec.height = height;
    spec.width = width;
    spec.seed = seed;
    spec.texture = texture;

    const int target = uniform_int(min_shapes, max_shapes);
    std::vector<std::vector<std::uint8_t>> placed;

    // Rejection placement with a 2-pixel dilation so rings stay disjoint.
    const std::size_t n = static_cast<std::size_t>(height) * width;
    int attempts = 0;
    while (static_cast<int>(spec.shapes.size()) < target && attempts < 400) {
        ++attempts;
        ShapeSpec s;
        s.kind = (gen() & 1) ? ShapeKind::Disk : ShapeKind::Rectangle;
        if (s.kind == ShapeKind::Disk) {
            s.size_a = uniform_int(3, 5);
        } else {
            s.size_a = uniform_int(6, 11);
            s.size_b = uniform_int(6, 11);
        }
        s.center_y = uniform_int(0, height - 1);
        s.center_x = uniform_int(0, width - 1);
        s.intensity = 0.75 + 0.05 * static_cast<double>(spec.shapes.size() % 5);
        if (!in_bounds(s, height, width, 2))
            continue;

        std::vector<std::uint8_t> mask = rasterize(s, height, width);
        std::vector<std::uint8_t> dilated(n, 0);
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x) {
                if (!mask[static_cast<std::size_t>(y) * width + x])
                    continue;
                for (int dy = -2; dy <= 2; ++dy)
                    for (int dx = -2; dx <= 2; ++dx) {
                        const int ny = y + dy, nx = x + dx;
                        if (ny >= 0 && ny < height && nx >= 0 && nx < width)
                            dilated[static_cast<std::size_t>(ny) * width + nx] = 1;
                    }
            }
        bool clash = false;
        for (const auto& other : placed) {
            for (std::size_t i = 0; i < n && !clash; ++i)
                clash = dilated[i] && other[i];
            if (clash)
                break;
        }
        if (clash)
            continue;
        placed.push_back(std::move(mask));
        spec.shapes.push_back(s);
    }
    return spec;
}

} // namespace sidkit
