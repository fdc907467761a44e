#include "sidkit/centroid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sidkit {

ChaseResult chase_offsets(const OffsetField& field, int max_iters, double eps) {
    if (max_iters < 1)
        throw ValueError("chase_offsets: max_iters must be >= 1");
    if (!(eps > 0.0))
        throw ValueError("chase_offsets: eps must be positive");

    const int h = field.height();
    const int w = field.width();
    const std::size_t n = field.pixels();

    ChaseResult res;
    res.field = field;
    res.converged.assign(n, 0);

    // The lookup field stays fixed, so every pixel's trajectory is
    // independent: each sweep composes the accumulated offsets with the
    // input field at the pointed-to pixel, and a pixel freezes at its own
    // fixed point the moment its update magnitude drops below eps.
    std::vector<OffsetField::Vec> updates(n);
    std::vector<std::uint8_t> apply(n, 0);
    for (int iter = 0; iter < max_iters; ++iter) {
        bool any_large = false;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * w + x;
                apply[i] = 0;
                if (res.converged[i])
                    continue;
                const auto [ty, tx] = res.field.target(y, x);
                const OffsetField::Vec u = field.at(ty, tx);
                const double mag = std::hypot(static_cast<double>(u.dy),
                                              static_cast<double>(u.dx));
                if (mag < eps) {
                    res.converged[i] = 1;
                } else {
                    updates[i] = u;
                    apply[i] = 1;
                    any_large = true;
                }
            }
        }
        if (!any_large) {
            res.all_converged = true;
            return res;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!apply[i])
                continue;
            OffsetField::Vec& v = res.field.at(static_cast<int>(i) / w, static_cast<int>(i) % w);
            v.dy += updates[i].dy;
            v.dx += updates[i].dx;
        }
        res.iterations = iter + 1;
    }
    // The flags should describe the returned field, so pixels whose final
    // applied update landed them on a fixed point count as converged.
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (res.converged[i])
                continue;
            const auto [ty, tx] = res.field.target(y, x);
            const OffsetField::Vec u = field.at(ty, tx);
            if (std::hypot(static_cast<double>(u.dy), static_cast<double>(u.dx)) < eps)
                res.converged[i] = 1;
        }
    }
    res.all_converged =
        std::all_of(res.converged.begin(), res.converged.end(), [](std::uint8_t c) { return c; });
    return res;
}

namespace {

CentroidSet extract_impl(const OffsetField& chased, double eps,
                         const std::vector<std::uint8_t>* mask) {
    const int h = chased.height();
    const int w = chased.width();

    std::vector<std::uint8_t> is_centroid(chased.pixels(), 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (mask && !(*mask)[i])
                continue;
            const OffsetField::Vec& v = chased.at(y, x);
            if (std::hypot(static_cast<double>(v.dy), static_cast<double>(v.dx)) < eps)
                is_centroid[i] = 1;
        }
    }

    // 8-connected component sweep in scan order; each component becomes one
    // centroid at floor of its coordinate means.
    CentroidSet out;
    std::vector<std::uint8_t> visited(chased.pixels(), 0);
    std::vector<std::pair<int, int>> stack;
    for (int sy = 0; sy < h; ++sy) {
        for (int sx = 0; sx < w; ++sx) {
            const std::size_t si = static_cast<std::size_t>(sy) * w + sx;
            if (!is_centroid[si] || visited[si])
                continue;
            long long sum_y = 0, sum_x = 0, count = 0;
            stack.clear();
            stack.emplace_back(sy, sx);
            visited[si] = 1;
            while (!stack.empty()) {
                const auto [y, x] = stack.back();
                stack.pop_back();
                sum_y += y;
                sum_x += x;
                ++count;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dy == 0 && dx == 0)
                            continue;
                        const int ny = y + dy, nx = x + dx;
                        if (ny < 0 || ny >= h || nx < 0 || nx >= w)
                            continue;
                        const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
                        if (is_centroid[ni] && !visited[ni]) {
                            visited[ni] = 1;
                            stack.emplace_back(ny, nx);
                        }
                    }
                }
            }
            out.points.push_back({static_cast<int>(sum_y / count),
                                  static_cast<int>(sum_x / count)});
        }
    }
    return out;
}

} // namespace

CentroidSet extract_centroids(const OffsetField& chased, double eps) {
    return extract_impl(chased, eps, nullptr);
}

CentroidSet extract_centroids(const OffsetField& chased, double eps,
                              const std::vector<std::uint8_t>& mask) {
    if (mask.size() != chased.pixels())
        throw ShapeError("extract_centroids: mask size mismatch");
    return extract_impl(chased, eps, &mask);
}

InstanceLabelMap assign_pixels(const OffsetField& field, const CentroidSet& centroids) {
    if (centroids.empty())
        throw ValueError("assign_pixels: empty centroid set");

    const int h = field.height();
    const int w = field.width();
    std::vector<std::int32_t> labels(field.pixels(), 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const OffsetField::Vec& v = field.at(y, x);
            const double py = y + static_cast<double>(v.dy);
            const double px = x + static_cast<double>(v.dx);
            double best = std::numeric_limits<double>::infinity();
            std::int32_t best_id = 1;
            for (std::size_t n = 0; n < centroids.points.size(); ++n) {
                const double dy = py - centroids.points[n].y;
                const double dx = px - centroids.points[n].x;
                const double d2 = dy * dy + dx * dx;
                if (d2 < best) {
                    best = d2;
                    best_id = static_cast<std::int32_t>(n) + 1;
                }
            }
            labels[static_cast<std::size_t>(y) * w + x] = best_id;
        }
    }
    return InstanceLabelMap(h, w, std::move(labels));
}

std::vector<std::uint8_t> binarize(const DenseMap& prob, float threshold) {
    std::vector<std::uint8_t> out(prob.pixels(), 0);
    for (std::size_t i = 0; i < prob.pixels(); ++i)
        out[i] = prob.data()[i * prob.channels()] >= threshold ? 1 : 0;
    return out;
}

InstanceLabelMap filter_salient(const InstanceLabelMap& instances, const DenseMap& saliency,
                                double theta) {
    require_probability(saliency, "filter_salient");
    if (!saliency.same_grid(instances.height(), instances.width()))
        throw ShapeError("filter_salient: saliency/instance shape mismatch");
    if (theta < 0.0 || theta > 1.0)
        throw ValueError("filter_salient: theta must lie in [0,1]");

    const std::vector<std::uint8_t> salient = binarize(saliency);
    const int t = instances.count();
    std::vector<long long> area(static_cast<std::size_t>(t) + 1, 0);
    std::vector<long long> overlap(static_cast<std::size_t>(t) + 1, 0);
    for (std::size_t i = 0; i < instances.labels().size(); ++i) {
        const std::int32_t id = instances.labels()[i];
        if (id == 0)
            continue;
        ++area[static_cast<std::size_t>(id)];
        if (salient[i])
            ++overlap[static_cast<std::size_t>(id)];
    }

    std::vector<std::int32_t> remap(static_cast<std::size_t>(t) + 1, 0);
    std::int32_t next = 1;
    for (std::int32_t id = 1; id <= t; ++id) {
        const double ratio = static_cast<double>(overlap[static_cast<std::size_t>(id)]) /
                             static_cast<double>(area[static_cast<std::size_t>(id)]);
        if (ratio > theta)
            remap[static_cast<std::size_t>(id)] = next++;
    }

    std::vector<std::int32_t> out(instances.labels().size(), 0);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = remap[static_cast<std::size_t>(instances.labels()[i])];
    return InstanceLabelMap(instances.height(), instances.width(), std::move(out));
}

double subitizing_loss(int t_star, int t) {
    const double d = static_cast<double>(t_star) - static_cast<double>(t);
    return d * d;
}

SubitizingGradient subitizing_gradient(const InstanceLabelMap& instances,
                                       const DenseMap& saliency, int t_star, int t) {
    require_probability(saliency, "subitizing_gradient");
    if (!saliency.same_grid(instances.height(), instances.width()))
        throw ShapeError("subitizing_gradient: shape mismatch");

    SubitizingGradient g;
    g.height = instances.height();
    g.width = instances.width();
    g.dy.assign(saliency.pixels(), 0.0);
    g.dx.assign(saliency.pixels(), 0.0);

    const std::vector<std::uint8_t> salient = binarize(saliency);
    for (std::uint8_t s : salient)
        g.salient_count += s;

    if (t_star == t || g.salient_count == 0)
        return g;

    const double value = 2.0 * (static_cast<double>(t_star) - static_cast<double>(t)) /
                         static_cast<double>(g.salient_count);
    for (std::size_t i = 0; i < salient.size(); ++i) {
        if (salient[i]) {
            g.dy[i] = value;
            g.dx[i] = value;
        }
    }
    return g;
}

} // namespace sidkit
