#include "sidkit/affinity.hpp"

#include <algorithm>
#include <cmath>

namespace sidkit {
namespace {

// Max of B over the Bresenham line from a to b, endpoints included.
// Callers pass a <= b in linear order so the walk direction is canonical.
double line_max(const DenseMap& boundary, int y0, int x0, int y1, int x1) {
    const int dx = std::abs(x1 - x0);
    const int dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1;
    const int sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    int y = y0, x = x0;
    double best = 0.0;
    while (true) {
        best = std::max(best, static_cast<double>(boundary.at(y, x)));
        if (y == y1 && x == x1)
            break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y += sy;
        }
    }
    return best;
}

} // namespace

AffinityOperator AffinityOperator::build(const DenseMap& boundary, int radius, int chi,
                                         std::size_t memory_budget_bytes) {
    require_probability(boundary, "build_affinity");
    if (radius < 1)
        throw ValueError("build_affinity: radius must be >= 1");
    if (chi < 1)
        throw ValueError("build_affinity: chi must be >= 1");

    const int h = boundary.height();
    const int w = boundary.width();
    const std::size_t n = static_cast<std::size_t>(h) * w;

    // Neighborhood offsets within Euclidean distance <= radius, in linear
    // order so each row's columns come out sorted.
    std::vector<std::pair<int, int>> offsets;
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            if (dy * dy + dx * dx <= radius * radius)
                offsets.emplace_back(dy, dx);

    const std::size_t est_entries = n * offsets.size();
    const std::size_t est_bytes = est_entries * (sizeof(std::uint32_t) + 2 * sizeof(double)) +
                                  n * (sizeof(std::size_t) + 2 * sizeof(double));
    if (est_bytes > memory_budget_bytes)
        throw ValueError("build_affinity: neighborhood exceeds the memory budget");

    AffinityOperator op;
    op.height_ = h;
    op.width_ = w;
    op.radius_ = radius;
    op.chi_ = chi;
    op.row_ptr_.assign(n + 1, 0);
    op.cols_.reserve(est_entries);
    op.h_.reserve(est_entries);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            for (const auto& [dy, dx] : offsets) {
                const int ny = y + dy, nx = x + dx;
                if (ny < 0 || ny >= h || nx < 0 || nx >= w)
                    continue;
                const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
                double value;
                if (j == i)
                    value = 1.0 - boundary.at(y, x);
                else if (j > i)
                    value = 1.0 - line_max(boundary, y, x, ny, nx);
                else
                    value = -1.0; // filled from the mirrored entry below
                op.cols_.push_back(static_cast<std::uint32_t>(j));
                op.h_.push_back(value);
            }
            op.row_ptr_[i + 1] = op.cols_.size();
        }
    }

    // Mirror the upper triangle into the lower one; the pattern itself is
    // symmetric by construction.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t e = op.row_ptr_[i]; e < op.row_ptr_[i + 1]; ++e) {
            const std::size_t j = op.cols_[e];
            if (j >= i)
                break;
            const std::size_t lo = op.row_ptr_[j];
            const std::size_t hi = op.row_ptr_[j + 1];
            const auto it = std::lower_bound(op.cols_.begin() + static_cast<std::ptrdiff_t>(lo),
                                             op.cols_.begin() + static_cast<std::ptrdiff_t>(hi),
                                             static_cast<std::uint32_t>(i));
            op.h_[e] = op.h_[static_cast<std::size_t>(it - op.cols_.begin())];
        }
    }

    // H^chi by repeated masked products: fill-in outside the neighborhood
    // pattern is dropped, keeping the operator local.
    op.hchi_ = op.h_;
    if (chi > 1) {
        std::vector<double> next(op.h_.size(), 0.0);
        std::vector<std::ptrdiff_t> slot(n, -1);
        for (int power = 2; power <= chi; ++power) {
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t lo = op.row_ptr_[i];
                const std::size_t hi = op.row_ptr_[i + 1];
                for (std::size_t e = lo; e < hi; ++e)
                    slot[op.cols_[e]] = static_cast<std::ptrdiff_t>(e);
                for (std::size_t e = lo; e < hi; ++e) {
                    const double a = op.hchi_[e];
                    if (a == 0.0)
                        continue;
                    const std::size_t k = op.cols_[e];
                    for (std::size_t f = op.row_ptr_[k]; f < op.row_ptr_[k + 1]; ++f) {
                        const std::ptrdiff_t s = slot[op.cols_[f]];
                        if (s >= 0)
                            next[static_cast<std::size_t>(s)] += a * op.h_[f];
                    }
                }
                for (std::size_t e = lo; e < hi; ++e)
                    slot[op.cols_[e]] = -1;
            }
            op.hchi_.swap(next);
        }
    }

    op.degree_.assign(n, 0.0);
    op.absorbing_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t e = op.row_ptr_[i]; e < op.row_ptr_[i + 1]; ++e)
            sum += op.hchi_[e];
        if (sum <= 0.0) {
            op.degree_[i] = 1.0;
            op.absorbing_[i] = 1;
        } else {
            op.degree_[i] = sum;
        }
    }
    return op;
}

double AffinityOperator::affinity(std::size_t i, std::size_t j) const {
    const std::size_t lo = row_ptr_[i];
    const std::size_t hi = row_ptr_[i + 1];
    const auto it = std::lower_bound(cols_.begin() + static_cast<std::ptrdiff_t>(lo),
                                     cols_.begin() + static_cast<std::ptrdiff_t>(hi),
                                     static_cast<std::uint32_t>(j));
    if (it == cols_.begin() + static_cast<std::ptrdiff_t>(hi) ||
        *it != static_cast<std::uint32_t>(j))
        return 0.0;
    return h_[static_cast<std::size_t>(it - cols_.begin())];
}

std::vector<double> AffinityOperator::step(const std::vector<double>& x) const {
    if (x.size() != pixel_count())
        throw ShapeError("AffinityOperator::step: vector size mismatch");
    std::vector<double> y(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (absorbing_[i]) {
            y[i] = x[i];
            continue;
        }
        double acc = 0.0;
        for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e)
            acc += hchi_[e] * x[cols_[e]];
        y[i] = acc / degree_[i];
    }
    return y;
}

std::vector<double> AffinityOperator::propagate(std::vector<double> x, int steps) const {
    if (steps < 1)
        throw ValueError("AffinityOperator::propagate: steps must be >= 1");
    for (int s = 0; s < steps; ++s)
        x = step(x);
    return x;
}

std::vector<double> AffinityOperator::transition_row_sums() const {
    std::vector<double> sums(pixel_count(), 0.0);
    for (std::size_t i = 0; i < sums.size(); ++i) {
        if (absorbing_[i]) {
            sums[i] = 1.0;
            continue;
        }
        double acc = 0.0;
        for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e)
            acc += hchi_[e] / degree_[i];
        sums[i] = acc;
    }
    return sums;
}

AffinityOperator build_affinity(const DenseMap& boundary, int radius, int chi,
                                std::size_t memory_budget_bytes) {
    return AffinityOperator::build(boundary, radius, chi, memory_budget_bytes);
}

} // namespace sidkit
