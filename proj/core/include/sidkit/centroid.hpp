#pragma once

#include <vector>

#include "sidkit/dense_map.hpp"
#include "sidkit/label_map.hpp"
#include "sidkit/offset_field.hpp"

namespace sidkit {

/// Detected instance centroids, ordered by row-major discovery. count() is
/// the predicted instance count T*.
struct CentroidSet {
    struct Point {
        int y = 0;
        int x = 0;
        bool operator==(const Point&) const = default;
    };
    std::vector<Point> points;

    int count() const { return static_cast<int>(points.size()); }
    bool empty() const { return points.empty(); }
};

struct ChaseResult {
    OffsetField field;              // accumulated offsets after chasing
    std::vector<std::uint8_t> converged; // per pixel, 1 once its update fell below eps
    int iterations = 0;             // update sweeps actually applied
    bool all_converged = false;
};

/// Fixed-point iteration of the offset field: each pixel repeatedly adds the
/// input field's vector at its currently pointed-to pixel (rounded, clamped)
/// until every update magnitude drops below eps or max_iters sweeps ran.
/// Updates are synchronous, so the result is independent of visit order.
ChaseResult chase_offsets(const OffsetField& field, int max_iters, double eps);

/// Centroid pixels are those whose chased offset has norm < eps; 8-connected
/// runs of them merge into one centroid at the component's integer mass
/// center (floor of the coordinate means).
CentroidSet extract_centroids(const OffsetField& chased, double eps);

/// Same, but only pixels with mask != 0 are candidates. Used by the
/// assembly pipeline to restrict detection to the salient region.
CentroidSet extract_centroids(const OffsetField& chased, double eps,
                              const std::vector<std::uint8_t>& mask);

/// Labels every pixel with the centroid minimizing ||v_i + p_i - p_c||
/// (Euclidean); ties go to the lowest centroid index. Centroid k yields
/// label k+1.
InstanceLabelMap assign_pixels(const OffsetField& field, const CentroidSet& centroids);

/// Binarizes saliency at 0.5 and keeps instance n iff
/// |SI_n ∩ S| / |SI_n| > theta; survivors are relabeled 1..T* in order.
InstanceLabelMap filter_salient(const InstanceLabelMap& instances, const DenseMap& saliency,
                                double theta);

/// Squared error between predicted and ground-truth instance counts.
double subitizing_loss(int t_star, int t);

struct SubitizingGradient {
    int height = 0;
    int width = 0;
    std::vector<double> dy; // per pixel, zero outside the salient region
    std::vector<double> dx;
    int salient_count = 0;  // K

    double at_dy(int y, int x) const { return dy[static_cast<std::size_t>(y) * width + x]; }
    double at_dx(int y, int x) const { return dx[static_cast<std::size_t>(y) * width + x]; }
};

/// Surrogate gradient of the subitizing loss, broadcast over the salient
/// region: each component is 2(T* - T)/K at salient pixels and exactly zero
/// elsewhere; the whole field is zero when T* = T or the region is empty.
SubitizingGradient subitizing_gradient(const InstanceLabelMap& instances,
                                       const DenseMap& saliency, int t_star, int t);

/// Pixels where a probability map reaches 0.5, as a 0/1 mask.
std::vector<std::uint8_t> binarize(const DenseMap& prob, float threshold = 0.5f);

} // namespace sidkit
