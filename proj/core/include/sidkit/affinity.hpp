#pragma once

#include <cstdint>
#include <vector>

#include "sidkit/dense_map.hpp"

namespace sidkit {

/// Sparse symmetric pairwise affinity of a boundary map over a local pixel
/// neighborhood, together with the chi-th power restricted to the same
/// sparsity pattern and the per-row degrees of that power.
///
/// h_ij = 1 - max of B over the Bresenham line between i and j (endpoints
/// included, rasterized from the lower linear index so h is symmetric);
/// h_ii = 1 - B(i). The transition operator M = D^-1 H^chi is row
/// stochastic; rows whose degree would vanish (pixels walled off on all
/// sides) become absorbing with M_ii = 1.
class AffinityOperator {
public:
    static AffinityOperator build(const DenseMap& boundary, int radius, int chi,
                                  std::size_t memory_budget_bytes = kDefaultBudget);

    int height() const { return height_; }
    int width() const { return width_; }
    int radius() const { return radius_; }
    int chi() const { return chi_; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(height_) * width_; }

    /// Affinity h_ij; zero outside the neighborhood pattern.
    double affinity(std::size_t i, std::size_t j) const;

    /// Row sum of H^chi (degree D_ii); 1 for absorbing rows.
    double degree(std::size_t i) const { return degree_[i]; }
    bool absorbing(std::size_t i) const { return absorbing_[i] != 0; }

    /// One application of M = D^-1 H^chi.
    std::vector<double> step(const std::vector<double>& x) const;

    /// M^steps applied to x.
    std::vector<double> propagate(std::vector<double> x, int steps) const;

    /// Row sums of the realized M, which should all be 1 up to rounding.
    std::vector<double> transition_row_sums() const;

    static constexpr std::size_t kDefaultBudget = 512ull << 20;

private:
    AffinityOperator() = default;

    int height_ = 0;
    int width_ = 0;
    int radius_ = 0;
    int chi_ = 1;

    // Shared CSR pattern for both H and H^chi.
    std::vector<std::size_t> row_ptr_;
    std::vector<std::uint32_t> cols_;
    std::vector<double> h_;
    std::vector<double> hchi_;
    std::vector<double> degree_;
    std::vector<std::uint8_t> absorbing_;
};

/// Builds the affinity of a boundary map. The boundary must be a
/// single-channel probability map and radius at least 1.
AffinityOperator build_affinity(const DenseMap& boundary, int radius, int chi,
                                std::size_t memory_budget_bytes = AffinityOperator::kDefaultBudget);

} // namespace sidkit
