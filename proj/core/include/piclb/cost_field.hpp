#pragma once

#include <vector>

#include "piclb/geometry.hpp"

namespace piclb {

/// Per-grid-element load estimate the partitioners consume: particle count
/// plus beta times the finite-element count of the element. The partitioners
/// never see individual particles or elements, only these per-unit totals.
///
/// Immutable after assign(); prefix sums are rebuilt as a whole on update so
/// any rectangle query costs O(1).
class CostField {
public:
    CostField(int gx, int gy, double beta = 0.0);

    /// Replace both count arrays (sized gx*gy, index j*gx+i) and rebuild
    /// the prefix sums.
    void assign(std::vector<long long> particle_counts,
                std::vector<long long> fe_counts);
    /// Replace particle counts only, keeping finite-element counts.
    void assign_particles(std::vector<long long> particle_counts);

    int gx() const { return gx_; }
    int gy() const { return gy_; }
    double beta() const { return beta_; }
    ElementRect full_rect() const { return {0, gx_, 0, gy_}; }

    long long particle_count(int i, int j) const { return p_[idx(i, j)]; }
    long long fe_count(int i, int j) const { return f_[idx(i, j)]; }
    double cost(int i, int j) const {
        return static_cast<double>(p_[idx(i, j)]) + beta_ * static_cast<double>(f_[idx(i, j)]);
    }

    /// Sum of cost over a rectangle. Throws std::out_of_range if the
    /// rectangle is not within [0,gx) x [0,gy). Empty rectangles cost 0.
    double region_cost(const ElementRect& rect) const;
    long long region_particles(const ElementRect& rect) const;
    double total_cost() const { return region_cost(full_rect()); }

private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * gx_ + i; }
    void rebuild_prefix();
    void check_rect(const ElementRect& rect) const;

    int gx_;
    int gy_;
    double beta_;
    std::vector<long long> p_;
    std::vector<long long> f_;
    // (gx+1) x (gy+1) inclusive 2D prefix sums of p_ and f_.
    std::vector<long long> pp_;
    std::vector<long long> pf_;
};

/// max(loads) / mean(loads). Loads must be non-negative; all-zero loads are
/// defined as perfectly balanced (1.0).
double imbalance(const std::vector<double>& loads);

}  // namespace piclb
