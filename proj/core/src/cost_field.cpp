#include "piclb/cost_field.hpp"

#include <algorithm>
#include <stdexcept>

namespace piclb {

CostField::CostField(int gx, int gy, double beta)
    : gx_(gx), gy_(gy), beta_(beta) {
    if (gx < 1 || gy < 1) throw std::invalid_argument("CostField: grid extents must be >= 1");
    if (beta < 0.0) throw std::invalid_argument("CostField: beta must be >= 0");
    p_.assign(static_cast<std::size_t>(gx_) * gy_, 0);
    f_.assign(static_cast<std::size_t>(gx_) * gy_, 0);
    rebuild_prefix();
}

void CostField::assign(std::vector<long long> particle_counts,
                       std::vector<long long> fe_counts) {
    const std::size_t n = static_cast<std::size_t>(gx_) * gy_;
    if (particle_counts.size() != n || fe_counts.size() != n)
        throw std::invalid_argument("CostField::assign: count array size mismatch");
    for (long long v : particle_counts)
        if (v < 0) throw std::invalid_argument("CostField::assign: negative particle count");
    for (long long v : fe_counts)
        if (v < 0) throw std::invalid_argument("CostField::assign: negative finite-element count");
    p_ = std::move(particle_counts);
    f_ = std::move(fe_counts);
    rebuild_prefix();
}

void CostField::assign_particles(std::vector<long long> particle_counts) {
    assign(std::move(particle_counts), f_);
}

void CostField::rebuild_prefix() {
    const int w = gx_ + 1;
    pp_.assign(static_cast<std::size_t>(w) * (gy_ + 1), 0);
    pf_.assign(static_cast<std::size_t>(w) * (gy_ + 1), 0);
    for (int j = 0; j < gy_; ++j) {
        for (int i = 0; i < gx_; ++i) {
            const std::size_t o = static_cast<std::size_t>(j + 1) * w + (i + 1);
            pp_[o] = p_[idx(i, j)] + pp_[o - 1] + pp_[o - w] - pp_[o - w - 1];
            pf_[o] = f_[idx(i, j)] + pf_[o - 1] + pf_[o - w] - pf_[o - w - 1];
        }
    }
}

void CostField::check_rect(const ElementRect& rect) const {
    if (rect.ix0 < 0 || rect.iy0 < 0 || rect.ix1 > gx_ || rect.iy1 > gy_ ||
        rect.ix0 > rect.ix1 || rect.iy0 > rect.iy1)
        throw std::out_of_range("CostField: rectangle out of bounds");
}

double CostField::region_cost(const ElementRect& rect) const {
    check_rect(rect);
    if (rect.empty()) return 0.0;
    const int w = gx_ + 1;
    auto boxsum = [&](const std::vector<long long>& s) {
        return s[static_cast<std::size_t>(rect.iy1) * w + rect.ix1] -
               s[static_cast<std::size_t>(rect.iy0) * w + rect.ix1] -
               s[static_cast<std::size_t>(rect.iy1) * w + rect.ix0] +
               s[static_cast<std::size_t>(rect.iy0) * w + rect.ix0];
    };
    const long long ps = boxsum(pp_);
    if (beta_ == 0.0) return static_cast<double>(ps);
    return static_cast<double>(ps) + beta_ * static_cast<double>(boxsum(pf_));
}

long long CostField::region_particles(const ElementRect& rect) const {
    check_rect(rect);
    if (rect.empty()) return 0;
    const int w = gx_ + 1;
    return pp_[static_cast<std::size_t>(rect.iy1) * w + rect.ix1] -
           pp_[static_cast<std::size_t>(rect.iy0) * w + rect.ix1] -
           pp_[static_cast<std::size_t>(rect.iy1) * w + rect.ix0] +
           pp_[static_cast<std::size_t>(rect.iy0) * w + rect.ix0];
}

double imbalance(const std::vector<double>& loads) {
    if (loads.empty()) throw std::invalid_argument("imbalance: empty load list");
    double sum = 0.0;
    double mx = 0.0;
    for (double v : loads) {
        if (v < 0.0) throw std::invalid_argument("imbalance: negative load");
        sum += v;
        mx = std::max(mx, v);
    }
    if (sum == 0.0) return 1.0;  // balanced-vacuum convention
    return mx * static_cast<double>(loads.size()) / sum;
}

}  // namespace piclb
