#pragma once

#include <stdexcept>

namespace piclb::detail {

/// Smallest k in [lo, hi] minimizing |value(k) - target| for a non-decreasing
/// value function; ties resolve to the smaller k. O(log(hi-lo)) evaluations.
template <class F>
int closest_monotone(F&& value, int lo, int hi, double target) {
    if (lo > hi) throw std::logic_error("closest_monotone: empty search range");
    // smallest k with value(k) >= target, or hi+1 if none
    int a = lo, b = hi + 1;
    while (a < b) {
        const int mid = a + (b - a) / 2;
        if (value(mid) >= target)
            b = mid;
        else
            a = mid + 1;
    }
    const int khi = a;
    if (khi == lo) return lo;

    // smallest k whose value equals value(kref)
    auto first_with_value = [&](int kref) {
        const double v = value(kref);
        int x = lo, y = kref;
        while (x < y) {
            const int mid = x + (y - x) / 2;
            if (value(mid) >= v)
                y = mid;
            else
                x = mid + 1;
        }
        return x;
    };

    if (khi > hi) return first_with_value(hi);
    const double d_lo = target - value(khi - 1);
    const double d_hi = value(khi) - target;
    if (d_hi < d_lo) return khi;
    return first_with_value(khi - 1);
}

}  // namespace piclb::detail
