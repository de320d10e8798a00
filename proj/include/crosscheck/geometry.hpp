#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace crosscheck {

// Closed longitudinal interval [lo, hi] in meters along a lane.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool degenerate() const { return hi <= lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }

    // Overlap with positive measure. Touching at an endpoint does not count.
    bool overlaps(const Interval& o) const { return lo < o.hi && hi > o.lo; }

    // Closed intersection test: touching counts.
    bool meets(const Interval& o) const { return lo <= o.hi && hi >= o.lo; }

    Interval clipped(double bound_lo, double bound_hi) const {
        return {std::max(lo, bound_lo), std::min(hi, bound_hi)};
    }

    bool operator==(const Interval& o) const = default;
};

inline bool approx_eq(double a, double b, double eps = 1e-9) {
    return std::fabs(a - b) <= eps;
}

// Merge a set of intervals into disjoint maximal pieces (touching pieces fuse).
// Degenerate inputs carry no measure and are dropped.
std::vector<Interval> merge_intervals(std::vector<Interval> xs);

// Maximal closed sub-intervals of `extent` not covered (in measure) by `blocked`.
std::vector<Interval> complement_within(const Interval& extent,
                                        const std::vector<Interval>& blocked);

}  // namespace crosscheck
