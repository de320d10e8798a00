#include "crosscheck/geometry.hpp"

namespace crosscheck {

std::vector<Interval> merge_intervals(std::vector<Interval> xs) {
    std::erase_if(xs, [](const Interval& i) { return i.degenerate(); });
    std::sort(xs.begin(), xs.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (const Interval& i : xs) {
        if (!out.empty() && i.lo <= out.back().hi) {
            out.back().hi = std::max(out.back().hi, i.hi);
        } else {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<Interval> complement_within(const Interval& extent,
                                        const std::vector<Interval>& blocked) {
    std::vector<Interval> clipped;
    clipped.reserve(blocked.size());
    for (const Interval& b : blocked) {
        Interval c = b.clipped(extent.lo, extent.hi);
        if (!c.degenerate()) clipped.push_back(c);
    }
    std::vector<Interval> merged = merge_intervals(std::move(clipped));

    std::vector<Interval> out;
    double cursor = extent.lo;
    for (const Interval& b : merged) {
        if (b.lo > cursor) out.push_back({cursor, b.lo});
        cursor = std::max(cursor, b.hi);
    }
    if (cursor < extent.hi) out.push_back({cursor, extent.hi});
    return out;
}

}  // namespace crosscheck
