#include "oracles/grid_eval.hpp"

#include <cmath>
#include <map>
#include <vector>

namespace oracle {

using namespace crosscheck;
using traffic::Snapshot;
using traffic::View;
using usl::Formula;

namespace {

constexpr double kEps = 1e-9;

struct GridEval {
    const Snapshot& snap;
    int lane;
    std::vector<double> points;  // grid points including both view endpoints
    double margin;
    // memo per node: 0 unknown, 1 false, 2 true, indexed i * n + j
    std::map<const Formula*, std::vector<unsigned char>> memo;

    // Occupied space on the lane: reservations plus the intersection slice
    // when any reservation sits in the intersection region. Re-derived from
    // the definitions rather than calling the production free-space code.
    std::vector<Interval> blocked;

    GridEval(const Snapshot& s, const View& v, double step, double margin_)
        : snap(s), lane(v.lane), margin(margin_) {
        double lo = v.extent.lo, hi = v.extent.hi;
        for (double x = lo; x < hi - kEps; x += step) points.push_back(x);
        points.push_back(hi);

        for (const traffic::Reservation& r : s.reservations)
            if (r.lane == lane && r.interval.hi > r.interval.lo)
                blocked.push_back(r.interval);
        if (auto span = s.network.intersection_on(lane)) {
            bool occupied = false;
            for (const traffic::Reservation& r : s.reservations) {
                auto rspan = s.network.intersection_on(r.lane);
                if (rspan && r.interval.lo < rspan->hi - kEps &&
                    r.interval.hi > rspan->lo + kEps)
                    occupied = true;
            }
            if (occupied) blocked.push_back(*span);
        }
    }

    bool free_between(double lo, double hi) const {
        if (hi - lo <= kEps) return true;  // degenerate views are free
        for (const Interval& b : blocked)
            if (b.lo < hi - kEps && b.hi > lo + kEps) return false;
        return true;
    }

    double resolve(const usl::LenValue& v) const {
        if (!v.is_size()) return v.literal;
        const traffic::Agent* a = snap.find_agent(v.size_of);
        if (!a) throw std::invalid_argument("oracle: unknown agent " + v.size_of);
        return a->size + margin;
    }

    bool atom(const Formula& f, double lo, double hi) const {
        using namespace usl;
        return std::visit(
            [&](const auto& x) -> bool {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, Free>) {
                    return free_between(lo, hi);
                } else if constexpr (std::is_same_v<T, Re>) {
                    const traffic::Reservation* r = snap.reservation_of(x.agent);
                    if (!r) throw std::invalid_argument("oracle: unknown agent");
                    return r->lane == lane && hi - lo > kEps &&
                           std::fabs(r->interval.lo - lo) <= kEps &&
                           std::fabs(r->interval.hi - hi) <= kEps;
                } else if constexpr (std::is_same_v<T, Aut>) {
                    const traffic::Agent* a = snap.find_agent(x.agent);
                    return a && a->aut == x.value;
                } else if constexpr (std::is_same_v<T, SignAhead>) {
                    for (const traffic::Sign& s : snap.network.signs)
                        if (s.lane == lane && s.kind == x.kind &&
                            s.pos >= lo - kEps && s.pos <= hi + kEps)
                            return true;
                    return false;
                } else if constexpr (std::is_same_v<T, CrossingAhead>) {
                    for (const traffic::Crossing& c : snap.network.crossings)
                        if (c.lane == lane && c.span.lo <= hi + kEps &&
                            c.span.hi >= lo - kEps)
                            return true;
                    return false;
                } else if constexpr (std::is_same_v<T, Len>) {
                    return cmp_holds(hi - lo, x.cmp, resolve(x.value), kEps);
                } else {
                    return false;  // handled by eval()
                }
            },
            f.node);
    }

    bool eval(const Formula& f, int i, int j) {
        using namespace usl;
        if (std::holds_alternative<Not>(f.node))
            return !eval(*std::get<Not>(f.node).sub, i, j);
        if (std::holds_alternative<And>(f.node)) {
            const auto& n = std::get<And>(f.node);
            return eval(*n.lhs, i, j) && eval(*n.rhs, i, j);
        }
        if (std::holds_alternative<Or>(f.node)) {
            const auto& n = std::get<Or>(f.node);
            return eval(*n.lhs, i, j) || eval(*n.rhs, i, j);
        }
        if (std::holds_alternative<Chop>(f.node)) {
            const int n = static_cast<int>(points.size());
            auto& cell = memo[&f];
            if (cell.empty()) cell.assign(static_cast<size_t>(n) * n, 0);
            unsigned char& c = cell[static_cast<size_t>(i) * n + j];
            if (c) return c == 2;
            const auto& ch = std::get<Chop>(f.node);
            bool result = false;
            for (int m = i; m <= j && !result; ++m)
                result = eval(*ch.lhs, i, m) && eval(*ch.rhs, m, j);
            c = result ? 2 : 1;
            return result;
        }
        return atom(f, points[i], points[j]);
    }
};

}  // namespace

bool grid_evaluate(const Snapshot& snap, const View& view, const Formula& f,
                   double grid_step, double size_margin) {
    GridEval g(snap, view, grid_step, size_margin);
    return g.eval(f, 0, static_cast<int>(g.points.size()) - 1);
}

}  // namespace oracle
