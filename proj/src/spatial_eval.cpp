#include "crosscheck/spatial_eval.hpp"

#include <algorithm>
#include <cmath>

namespace crosscheck::usl {

using traffic::Snapshot;
using traffic::View;

namespace {

double resolve_len(const LenValue& v, const Snapshot& snap,
                   const EvalConfig& cfg) {
    if (!v.is_size()) return v.literal;
    const traffic::Agent* a = snap.find_agent(v.size_of);
    if (!a)
        throw std::invalid_argument("size(" + v.size_of +
                                    "): unknown agent in snapshot");
    return a->size + cfg.size_margin;
}

void collect_len_values(const Formula& f, const Snapshot& snap,
                        const EvalConfig& cfg, std::vector<double>& out) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Len>) {
                out.push_back(resolve_len(x.value, snap, cfg));
            } else if constexpr (std::is_same_v<T, Not>) {
                collect_len_values(*x.sub, snap, cfg, out);
            } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or> ||
                                 std::is_same_v<T, Chop>) {
                collect_len_values(*x.lhs, snap, cfg, out);
                collect_len_values(*x.rhs, snap, cfg, out);
            }
        },
        f.node);
}

// All subset sums of the formula's length thresholds (0 included). Chopping
// stacks length constraints end to end, so a later split may sit a sum of
// several thresholds away from a boundary point.
std::vector<double> threshold_sums(const Formula& f, const Snapshot& snap,
                                   const EvalConfig& cfg) {
    std::vector<double> values;
    collect_len_values(f, snap, cfg, values);
    // Keep this bounded; formulas with very many length atoms fall back to
    // sums of pairs, which covers one level of chop nesting.
    std::vector<double> sums{0.0};
    if (values.size() <= 12) {
        for (double v : values) {
            size_t n = sums.size();
            for (size_t i = 0; i < n; ++i) sums.push_back(sums[i] + v);
        }
    } else {
        for (size_t i = 0; i < values.size(); ++i) {
            sums.push_back(values[i]);
            for (size_t j = i; j < values.size(); ++j)
                sums.push_back(values[i] + values[j]);
        }
    }
    return sums;
}

std::vector<double> base_points(const Snapshot& snap, const View& view) {
    std::vector<double> pts{view.extent.lo, view.extent.hi};
    for (const traffic::Reservation& r : snap.reservations) {
        if (r.lane != view.lane) continue;
        pts.push_back(r.interval.lo);
        pts.push_back(r.interval.hi);
    }
    for (const traffic::Sign& s : snap.network.signs)
        if (s.lane == view.lane) pts.push_back(s.pos);
    for (const traffic::Crossing& c : snap.network.crossings) {
        if (c.lane != view.lane) continue;
        pts.push_back(c.span.lo);
        pts.push_back(c.span.hi);
    }
    if (auto span = snap.network.intersection_on(view.lane)) {
        pts.push_back(span->lo);
        pts.push_back(span->hi);
    }
    return pts;
}

void dedup_sorted(std::vector<double>& xs, double eps) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(),
                         [eps](double a, double b) { return b - a <= eps; }),
             xs.end());
}

void check_view(const Snapshot& snap, const View& view) {
    const traffic::Lane* lane = snap.network.find_lane(view.lane);
    if (!lane)
        throw std::invalid_argument("view on unknown lane " +
                                    std::to_string(view.lane));
    if (view.extent.lo > view.extent.hi + 1e-9 || view.extent.lo < -1e-9 ||
        view.extent.hi > lane->length + 1e-9)
        throw std::invalid_argument("view extent outside lane bounds");
}

bool eval_rec(const Snapshot& snap, const View& view, const Formula& f,
              const EvalConfig& cfg);

bool eval_chop(const Snapshot& snap, const View& view, const Chop& chop,
               const Formula& whole, const EvalConfig& cfg) {
    std::vector<double> points =
        candidate_chop_points(snap, view, whole, cfg);
    // Also probe between consecutive candidates: with strict comparisons the
    // truth can hold on an open cell while failing at both of its ends.
    std::vector<double> probes = points;
    for (size_t i = 0; i + 1 < points.size(); ++i)
        probes.push_back(0.5 * (points[i] + points[i + 1]));

    for (double m : probes) {
        View left{view.lane, {view.extent.lo, m}, view.owner};
        View right{view.lane, {m, view.extent.hi}, view.owner};
        if (eval_rec(snap, left, *chop.lhs, cfg) &&
            eval_rec(snap, right, *chop.rhs, cfg))
            return true;
    }
    return false;
}

bool eval_rec(const Snapshot& snap, const View& view, const Formula& f,
              const EvalConfig& cfg) {
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Free>) {
                if (view.extent.degenerate()) return true;
                auto free = traffic::free_intervals(snap, view);
                return free.size() == 1 &&
                       approx_eq(free[0].lo, view.extent.lo, cfg.eps) &&
                       approx_eq(free[0].hi, view.extent.hi, cfg.eps);
            } else if constexpr (std::is_same_v<T, Re>) {
                const traffic::Reservation* r = snap.reservation_of(x.agent);
                if (!r) {
                    if (!snap.find_agent(x.agent))
                        throw std::invalid_argument("re(" + x.agent +
                                                    "): unknown agent");
                    return false;
                }
                if (r->lane != view.lane) return false;
                if (view.extent.length() <= cfg.eps) return false;
                return approx_eq(r->interval.lo, view.extent.lo, cfg.eps) &&
                       approx_eq(r->interval.hi, view.extent.hi, cfg.eps);
            } else if constexpr (std::is_same_v<T, Aut>) {
                const traffic::Agent* a = snap.find_agent(x.agent);
                return a && a->aut == x.value;
            } else if constexpr (std::is_same_v<T, SignAhead>) {
                for (const traffic::Sign& s : snap.network.signs)
                    if (s.lane == view.lane && s.kind == x.kind &&
                        s.pos >= view.extent.lo - cfg.eps &&
                        s.pos <= view.extent.hi + cfg.eps)
                        return true;
                return false;
            } else if constexpr (std::is_same_v<T, CrossingAhead>) {
                for (const traffic::Crossing& c : snap.network.crossings)
                    if (c.lane == view.lane &&
                        c.span.lo <= view.extent.hi + cfg.eps &&
                        c.span.hi >= view.extent.lo - cfg.eps)
                        return true;
                return false;
            } else if constexpr (std::is_same_v<T, Len>) {
                return cmp_holds(view.extent.length(), x.cmp,
                                 resolve_len(x.value, snap, cfg), cfg.eps);
            } else if constexpr (std::is_same_v<T, Not>) {
                return !eval_rec(snap, view, *x.sub, cfg);
            } else if constexpr (std::is_same_v<T, And>) {
                return eval_rec(snap, view, *x.lhs, cfg) &&
                       eval_rec(snap, view, *x.rhs, cfg);
            } else if constexpr (std::is_same_v<T, Or>) {
                return eval_rec(snap, view, *x.lhs, cfg) ||
                       eval_rec(snap, view, *x.rhs, cfg);
            } else {
                return eval_chop(snap, view, x, f, cfg);
            }
        },
        f.node);
}

}  // namespace

bool evaluate(const Snapshot& snap, const View& view, const Formula& f,
              const EvalConfig& cfg) {
    check_view(snap, view);
    return eval_rec(snap, view, f, cfg);
}

std::vector<double> candidate_chop_points(const Snapshot& snap,
                                          const View& view, const Formula& f,
                                          const EvalConfig& cfg) {
    check_view(snap, view);
    std::vector<double> base = base_points(snap, view);
    std::vector<double> sums = threshold_sums(f, snap, cfg);

    std::vector<double> pts;
    pts.reserve(base.size() * (2 * sums.size()));
    const double lo = view.extent.lo;
    const double hi = view.extent.hi;
    for (double p : base) {
        for (double s : sums) {
            double up = p + s;
            double down = p - s;
            if (up >= lo - cfg.eps && up <= hi + cfg.eps)
                pts.push_back(std::clamp(up, lo, hi));
            if (s != 0.0 && down >= lo - cfg.eps && down <= hi + cfg.eps)
                pts.push_back(std::clamp(down, lo, hi));
        }
    }
    dedup_sorted(pts, cfg.eps);
    return pts;
}

}  // namespace crosscheck::usl
