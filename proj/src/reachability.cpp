#include "crosscheck/reachability.hpp"

#include <deque>
#include <map>
#include <sstream>

namespace crosscheck::ta {

namespace {

struct Node {
    int location;
    Valuation valuation;
    std::uint64_t visited_bits;
    Dbm zone;
    int parent;      // index into node store, -1 for roots
    WitnessStep step;  // step that produced this node (unused for roots)
};

struct SearchContext {
    const TimedAutomaton& ta;
    const SafetyProperty& prop;
    const ObservationEnvironment& env;
    std::vector<int> visited_locs;
    std::int32_t k;
    std::vector<Node> nodes;
    // Passed-list per (location, valuation, history): zones already covered.
    std::map<std::tuple<int, Valuation, std::uint64_t>, std::vector<Dbm>> passed;

    bool bad_state(int loc, Valuation v, std::uint64_t hist, const Dbm& zone,
                   int entered) const {
        if (!prop_expr_holds(*prop.bad, loc, v, hist, visited_locs, entered))
            return false;
        if (prop.clock_constraint.empty()) return !zone.is_empty();
        Dbm z = zone;
        constrain_all(z, prop.clock_constraint);
        return !z.is_empty();
    }

    bool subsumed(int loc, Valuation v, std::uint64_t hist, const Dbm& zone) {
        auto& zones = passed[{loc, v, hist}];
        for (const Dbm& z : zones)
            if (z.includes(zone)) return true;
        zones.push_back(zone);
        return false;
    }
};

Witness build_witness(const std::vector<Node>& nodes, int idx,
                      Valuation root_valuation,
                      std::optional<WitnessStep> final_step) {
    std::vector<WitnessStep> steps;
    for (int i = idx; nodes[i].parent >= 0; i = nodes[i].parent)
        steps.push_back(nodes[i].step);
    std::reverse(steps.begin(), steps.end());
    int root = idx;
    while (nodes[root].parent >= 0) root = nodes[root].parent;
    Witness w;
    w.initial_valuation = nodes[root].valuation;
    (void)root_valuation;
    w.steps = std::move(steps);
    if (final_step) w.steps.push_back(*final_step);
    return w;
}

std::uint64_t with_visit(std::uint64_t bits, int location,
                         const std::vector<int>& visited_locs) {
    for (size_t i = 0; i < visited_locs.size(); ++i)
        if (visited_locs[i] == location) bits |= (1ull << i);
    return bits;
}

}  // namespace

Verdict reachability(const TimedAutomaton& ta, const SafetyProperty& prop,
                     const ObservationEnvironment& env) {
    ta.validate();
    SearchContext ctx{ta, prop, env, visited_locations(*prop.bad),
                      ta.max_constant(), {}, {}};
    for (const ClockConstraint& c : prop.clock_constraint)
        ctx.k = std::max(ctx.k, std::abs(c.ticks));

    const int dim = static_cast<int>(ta.clocks.size()) + 1;
    const Valuation nvals = Valuation{1} << ta.observations.size();

    std::deque<int> queue;

    Dbm z0 = Dbm::zero(dim);
    constrain_all(z0, ta.locations[ta.initial].invariant);
    if (!z0.is_empty()) {
        Dbm closed = z0;
        closed.up();
        constrain_all(closed, ta.locations[ta.initial].invariant);
        closed.k_normalize(ctx.k);
        std::uint64_t hist0 = with_visit(0, ta.initial, ctx.visited_locs);
        for (Valuation v = 0; v < nvals; ++v) {
            if (!env.allows(ta.initial, v)) continue;
            if (ctx.bad_state(ta.initial, v, hist0, closed, -1)) {
                Witness w;
                w.initial_valuation = v;
                return {false, w, ctx.nodes.size()};
            }
            if (ctx.subsumed(ta.initial, v, hist0, closed)) continue;
            ctx.nodes.push_back({ta.initial, v, hist0, closed, -1, {}});
            queue.push_back(static_cast<int>(ctx.nodes.size()) - 1);
        }
    }

    while (!queue.empty()) {
        int cur = queue.front();
        queue.pop_front();
        // Copy: ctx.nodes may reallocate while we expand.
        Node node = ctx.nodes[cur];

        // Observation changes (environment moves).
        for (Valuation v = 0; v < nvals; ++v) {
            if (v == node.valuation || !env.allows(node.location, v)) continue;
            if (ctx.bad_state(node.location, v, node.visited_bits, node.zone, -1)) {
                WitnessStep st{WitnessStep::Kind::SetObservations, v, -1, node.zone};
                return {false, build_witness(ctx.nodes, cur, 0, st),
                        ctx.nodes.size()};
            }
            if (ctx.subsumed(node.location, v, node.visited_bits, node.zone))
                continue;
            WitnessStep st{WitnessStep::Kind::SetObservations, v, -1, node.zone};
            ctx.nodes.push_back({node.location, v, node.visited_bits, node.zone,
                                 cur, st});
            queue.push_back(static_cast<int>(ctx.nodes.size()) - 1);
        }

        // Edge moves, in declaration order.
        for (size_t ei = 0; ei < ta.edges.size(); ++ei) {
            const Edge& e = ta.edges[ei];
            if (e.source != node.location) continue;
            if (!literals_hold(e.obs_guard, node.valuation)) continue;
            Dbm z = node.zone;
            constrain_all(z, e.guard);
            if (z.is_empty()) continue;
            z.reset(e.resets);
            constrain_all(z, ta.locations[e.target].invariant);
            if (z.is_empty()) continue;

            std::uint64_t hist =
                with_visit(node.visited_bits, e.target, ctx.visited_locs);

            // Entry instant: bad predicates with entered() atoms see the
            // pre-delay zone.
            if (ctx.bad_state(e.target, node.valuation, hist, z, e.target)) {
                WitnessStep st{WitnessStep::Kind::FireEdge, node.valuation,
                               static_cast<int>(ei), z};
                return {false, build_witness(ctx.nodes, cur, 0, st),
                        ctx.nodes.size()};
            }

            Dbm closed = z;
            closed.up();
            constrain_all(closed, ta.locations[e.target].invariant);
            closed.k_normalize(ctx.k);

            if (ctx.bad_state(e.target, node.valuation, hist, closed, -1)) {
                WitnessStep st{WitnessStep::Kind::FireEdge, node.valuation,
                               static_cast<int>(ei), closed};
                return {false, build_witness(ctx.nodes, cur, 0, st),
                        ctx.nodes.size()};
            }
            if (ctx.subsumed(e.target, node.valuation, hist, closed)) continue;
            WitnessStep st{WitnessStep::Kind::FireEdge, node.valuation,
                           static_cast<int>(ei), closed};
            ctx.nodes.push_back({e.target, node.valuation, hist, closed, cur, st});
            queue.push_back(static_cast<int>(ctx.nodes.size()) - 1);
        }
    }

    return {true, std::nullopt, ctx.nodes.size()};
}

bool replay_witness(const TimedAutomaton& ta, const SafetyProperty& prop,
                    const ObservationEnvironment& env, const Witness& w) {
    const int dim = static_cast<int>(ta.clocks.size()) + 1;
    std::vector<int> visited_locs = visited_locations(*prop.bad);

    int loc = ta.initial;
    Valuation val = w.initial_valuation;
    if (!env.allows(loc, val)) return false;
    std::uint64_t hist = with_visit(0, loc, visited_locs);

    Dbm zone = Dbm::zero(dim);
    constrain_all(zone, ta.locations[loc].invariant);
    if (zone.is_empty()) return false;
    zone.up();
    constrain_all(zone, ta.locations[loc].invariant);

    auto bad_with = [&](const Dbm& z, int entered) {
        if (!prop_expr_holds(*prop.bad, loc, val, hist, visited_locs, entered))
            return false;
        Dbm zz = z;
        constrain_all(zz, prop.clock_constraint);
        return !zz.is_empty();
    };

    if (w.steps.empty()) return bad_with(zone, -1);

    for (size_t i = 0; i < w.steps.size(); ++i) {
        const WitnessStep& st = w.steps[i];
        bool last = (i + 1 == w.steps.size());
        if (st.kind == WitnessStep::Kind::SetObservations) {
            if (!env.allows(loc, st.valuation)) return false;
            val = st.valuation;
            if (last) return bad_with(zone, -1);
        } else {
            if (st.edge < 0 || st.edge >= static_cast<int>(ta.edges.size()))
                return false;
            const Edge& e = ta.edges[st.edge];
            if (e.source != loc) return false;
            if (!literals_hold(e.obs_guard, val)) return false;
            Dbm z = zone;
            constrain_all(z, e.guard);
            if (z.is_empty()) return false;
            z.reset(e.resets);
            constrain_all(z, ta.locations[e.target].invariant);
            if (z.is_empty()) return false;
            loc = e.target;
            hist = with_visit(hist, loc, visited_locs);
            if (last && bad_with(z, loc)) return true;
            zone = z;
            zone.up();
            constrain_all(zone, ta.locations[loc].invariant);
            if (last) return bad_with(zone, -1);
        }
    }
    return false;
}

std::string Witness::render(const TimedAutomaton& ta) const {
    std::ostringstream os;
    auto print_valuation = [&](Valuation v) {
        os << "{";
        bool first = true;
        for (size_t i = 0; i < ta.observations.size(); ++i) {
            if (!((v >> i) & 1u)) continue;
            if (!first) os << ", ";
            first = false;
            os << ta.observations[i];
        }
        os << "}";
    };
    os << "start " << ta.locations[ta.initial].name << " obs=";
    print_valuation(initial_valuation);
    for (const WitnessStep& st : steps) {
        if (st.kind == WitnessStep::Kind::SetObservations) {
            os << "; obs:=";
            print_valuation(st.valuation);
        } else {
            const Edge& e = ta.edges[st.edge];
            os << "; edge " << ta.locations[e.source].name << "->"
               << ta.locations[e.target].name << " [" << st.zone.to_string(ta.clocks)
               << "]";
        }
    }
    return os.str();
}

std::vector<Assumption> export_assumptions(const TimedAutomaton& ta,
                                           const SafetyProperty& prop,
                                           const ObservationEnvironment& env) {
    (void)prop;
    std::vector<Assumption> out;
    for (const DurationNote& n : ta.duration_notes) {
        Assumption a;
        a.name = ta.locations[n.location].name + ".duration";
        a.kind = "step_duration";
        a.lo = n.min_seconds;
        a.hi = n.max_seconds;
        a.detail = "dwell time in step '" + ta.locations[n.location].name + "'";
        out.push_back(a);
    }
    auto note_constraint = [&](const ClockConstraint& c, const std::string& where) {
        Assumption a;
        a.name = where;
        a.kind = "clock_bound";
        double secs = c.ticks * ta.time_unit;
        switch (c.rel) {
            case Rel::Lt:
            case Rel::Le: a.lo = 0.0; a.hi = secs; break;
            case Rel::Ge:
            case Rel::Gt: a.lo = secs; break;
            case Rel::Eq: a.lo = a.hi = secs; break;
        }
        a.detail = ta.clocks[c.clock - 1] +
                   (c.minus_clock ? "-" + ta.clocks[c.minus_clock - 1] : "") +
                   " bound (" + std::to_string(secs) + " s)";
        out.push_back(a);
    };
    // Invariants and guards not already covered by a duration note.
    std::vector<int> noted;
    for (const DurationNote& n : ta.duration_notes) noted.push_back(n.location);
    for (size_t li = 0; li < ta.locations.size(); ++li) {
        if (std::find(noted.begin(), noted.end(), static_cast<int>(li)) !=
            noted.end())
            continue;
        for (const ClockConstraint& c : ta.locations[li].invariant)
            note_constraint(c, ta.locations[li].name + ".invariant");
    }
    if (ta.duration_notes.empty())
        for (size_t ei = 0; ei < ta.edges.size(); ++ei)
            for (const ClockConstraint& c : ta.edges[ei].guard)
                note_constraint(c, "edge" + std::to_string(ei) + ".guard");
    for (const ObservationEnvironment::Restriction& r : env.restrictions) {
        Assumption a;
        a.name = ta.locations[r.location].name + "." + ta.observations[r.obs];
        a.kind = "environment";
        a.lo = a.hi = r.value ? 1.0 : 0.0;
        a.detail = "observation '" + ta.observations[r.obs] + "' held " +
                   (r.value ? "true" : "false") + " in location '" +
                   ta.locations[r.location].name + "'";
        out.push_back(a);
    }
    return out;
}

}  // namespace crosscheck::ta
