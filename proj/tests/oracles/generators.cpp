#include "oracles/generators.hpp"

#include <algorithm>

namespace oracle {

using namespace crosscheck;

traffic::Snapshot random_scene(Rng& rng, int max_agents, int max_lanes) {
    traffic::RoadNetwork net;
    int nlanes = pick(rng, 1, max_lanes);
    for (int i = 0; i < nlanes; ++i)
        net.lanes.push_back({i, grid(rng, 40.0, 80.0)});

    if (nlanes >= 2 && chance(rng, 0.5)) {
        for (int i = 0; i < nlanes; ++i) {
            if (i > 0 && !chance(rng, 0.8)) continue;
            double len = net.lanes[i].length;
            double lo = grid(rng, 10.0, len - 15.0);
            net.intersection.push_back({i, {lo, lo + grid(rng, 4.0, 10.0)}});
        }
    }
    int nsigns = pick(rng, 0, 2);
    for (int i = 0; i < nsigns; ++i) {
        int lane = pick(rng, 0, nlanes - 1);
        net.signs.push_back({chance(rng, 0.7) ? traffic::SignKind::Stop
                                              : traffic::SignKind::GiveWay,
                             lane, grid(rng, 0.0, net.lanes[lane].length)});
    }
    if (chance(rng, 0.4)) {
        int lane = pick(rng, 0, nlanes - 1);
        double len = net.lanes[lane].length;
        double lo = grid(rng, 0.0, len - 4.0);
        net.crossings.push_back({lane, {lo, lo + grid(rng, 2.0, 4.0)}});
    }

    std::vector<traffic::Agent> agents;
    int nagents = pick(rng, 0, max_agents);
    for (int i = 0; i < nagents; ++i) {
        traffic::Agent a;
        a.id = std::string(1, static_cast<char>('A' + i));
        a.lane = pick(rng, 0, nlanes - 1);
        double len = net.lanes[a.lane].length;
        int kind = pick(rng, 0, 9);
        if (kind >= 8) {
            a.kind = traffic::AgentKind::Pedestrian;
            a.size = 0.5;
        } else if (kind >= 6) {
            a.kind = traffic::AgentKind::Cyclist;
            a.size = grid(rng, 1.5, 2.0);
        } else {
            a.kind = traffic::AgentKind::Car;
            a.size = grid(rng, 3.5, 5.5);
        }
        a.pos = grid(rng, 0.0, len);
        a.speed = pick(rng, 0, 3);  // whole m/s keeps v^2/10 on the 0.1 grid
        a.aut = chance(rng, 0.5);
        agents.push_back(a);
    }
    return traffic::Snapshot::make(std::move(net), std::move(agents), 0.0);
}

traffic::View random_view(Rng& rng, const traffic::Snapshot& snap,
                          double max_extent) {
    int lane = snap.network.lanes[pick(
        rng, 0, static_cast<int>(snap.network.lanes.size()) - 1)].id;
    double len = snap.network.lane_length(lane);
    double extent = grid(rng, 0.0, std::min(max_extent, len));
    double lo = grid(rng, 0.0, len - extent);
    return {lane, {lo, lo + extent}, std::nullopt};
}

namespace {

usl::FormulaPtr random_formula_rec(Rng& rng, const traffic::Snapshot& snap,
                                   int depth, int& chops, int& lens,
                                   int max_chops, int max_lens) {
    auto atom = [&]() -> usl::FormulaPtr {
        for (;;) {
            switch (pick(rng, 0, 6)) {
                case 0: return usl::make_free();
                case 1:
                    if (!snap.agents.empty())
                        return usl::make_re(
                            snap.agents[pick(rng, 0,
                                             static_cast<int>(snap.agents.size()) -
                                                 1)].id);
                    break;
                case 2:
                    if (!snap.agents.empty())
                        return usl::make_aut(
                            snap.agents[pick(rng, 0,
                                             static_cast<int>(snap.agents.size()) -
                                                 1)].id,
                            chance(rng, 0.5));
                    break;
                case 3:
                    return usl::make_sign(chance(rng, 0.7)
                                              ? traffic::SignKind::Stop
                                              : traffic::SignKind::GiveWay);
                case 4: return usl::make_crossing();
                default:
                    if (lens < max_lens) {
                        ++lens;
                        usl::Cmp cmp = static_cast<usl::Cmp>(pick(rng, 0, 4));
                        if (!snap.agents.empty() && chance(rng, 0.3))
                            return usl::make_len_size(
                                cmp, snap.agents[pick(
                                             rng, 0,
                                             static_cast<int>(snap.agents.size()) -
                                                 1)].id);
                        return usl::make_len(cmp, grid(rng, 0.0, 8.0, 0.5));
                    }
                    break;
            }
        }
    };

    if (depth <= 1) return atom();
    int choice = pick(rng, 0, 9);
    if (choice < 2) return atom();
    if (choice < 4)
        return usl::make_not(random_formula_rec(rng, snap, depth - 1, chops,
                                                lens, max_chops, max_lens));
    if (choice < 6)
        return usl::make_and(random_formula_rec(rng, snap, depth - 1, chops,
                                                lens, max_chops, max_lens),
                             random_formula_rec(rng, snap, depth - 1, chops,
                                                lens, max_chops, max_lens));
    if (choice < 8)
        return usl::make_or(random_formula_rec(rng, snap, depth - 1, chops,
                                               lens, max_chops, max_lens),
                            random_formula_rec(rng, snap, depth - 1, chops,
                                               lens, max_chops, max_lens));
    if (chops < max_chops) {
        ++chops;
        return usl::make_chop(random_formula_rec(rng, snap, depth - 1, chops,
                                                 lens, max_chops, max_lens),
                              random_formula_rec(rng, snap, depth - 1, chops,
                                                 lens, max_chops, max_lens));
    }
    return atom();
}

bool contains_chop(const usl::Formula& f) {
    return std::visit(
        [](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, usl::Chop>) return true;
            else if constexpr (std::is_same_v<T, usl::Not>)
                return contains_chop(*x.sub);
            else if constexpr (std::is_same_v<T, usl::And> ||
                               std::is_same_v<T, usl::Or>)
                return contains_chop(*x.lhs) || contains_chop(*x.rhs);
            else
                return false;
        },
        f.node);
}

}  // namespace

usl::FormulaPtr random_formula(Rng& rng, const traffic::Snapshot& snap,
                               int depth, bool require_chop, int max_chops,
                               int max_lens) {
    for (;;) {
        int chops = 0, lens = 0;
        usl::FormulaPtr f =
            random_formula_rec(rng, snap, depth, chops, lens, max_chops, max_lens);
        if (!require_chop || contains_chop(*f)) return f;
    }
}

ta::TimedAutomaton random_automaton(Rng& rng, int max_locations, int max_clocks,
                                    int max_const, int n_obs) {
    ta::TimedAutomaton a;
    a.time_unit = 1.0;
    int nloc = pick(rng, 1, max_locations);
    int nclk = pick(rng, 1, max_clocks);
    for (int i = 0; i < nclk; ++i) a.clocks.push_back("c" + std::to_string(i));
    for (int i = 0; i < n_obs; ++i)
        a.observations.push_back("o" + std::to_string(i));
    for (int i = 0; i < nloc; ++i) {
        ta::Location loc;
        loc.name = "q" + std::to_string(i);
        loc.action = chance(rng, 0.5) ? "approach" : "decelerate";
        if (chance(rng, 0.35))
            loc.invariant.push_back({pick(rng, 1, nclk), 0,
                                     chance(rng, 0.5) ? ta::Rel::Le : ta::Rel::Lt,
                                     pick(rng, 1, max_const)});
        a.locations.push_back(loc);
    }
    a.initial = 0;
    int nedges = pick(rng, 1, 2 * nloc);
    for (int i = 0; i < nedges; ++i) {
        ta::Edge e;
        e.source = pick(rng, 0, nloc - 1);
        e.target = pick(rng, 0, nloc - 1);
        int nguards = pick(rng, 0, 2);
        for (int g = 0; g < nguards; ++g)
            e.guard.push_back({pick(rng, 1, nclk), 0,
                               static_cast<ta::Rel>(pick(rng, 0, 4)),
                               pick(rng, 0, max_const)});
        if (chance(rng, 0.6))
            e.obs_guard.push_back({pick(rng, 0, n_obs - 1), chance(rng, 0.5)});
        if (chance(rng, 0.5)) e.resets.push_back(pick(rng, 1, nclk));
        a.edges.push_back(e);
    }
    a.validate();
    return a;
}

namespace {

ta::PropExprPtr random_prop_rec(Rng& rng, const ta::TimedAutomaton& a,
                                int depth) {
    auto wrap = [](auto node) {
        return std::make_shared<const ta::PropExpr>(ta::PropExpr{node});
    };
    if (depth <= 1 || chance(rng, 0.35)) {
        switch (pick(rng, 0, 3)) {
            case 0:
                return wrap(ta::PAt{
                    pick(rng, 0, static_cast<int>(a.locations.size()) - 1)});
            case 1:
                return wrap(ta::PObs{
                    pick(rng, 0, static_cast<int>(a.observations.size()) - 1)});
            case 2:
                return wrap(ta::PVisited{
                    pick(rng, 0, static_cast<int>(a.locations.size()) - 1)});
            default:
                if (chance(rng, 0.3))
                    return wrap(ta::PEntered{
                        pick(rng, 0, static_cast<int>(a.locations.size()) - 1)});
                return wrap(ta::PObs{
                    pick(rng, 0, static_cast<int>(a.observations.size()) - 1)});
        }
    }
    switch (pick(rng, 0, 2)) {
        case 0: return wrap(ta::PNot{random_prop_rec(rng, a, depth - 1)});
        case 1:
            return wrap(ta::PAnd{random_prop_rec(rng, a, depth - 1),
                                 random_prop_rec(rng, a, depth - 1)});
        default:
            return wrap(ta::POr{random_prop_rec(rng, a, depth - 1),
                                random_prop_rec(rng, a, depth - 1)});
    }
}

}  // namespace

ta::SafetyProperty random_property(Rng& rng, const ta::TimedAutomaton& a) {
    ta::SafetyProperty p;
    p.name = "random";
    p.bad = random_prop_rec(rng, a, 3);
    if (chance(rng, 0.3)) {
        int nclk = static_cast<int>(a.clocks.size());
        p.clock_constraint.push_back({pick(rng, 1, nclk), 0,
                                      static_cast<ta::Rel>(pick(rng, 0, 4)),
                                      pick(rng, 0, 5)});
    }
    return p;
}

sim::Trace random_trace(Rng& rng, int max_steps) {
    sim::Trace t;
    t.header.scenario_digest = "synthetic";
    t.header.network.lanes.push_back({0, 2000.0});
    if (chance(rng, 0.5))
        t.header.network.intersection.push_back({0, {40.0, 55.0}});
    t.header.network.signs.push_back({traffic::SignKind::Stop, 0, 30.0});
    if (chance(rng, 0.5)) t.header.network.crossings.push_back({0, {60.0, 63.0}});
    t.header.agents.push_back({"E", traffic::AgentKind::Car, 4.5});
    t.header.agents.push_back({"B", traffic::AgentKind::Car, 4.0});
    t.header.ego = "E";
    t.header.dt = 0.1;

    static const char* locs[] = {"approach", "decelerate", "stopped", "proceed"};
    int n = pick(rng, 2, max_steps);
    double pos = grid(rng, 0.0, 10.0);
    double bpos = pos + grid(rng, 10.0, 30.0);
    int loc_idx = 0;
    for (int k = 0; k < n; ++k) {
        sim::TraceStep s;
        s.step = k;
        s.time = k * t.header.dt;
        double speed = pick(rng, 0, 12);
        pos = std::min(pos + speed * t.header.dt, 2000.0);
        double bspeed = pick(rng, 0, 8);
        bpos = std::min(bpos + bspeed * t.header.dt, 2000.0);
        s.agents.push_back({"E", 0, pos, speed, 0.0, traffic::TurnSignal::Off,
                            true});
        s.agents.push_back({"B", 0, bpos, bspeed, 0.0, traffic::TurnSignal::Off,
                            false});
        s.observations["stop_sign_ahead"] = chance(rng, 0.5);
        s.observations["safe_gap"] = chance(rng, 0.5);
        if (chance(rng, 0.1)) loc_idx = pick(rng, 0, 3);
        s.location = locs[loc_idx];
        t.steps.push_back(std::move(s));
    }
    return t;
}

assertions::Assertion random_assertion(Rng& rng, int index) {
    assertions::Assertion a;
    a.name = "r" + std::to_string(index);
    a.kind = static_cast<assertions::Kind>(pick(rng, 0, 3));
    a.flavor = chance(rng, 0.5) ? assertions::Flavor::Temporal
                                : assertions::Flavor::Physical;
    a.window = a.flavor == assertions::Flavor::Temporal
                   ? grid(rng, 0.2, 3.0)
                   : grid(rng, 1.0, 10.0);
    a.all_edges = chance(rng, 0.25);

    static const char* preds[] = {
        "speed(ego) <= 10",
        "speed(ego) >= 1",
        "obs(safe_gap)",
        "obs(stop_sign_ahead) | speed(ego) < 6",
        "loc(stopped) | speed(ego) > 0",
        "pos(ego) < 500",
        "dist_to_agent(ego, B) >= 0 | lane(B) = 0",
        "in_intersection(ego)",
        "passed_sign(ego, stop)",
        "!obs(safe_gap) & loc(proceed)",
        "min_gap(ego, *) >= -100",
        "prev(speed(ego) >= 0)",
        "visited(stopped)",
        "entered(proceed) | true",
    };
    const int npreds = static_cast<int>(sizeof(preds) / sizeof(preds[0]));
    a.condition_text = preds[pick(rng, 0, npreds - 1)];
    a.condition = pred::parse_predicate(a.condition_text);
    if (a.kind != assertions::Kind::Invariant) {
        a.trigger_text = preds[pick(rng, 0, npreds - 1)];
        a.trigger = pred::parse_predicate(a.trigger_text);
    }
    return a;
}

}  // namespace oracle
