#include "crosscheck/simulator.hpp"

#include <cmath>

namespace crosscheck::sim {

namespace {
constexpr double kGuardEps = 1e-7;

bool clock_guard_holds(const std::vector<ta::ClockConstraint>& cs,
                       const std::vector<double>& clocks, double unit) {
    for (const ta::ClockConstraint& c : cs) {
        double x = clocks[c.clock - 1];
        if (c.minus_clock) x -= clocks[c.minus_clock - 1];
        double bound = c.ticks * unit;
        bool ok = true;
        switch (c.rel) {
            case ta::Rel::Lt: ok = x < bound - kGuardEps; break;
            case ta::Rel::Le: ok = x <= bound + kGuardEps; break;
            case ta::Rel::Eq: ok = std::fabs(x - bound) <= kGuardEps; break;
            case ta::Rel::Ge: ok = x >= bound - kGuardEps; break;
            case ta::Rel::Gt: ok = x > bound + kGuardEps; break;
        }
        if (!ok) return false;
    }
    return true;
}

struct ControllerState {
    int location;
    std::vector<double> clocks;

    // One enabled edge per step, declaration order decides ties.
    void step(const ta::TimedAutomaton& ta, ta::Valuation obs, double dt) {
        for (double& c : clocks) c += dt;
        for (const ta::Edge& e : ta.edges) {
            if (e.source != location) continue;
            if (!ta::literals_hold(e.obs_guard, obs)) continue;
            if (!clock_guard_holds(e.guard, clocks, ta.time_unit)) continue;
            location = e.target;
            for (int r : e.resets) clocks[r - 1] = 0.0;
            break;
        }
    }
};

}  // namespace

double apply_action(const std::string& action, double speed, const Scenario& sc,
                    double dt) {
    double cruise = std::min(sc.cruise, sc.v_max);
    if (action == "decelerate")
        return std::max(speed - sc.traffic.b_max * dt, 0.0);
    if (action == "stopped") return 0.0;
    // approach and proceed drive toward cruise and hold it
    if (speed < cruise) return std::min(speed + sc.a_max * dt, cruise);
    return std::min(speed, cruise);
}

ta::Valuation valuation_from(const ta::TimedAutomaton& controller,
                             const std::map<std::string, bool>& obs) {
    ta::Valuation v = 0;
    for (size_t i = 0; i < controller.observations.size(); ++i) {
        auto it = obs.find(controller.observations[i]);
        if (it != obs.end() && it->second) v |= (ta::Valuation{1} << i);
    }
    return v;
}

Trace run(const Scenario& sc, const ta::TimedAutomaton& controller,
          const Bindings& bindings, const std::string& scenario_digest_str,
          const std::string& controller_digest_str,
          const ObservationOverride* override_obs) {
    sc.validate();
    controller.validate();
    for (const ObservationBinding& b : bindings)
        controller.observation_index(b.observation);  // must be declared
    for (const std::string& obs : controller.observations) {
        bool bound = false;
        for (const ObservationBinding& b : bindings)
            bound |= (b.observation == obs);
        if (!bound && !override_obs)
            throw std::invalid_argument("controller observation '" + obs +
                                        "' is not bound to a formula");
    }

    Trace trace;
    trace.header.scenario_digest = scenario_digest_str.empty()
                                       ? scenario_digest(sc)
                                       : scenario_digest_str;
    trace.header.controller_digest = controller_digest_str;
    trace.header.network = sc.network;
    for (const traffic::Agent& a : sc.agents)
        trace.header.agents.push_back({a.id, a.kind, a.size});
    trace.header.ego = sc.ego;
    trace.header.dt = sc.dt;
    trace.header.horizon = sc.horizon;
    trace.header.traffic = sc.traffic;
    trace.header.observation_override = override_obs != nullptr;

    std::vector<traffic::Agent> agents = sc.agents;
    traffic::Agent* ego = nullptr;
    for (traffic::Agent& a : agents)
        if (a.id == sc.ego) ego = &a;
    if (!ego) throw std::invalid_argument("scenario has no ego agent");

    ControllerState ctrl{controller.initial,
                         std::vector<double>(controller.clocks.size(), 0.0)};

    const int total_steps =
        static_cast<int>(std::ceil(sc.duration / sc.dt - 1e-9)) + 1;
    std::vector<ScriptEvent> pending = sc.events;
    std::stable_sort(pending.begin(), pending.end(),
                     [](const ScriptEvent& a, const ScriptEvent& b) {
                         return a.at < b.at;
                     });
    size_t next_event = 0;

    auto evaluate_observations = [&](const traffic::Snapshot& snap, int step) {
        std::map<std::string, bool> out;
        if (override_obs) {
            const auto& tl = override_obs->timeline;
            if (!tl.empty()) {
                size_t idx = std::min<size_t>(step, tl.size() - 1);
                out = tl[idx];
            }
            for (const std::string& name : controller.observations)
                if (!out.count(name)) out[name] = false;
            return out;
        }
        pred::EvalInput in;
        in.snap = &snap;
        in.ego = sc.ego;
        in.horizon = sc.horizon;
        for (const ObservationBinding& b : bindings) {
            double h = b.horizon > 0 ? b.horizon : sc.horizon;
            bool value = false;
            if (b.is_usl) {
                traffic::View view = traffic::view_ahead(snap, sc.ego, h);
                if (b.view == ObservationBinding::ViewKind::Around) {
                    const traffic::Reservation* r = snap.reservation_of(sc.ego);
                    view.extent.lo = r->interval.lo;
                }
                value = usl::evaluate(snap, view, *b.formula);
            } else {
                value = pred::eval_predicate(*b.predicate, in);
            }
            out[b.observation] = value;
        }
        return out;
    };

    double time = 0.0;
    for (int step = 0; step < total_steps; ++step) {
        if (step > 0) {
            // Integrate one dt: position first (with the old speed), then the
            // speed update from the current location's action.
            for (traffic::Agent& a : agents) {
                double lane_len = sc.network.lane_length(a.lane);
                a.pos = std::min(a.pos + a.speed * sc.dt, lane_len);
                double new_speed;
                if (a.id == sc.ego) {
                    new_speed = apply_action(
                        controller.locations[ctrl.location].action, a.speed, sc,
                        sc.dt);
                    new_speed = std::clamp(new_speed, 0.0, sc.v_max);
                } else {
                    new_speed = a.speed;  // scripted agents hold their setpoint
                }
                a.accel = (new_speed - a.speed) / sc.dt;
                a.speed = new_speed;
            }
            time = step * sc.dt;
            // Events at t <= now switch scripted speeds for the next step.
            while (next_event < pending.size() &&
                   pending[next_event].at <= time + 1e-9) {
                for (traffic::Agent& a : agents)
                    if (a.id == pending[next_event].agent)
                        a.speed = std::clamp(pending[next_event].speed, 0.0,
                                             sc.v_max);
                ++next_event;
            }
        }

        traffic::Snapshot snap =
            traffic::Snapshot::make(sc.network, agents, time, sc.traffic);
        std::map<std::string, bool> obs = evaluate_observations(snap, step);
        ctrl.step(controller, valuation_from(controller, obs), step == 0 ? 0.0 : sc.dt);

        TraceStep ts;
        ts.step = step;
        ts.time = time;
        for (const traffic::Agent& a : agents)
            ts.agents.push_back({a.id, a.lane, a.pos, a.speed, a.accel,
                                 a.turn_signal, a.aut});
        ts.observations = std::move(obs);
        ts.location = controller.locations[ctrl.location].name;
        trace.steps.push_back(std::move(ts));
    }
    return trace;
}

std::vector<std::string> replay_controller(const ta::TimedAutomaton& controller,
                                           const std::vector<ta::Valuation>& obs,
                                           double dt) {
    ControllerState ctrl{controller.initial,
                         std::vector<double>(controller.clocks.size(), 0.0)};
    std::vector<std::string> out;
    for (size_t i = 0; i < obs.size(); ++i) {
        ctrl.step(controller, obs[i], i == 0 ? 0.0 : dt);
        out.push_back(controller.locations[ctrl.location].name);
    }
    return out;
}

}  // namespace crosscheck::sim
