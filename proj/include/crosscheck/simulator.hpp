#pragma once

#include <optional>

#include "crosscheck/automaton.hpp"
#include "crosscheck/predicate.hpp"
#include "crosscheck/scenario.hpp"
#include "crosscheck/trace.hpp"

namespace crosscheck::sim {

// Ties a controller observation to its meaning: a spatial formula evaluated
// on the ego's view, or a trace-field predicate on the current step.
struct ObservationBinding {
    std::string observation;
    bool is_usl = true;
    std::string text;
    usl::FormulaPtr formula;
    pred::PredicatePtr predicate;
    enum class ViewKind { Ahead, Around } view = ViewKind::Ahead;
    double horizon = -1.0;  // <= 0 uses the scenario default
};

using Bindings = std::vector<ObservationBinding>;

// Longitudinal command per controller action symbol: approach and proceed
// drive toward cruise speed, decelerate brakes at b_max, stopped holds
// standstill. Returns the new speed after one dt step.
double apply_action(const std::string& action, double speed,
                    const Scenario& sc, double dt);

// Forced observation timeline for witness replays; entry i applies from
// step i on (last entry persists).
struct ObservationOverride {
    std::vector<std::map<std::string, bool>> timeline;
};

// Closed-loop deterministic run: per step the ego's observations are
// evaluated on the current snapshot, the controller fires at most one
// enabled edge (declaration order), the location's action integrates the
// ego, scripted agents follow their event timelines. Equal inputs give
// byte-identical traces.
Trace run(const Scenario& sc, const ta::TimedAutomaton& controller,
          const Bindings& bindings,
          const std::string& scenario_digest_str = "",
          const std::string& controller_digest_str = "",
          const ObservationOverride* override_obs = nullptr);

// Deterministic controller-only replay: feed the recorded observation
// sequence and return the location sequence the automaton would visit.
// The trace conforms when this matches its recorded locations.
std::vector<std::string> replay_controller(const ta::TimedAutomaton& controller,
                                           const std::vector<ta::Valuation>& obs,
                                           double dt);

ta::Valuation valuation_from(const ta::TimedAutomaton& controller,
                             const std::map<std::string, bool>& obs);

}  // namespace crosscheck::sim
