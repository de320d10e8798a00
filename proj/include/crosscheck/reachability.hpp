#pragma once

#include <optional>

#include "crosscheck/automaton.hpp"

namespace crosscheck::ta {

struct WitnessStep {
    enum class Kind { SetObservations, FireEdge };
    Kind kind = Kind::FireEdge;
    Valuation valuation = 0;  // for SetObservations
    int edge = -1;            // for FireEdge
    Dbm zone{1};              // delay-closed zone after the step
};

struct Witness {
    Valuation initial_valuation = 0;
    std::vector<WitnessStep> steps;
    // Dotted trail like "approach --{at_stop_line}--> proceed", for reports.
    std::string render(const TimedAutomaton& ta) const;
};

struct Verdict {
    bool safe = true;
    std::optional<Witness> witness;
    std::size_t explored = 0;
};

// Breadth-first zone reachability of the bad predicate over
// (location, observation valuation, zone) nodes extended with the history
// bits the property's visited() atoms need. Observation changes are explicit
// steps; zone inclusion subsumption plus max-constant normalization bound the
// search. Witnesses are minimal in step count, ties broken by declaration
// order.
Verdict reachability(const TimedAutomaton& ta, const SafetyProperty& prop,
                     const ObservationEnvironment& env = {});

// Re-executes a witness against plain automaton semantics (no normalization):
// every guard, invariant and environment restriction must hold step by step
// and the final state must satisfy the bad predicate.
bool replay_witness(const TimedAutomaton& ta, const SafetyProperty& prop,
                    const ObservationEnvironment& env, const Witness& w);

// Machine-readable list of every axiom a verdict rests on: environment
// restrictions, diagram duration bounds, and clock constants in guards and
// invariants.
std::vector<Assumption> export_assumptions(const TimedAutomaton& ta,
                                           const SafetyProperty& prop,
                                           const ObservationEnvironment& env);

}  // namespace crosscheck::ta
