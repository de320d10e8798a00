#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "crosscheck/dbm.hpp"

namespace crosscheck::ta {

enum class Rel { Lt, Le, Eq, Ge, Gt };

// x_i ~ c or x_i - x_j ~ c with integer c (in ticks) and clock index 0 = none.
struct ClockConstraint {
    int clock = 0;        // 1-based DBM index
    int minus_clock = 0;  // 0 when absent
    Rel rel = Rel::Le;
    std::int32_t ticks = 0;
};

struct ObsLiteral {
    int obs = 0;
    bool value = true;
};

using Valuation = std::uint32_t;  // bit i = observation i

bool literals_hold(const std::vector<ObsLiteral>& lits, Valuation v);

struct Location {
    std::string name;
    std::string action;  // actuation symbol for the simulator's action table
    std::vector<ClockConstraint> invariant;  // upper bounds only
};

struct Edge {
    int source = 0;
    int target = 0;
    std::vector<ClockConstraint> guard;
    std::vector<ObsLiteral> obs_guard;
    std::string action;  // transition label, informational
    std::vector<int> resets;
};

// Remembered duration bounds of a compiled diagram step, in seconds.
struct DurationNote {
    int location = 0;
    double min_seconds = 0.0;
    double max_seconds = std::numeric_limits<double>::infinity();
};

struct TimedAutomaton {
    std::vector<std::string> clocks;        // DBM index = position + 1
    std::vector<std::string> observations;  // valuation bit = position
    std::vector<Location> locations;
    int initial = 0;
    std::vector<Edge> edges;
    double time_unit = 0.1;  // seconds per tick
    std::vector<DurationNote> duration_notes;

    int clock_index(const std::string& name) const;       // throws if unknown
    int observation_index(const std::string& name) const;  // throws if unknown
    int location_index(const std::string& name) const;     // throws if unknown
    std::int32_t max_constant() const;

    // Structural checks: indices in range, invariants are upper bounds,
    // exactly one initial location.
    void validate() const;
};

// Apply a constraint conjunction to a zone (intersection).
void constrain_all(Dbm& zone, const std::vector<ClockConstraint>& cs);

// ---------------------------------------------------------------------------
// Safety properties: a bad-state predicate over location membership,
// observation literals and location history, plus an optional clock
// constraint conjunction.

struct PropExpr;
using PropExprPtr = std::shared_ptr<const PropExpr>;

struct PTrue {};
struct PObs { int obs; };
struct PAt { int location; };
struct PVisited { int location; };
struct PEntered { int location; };
struct PNot { PropExprPtr sub; };
struct PAnd { PropExprPtr lhs, rhs; };
struct POr { PropExprPtr lhs, rhs; };

struct PropExpr {
    std::variant<PTrue, PObs, PAt, PVisited, PEntered, PNot, PAnd, POr> node;
};

struct SafetyProperty {
    std::string name;
    PropExprPtr bad;
    std::vector<ClockConstraint> clock_constraint;  // optional conjunction
    std::string source_text;                        // original bad expression
};

// Locations appearing in visited() atoms; these get history bits in search.
std::vector<int> visited_locations(const PropExpr& e);
// Locations appearing in entered() atoms.
std::vector<int> entered_locations(const PropExpr& e);
bool uses_entered(const PropExpr& e);

// Parse `entered(proceed) & (!visited(stopped) | !safe_gap)` style text.
// Clock constraints are not part of this grammar; they are declared
// separately. Throws std::invalid_argument with a message naming the symbol.
PropExprPtr parse_prop_expr(const std::string& text, const TimedAutomaton& ta);

// Evaluate the boolean part of a bad predicate.
bool prop_expr_holds(const PropExpr& e, int location, Valuation v,
                     std::uint64_t visited_bits,
                     const std::vector<int>& visited_locs, int entered_location);

// ---------------------------------------------------------------------------
// Rule behaviour diagrams: ordered steps with triggers, actions and
// duration bounds. Compiled to a timed automaton with one clock that is
// reset on every step entry.

struct DiagramBranch {
    std::string target;
    std::vector<std::pair<std::string, bool>> trigger;
};

struct DiagramStep {
    std::string name;
    std::vector<std::pair<std::string, bool>> trigger;  // observation literals
    std::string action = "approach";
    double min_duration = 0.0;
    double max_duration = std::numeric_limits<double>::infinity();
    std::vector<DiagramBranch> branches;  // empty: fall through to next step
};

struct RuleDiagram {
    std::vector<std::string> observations;
    std::vector<DiagramStep> steps;
    double time_unit = 0.1;
    std::string terminal_action = "approach";
};

// One location per step plus initial and terminal; per-step clock t reset on
// entry; invariant t <= max_duration when finite; exit guard t >= min_duration
// plus the next step's trigger. Throws on duplicate step names, negative
// durations or min > max.
TimedAutomaton compile_diagram(const RuleDiagram& d);

// ---------------------------------------------------------------------------
// Observation environment: verification explores all observation valuations
// unless a location restricts some observation to a fixed value. Every
// restriction is an assumption and is exported as one.

struct ObservationEnvironment {
    struct Restriction {
        int location = 0;
        int obs = 0;
        bool value = true;
    };
    std::vector<Restriction> restrictions;

    bool allows(int location, Valuation v) const;
};

struct Assumption {
    std::string name;
    std::string kind;  // step_duration | clock_bound | environment | observation
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    std::string detail;
};

}  // namespace crosscheck::ta
