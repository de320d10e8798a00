#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "crosscheck/formula.hpp"
#include "crosscheck/spatial_eval.hpp"
#include "crosscheck/trace.hpp"

namespace crosscheck::pred {

// Boolean conditions over trace fields:
//
//   speed(ego) = 0 & pos(M) >= 37.8
//   loc(proceed) & !visited(stopped)
//   usl("sg(ego) ; len >= 0", ahead, 30)
//   prev(in_intersection(ego)) | dist_to_sign(ego, stop) > 5
//
// Numeric terms: speed/pos/accel/size/lane(id), time, step, dwell(location),
// dist_to_sign(id, kind), dist_to_crossing(id), dist_to_agent(id, id),
// min_gap(id, *). Boolean atoms: loc/entered/left/visited(location),
// in_intersection(id), passed_sign(id, kind), aut(id)=0|1,
// turn_signal(id)=off|left|right, obs(name), usl("formula"[, ahead|around[, H]]),
// prev(expr), true, false. `ego` names the trace's ego agent.
struct Predicate;
using PredicatePtr = std::shared_ptr<const Predicate>;

// Where a predicate is being evaluated. Live simulation supplies only the
// snapshot; trace-backed evaluation also enables history atoms (loc, entered,
// left, visited, dwell, prev, obs).
struct EvalInput {
    const traffic::Snapshot* snap = nullptr;
    std::string ego;
    double horizon = 30.0;
    usl::EvalConfig usl_cfg;
    const sim::Trace* trace = nullptr;
    std::size_t step = 0;
};

PredicatePtr parse_predicate(const std::string& text,
                             const usl::FormulaLibrary& lib =
                                 usl::FormulaLibrary::with_defaults());

// Throws std::invalid_argument on unresolvable references; messages carry the
// offending name.
bool eval_predicate(const Predicate& p, const EvalInput& in);

// Convenience: evaluate over a stored trace step.
bool eval_on_trace(const Predicate& p, const sim::Trace& trace,
                   std::size_t step,
                   const usl::EvalConfig& cfg = {});

const std::string& predicate_text(const Predicate& p);

}  // namespace crosscheck::pred
