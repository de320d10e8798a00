#pragma once

#include "crosscheck/assertions.hpp"

namespace oracle {

// Plain full-scan reference for the assertion engine: reference points and
// windows are recomputed here by direct loops over every step, one kind at a
// time, sharing only the predicate evaluator with production.
crosscheck::assertions::AssertionResult naive_check(
    const crosscheck::sim::Trace& trace,
    const crosscheck::assertions::Assertion& a);

}  // namespace oracle
