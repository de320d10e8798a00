#pragma once

#include <string>
#include <vector>

#include "crosscheck/predicate.hpp"
#include "crosscheck/trace.hpp"

namespace crosscheck::assertions {

enum class Kind { Invariant, Execution, PreCondition, PostCondition };
enum class Flavor { Temporal, Physical };

const char* to_string(Kind k);
const char* to_string(Flavor f);

struct Assertion {
    std::string name;
    Kind kind = Kind::Invariant;
    Flavor flavor = Flavor::Temporal;  // pre/post only
    double window = 0.0;               // seconds (temporal) or meters (physical)
    bool all_edges = false;            // edges=all: every true step triggers
    pred::PredicatePtr trigger;        // unused for Invariant
    pred::PredicatePtr condition;
    std::string trigger_text;
    std::string condition_text;
};

struct Failure {
    int reference_step = -1;  // -1 for invariant violations
    int step = 0;
    std::string detail;  // evaluated values at the failing step
};

enum class AssertVerdict { Pass, Fail, Vacuous };
const char* to_string(AssertVerdict v);

struct AssertionResult {
    std::string name;
    AssertVerdict verdict = AssertVerdict::Pass;
    std::vector<int> reference_points;
    std::vector<Failure> failures;
    int clipped_windows = 0;  // windows cut short at trace boundaries
};

struct SuiteSummary {
    int passed = 0;
    int failed = 0;
    int vacuous = 0;
};

// Stanza syntax, one assertion each:
//
//   assert <name> kind=<invariant|execution|pre|post> [flavor=temporal|physical]
//          [window=<v>] [edges=all]
//     trigger: <predicate>
//     condition: <predicate>
//
// Schema violations (unknown kind, missing window, bad predicate) raise
// std::invalid_argument naming the stanza and line.
std::vector<Assertion> parse_assertions(const std::string& text,
                                        const usl::FormulaLibrary& lib =
                                            usl::FormulaLibrary::with_defaults());
std::vector<Assertion> load_assertions(const std::string& path,
                                       const usl::FormulaLibrary& lib =
                                           usl::FormulaLibrary::with_defaults());

// Steps where the trigger is true after being false (step 0 counts when true
// there); with all_edges every true step is returned.
std::vector<int> find_reference_points(const sim::Trace& trace,
                                       const Assertion& a);

AssertionResult check_assertion(const sim::Trace& trace, const Assertion& a);

// Independent evaluation of each assertion over the same immutable trace.
// `parallel` fans the assertions out over OpenMP threads; verdicts are
// identical either way.
std::vector<AssertionResult> check_suite(const sim::Trace& trace,
                                         const std::vector<Assertion>& as,
                                         bool parallel = false);

SuiteSummary summarize(const std::vector<AssertionResult>& results);

}  // namespace crosscheck::assertions
