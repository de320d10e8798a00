#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crosscheck/assertions.hpp"
#include "crosscheck/model_files.hpp"
#include "crosscheck/reachability.hpp"
#include "crosscheck/scenario.hpp"

namespace crosscheck::corro {

// A formally verified property paired with the observation semantics that
// let the same property be checked over simulation traces.
struct PropertyBinding {
    ta::TimedAutomaton automaton;
    ta::SafetyProperty property;
    ta::ObservationEnvironment env;
    sim::Bindings bindings;
    std::string controller_digest;
};

// The property's bad predicate becomes an Invariant assertion (negated) over
// trace fields with observation symbols replaced by their bound formulas or
// predicates; step duration bounds become a Post assertion (min dwell) and a
// dwell-bound Invariant (max dwell). Throws when an observation used by the
// property has no binding, naming the symbol.
std::vector<assertions::Assertion> derive_assertions(
    const PropertyBinding& pb,
    const usl::FormulaLibrary& lib = usl::FormulaLibrary::with_defaults());

// Every axiom the campaign perturbs or relies on: the controller's exported
// assumptions plus length thresholds read off the bound observation formulas
// (resolved against the base scenario).
std::vector<ta::Assumption> campaign_assumptions(const PropertyBinding& pb,
                                                 const sim::Scenario& base);

struct GeneratedScenario {
    sim::Scenario scenario;
    std::string label;
    std::vector<std::pair<std::string, double>> params;  // axis name -> value
};

// boundary: {lo-e, lo, lo+e, hi-e, hi, hi+e} per axis (deduplicated,
// physically invalid points dropped), cross-producted for <= 2 axes and
// pairwise beyond that. sweep: `trials` evenly spaced points per axis.
// random: `trials` seeded uniform samples across all axes.
std::vector<GeneratedScenario> generate_scenarios(const sim::Scenario& base,
                                                  const sim::CampaignSpec& spec,
                                                  std::uint64_t seed);

struct TrialResult {
    int index = 0;
    std::string label;
    std::vector<std::pair<std::string, double>> params;
    std::string scenario_file;
    std::string trace_file;
    std::string trace_digest;
    std::vector<assertions::AssertionResult> results;
    assertions::SuiteSummary summary;
    bool non_vacuous = false;
    bool failed = false;
    std::string error;
};

struct ConflictFinding {
    std::string trial_label;
    int step = 0;
    std::string property_a, property_b;
    std::string demand_a, demand_b;
};

struct CorroborationReport {
    std::string property_name;
    std::string controller_digest;
    std::string scenario_digest;
    std::string strategy;
    std::uint64_t seed = 0;
    bool formal_safe = true;
    std::size_t formal_explored = 0;
    std::string witness_text;
    bool witness_replayed = false;    // symbolic replay succeeded
    bool witness_realizable = false;  // scripted re-simulation failed the check
    std::string witness_trial_label;
    std::vector<ta::Assumption> assumptions;
    std::vector<assertions::Assertion> derived;
    std::vector<TrialResult> trials;
    std::vector<ConflictFinding> conflicts;
    std::vector<std::string> findings;
    std::string status;  // corroborated | refuted | inconclusive
    double runtime_ms = 0.0;
};

struct CampaignOptions {
    std::string strategy;       // empty: scenario default
    int trials = 0;             // 0: scenario default
    std::uint64_t seed = 0;
    bool seed_set = false;
    double epsilon = 0.0;       // 0: per-axis defaults
    int workers = 1;
    std::string out_dir;        // empty: nothing written to disk
};

// Formal verification first, then the falsification campaign: simulate every
// generated scenario, check the derived assertions, attempt a witness replay
// when the model checker found one, and aggregate the evidence. A failing
// trial never aborts the remaining trials.
CorroborationReport run_campaign(
    const PropertyBinding& pb, const sim::Scenario& base,
    const CampaignOptions& opts,
    const std::vector<ta::SafetyProperty>& extra_properties = {},
    const usl::FormulaLibrary& lib = usl::FormulaLibrary::with_defaults());

// Steps of a trace where two properties leave no common admissible action
// class (stop-class vs proceed-class per the action table).
std::vector<ConflictFinding> detect_conflicts(
    const PropertyBinding& pb, const std::vector<ta::SafetyProperty>& properties,
    const sim::Trace& trace, const std::string& trial_label,
    const usl::FormulaLibrary& lib = usl::FormulaLibrary::with_defaults());

std::string render_report_json(const CorroborationReport& report);
std::string render_report_markdown(const CorroborationReport& report);

}  // namespace crosscheck::corro
