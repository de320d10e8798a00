#pragma once

#include <optional>
#include <string>

#include "crosscheck/automaton.hpp"
#include "crosscheck/keyvalue.hpp"
#include "crosscheck/simulator.hpp"

namespace crosscheck::model {

// A controller file either declares locations and edges directly or a list
// of diagram steps that compile into an automaton. Properties, observation
// bindings and environment restrictions ride along in the same file.
struct ControllerFile {
    ta::TimedAutomaton automaton;
    std::optional<ta::RuleDiagram> diagram;
    std::vector<ta::SafetyProperty> properties;
    sim::Bindings bindings;
    ta::ObservationEnvironment env;
    std::string digest;
    std::string path;
};

ControllerFile load_controller(const std::string& path,
                               const usl::FormulaLibrary& lib =
                                   usl::FormulaLibrary::with_defaults());

// Properties from a standalone file (or the controller file itself),
// resolved against the given automaton.
std::vector<ta::SafetyProperty> load_properties(const std::string& path,
                                                const ta::TimedAutomaton& ta);

// Binding sections of any model file.
sim::Bindings load_bindings(const std::string& path,
                            const usl::FormulaLibrary& lib =
                                usl::FormulaLibrary::with_defaults());

// "t <= 2.5" or "t - u >= 1" against declared clocks; seconds are scaled
// by the automaton's time unit and must land on whole ticks.
ta::ClockConstraint parse_clock_constraint(const std::string& text,
                                           const ta::TimedAutomaton& ta);

}  // namespace crosscheck::model
