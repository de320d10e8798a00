#pragma once

#include <map>
#include <string>
#include <vector>

#include "crosscheck/scenario.hpp"
#include "crosscheck/traffic.hpp"

namespace crosscheck::sim {

struct AgentRecord {
    std::string id;
    int lane = 0;
    double pos = 0.0;
    double speed = 0.0;
    double accel = 0.0;
    traffic::TurnSignal turn_signal = traffic::TurnSignal::Off;
    bool aut = false;
};

struct TraceStep {
    int step = 0;
    double time = 0.0;
    std::vector<AgentRecord> agents;
    std::map<std::string, bool> observations;
    std::string location;  // ego controller location

    const AgentRecord* find(const std::string& id) const;
};

// Static per-agent data needed to rebuild snapshots from step records.
struct AgentStatic {
    std::string id;
    traffic::AgentKind kind = traffic::AgentKind::Car;
    double size = 4.5;
};

struct TraceHeader {
    std::string scenario_digest;
    std::string controller_digest;
    traffic::RoadNetwork network;
    std::vector<AgentStatic> agents;
    std::string ego;
    double dt = 0.1;
    double horizon = 30.0;
    traffic::TrafficConfig traffic;
    bool observation_override = false;  // witness replays force observations
};

struct Trace {
    TraceHeader header;
    std::vector<TraceStep> steps;

    traffic::Snapshot snapshot_at(std::size_t step) const;
};

// Newline-delimited records: one header line, then one line per step.
// Floating-point fields carry 9 significant digits.
std::string serialize_trace(const Trace& t);
void save_trace(const Trace& t, const std::string& path);
Trace parse_trace(const std::string& text);
Trace load_trace(const std::string& path);

}  // namespace crosscheck::sim
