#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crosscheck/keyvalue.hpp"
#include "crosscheck/traffic.hpp"

namespace crosscheck::sim {

// Scripted speed setpoint: at time `at`, the named (non-ego) agent switches
// to `speed` and keeps it until the next event.
struct ScriptEvent {
    double at = 0.0;
    std::string agent;
    double speed = 0.0;
};

// One perturbation axis of a boundary/sweep/random campaign, declared in the
// scenario file next to the geometry it perturbs.
struct CampaignAxis {
    std::string name;      // assumption or initial-condition label
    std::string path;      // scenario parameter path, e.g. agents.M.speed
    double lo = 0.0;
    double hi = 0.0;       // verified range [lo, hi]; lo == hi for a threshold
    double epsilon = 0.1;
};

struct CampaignSpec {
    std::vector<CampaignAxis> axes;
    std::string strategy = "boundary";  // boundary | sweep | random
    int trials = 8;                     // per axis for sweep/random
};

struct Scenario {
    traffic::RoadNetwork network;
    std::vector<traffic::Agent> agents;
    std::string ego;
    std::vector<ScriptEvent> events;

    double duration = 10.0;
    double dt = 0.1;
    std::uint64_t seed = 0;

    double cruise = 10.0;   // target speed for approach/proceed actions
    double a_max = 2.0;     // proceed acceleration, m/s^2
    double v_max = 15.0;
    double horizon = 30.0;  // default observation view length
    traffic::TrafficConfig traffic;

    CampaignSpec campaign;  // optional; axes empty when absent

    void validate() const;  // throws std::invalid_argument
};

Scenario parse_scenario(const kv::Node& root);
Scenario load_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& s);
void save_scenario(const Scenario& s, const std::string& path);

// Dotted parameter paths into a scenario:
//   agents.<id>.pos|speed|size|accel
//   intersection.<lane>.lo|hi
//   signs.<index>.pos          crossings.<index>.lo|hi
//   events.<index>.at|speed
//   sim.duration|dt|cruise|a_max|b_max|v_max|horizon
double get_param(const Scenario& s, const std::string& path);
void set_param(Scenario& s, const std::string& path, double value);

// FNV-1a over the canonical serialization; stable content id for reports.
std::string scenario_digest(const Scenario& s);
std::string content_digest(const std::string& bytes);

}  // namespace crosscheck::sim
