#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crosscheck/geometry.hpp"

namespace crosscheck::traffic {

enum class SignKind { Stop, GiveWay };
enum class TurnSignal { Off, Left, Right };
enum class AgentKind { Car, Cyclist, Pedestrian };

const char* to_string(SignKind k);
const char* to_string(TurnSignal t);
const char* to_string(AgentKind k);

struct Lane {
    int id = 0;
    double length = 0.0;
};

struct Sign {
    SignKind kind = SignKind::Stop;
    int lane = 0;
    double pos = 0.0;
};

struct Crossing {
    int lane = 0;
    Interval span;
};

// One longitudinal slice of the (single, optional) intersection region.
struct IntersectionSpan {
    int lane = 0;
    Interval span;
};

struct RoadNetwork {
    std::vector<Lane> lanes;
    std::vector<IntersectionSpan> intersection;  // empty = no intersection
    std::vector<Sign> signs;
    std::vector<Crossing> crossings;

    const Lane* find_lane(int id) const;
    double lane_length(int id) const;
    // Intersection slice on the given lane, if the intersection crosses it.
    std::optional<Interval> intersection_on(int lane) const;

    // Throws std::invalid_argument on duplicate lanes, out-of-range
    // positions or inverted intervals.
    void validate() const;
};

struct Agent {
    std::string id;
    int lane = 0;
    double pos = 0.0;    // front of vehicle body
    double speed = 0.0;  // >= 0
    double accel = 0.0;
    double size = 4.5;   // > 0
    bool aut = false;
    TurnSignal turn_signal = TurnSignal::Off;
    AgentKind kind = AgentKind::Car;
};

struct Reservation {
    std::string agent;
    int lane = 0;
    Interval interval;
};

struct TrafficConfig {
    double b_max = 5.0;            // max braking deceleration, m/s^2
    double pedestrian_width = 1.0; // point reservation width for pedestrians
};

double braking_distance(double speed, const TrafficConfig& cfg);

// The road world at one instant. Reservations are derived, never set by hand.
struct Snapshot {
    RoadNetwork network;
    std::vector<Agent> agents;
    std::vector<Reservation> reservations;
    double time = 0.0;

    static Snapshot make(RoadNetwork network, std::vector<Agent> agents,
                         double time, const TrafficConfig& cfg = {});

    const Agent* find_agent(const std::string& id) const;
    const Reservation* reservation_of(const std::string& id) const;
};

// A lane-plus-interval window some formula is evaluated over.
struct View {
    int lane = 0;
    Interval extent;
    std::optional<std::string> owner;
};

// Body plus braking envelope, clipped to lane bounds. Pedestrians occupy a
// fixed-width slice centered on their position instead.
std::vector<Reservation> derive_reservations(const RoadNetwork& network,
                                             const std::vector<Agent>& agents,
                                             const TrafficConfig& cfg = {});

// True when any reservation overlaps the intersection slice of its own lane.
bool intersection_occupied(const Snapshot& snap);

// Maximal free sub-intervals of the view: space covered by no reservation on
// the view's lane, minus the lane's intersection slice whenever any agent's
// reservation sits in the intersection region (the occupied region projects
// onto every lane it crosses).
std::vector<Interval> free_intervals(const Snapshot& snap, const View& view);

// View on the ego's lane from the front of its reservation, `horizon` meters
// ahead, clipped at the lane end.
View view_ahead(const Snapshot& snap, const std::string& ego, double horizon);

}  // namespace crosscheck::traffic
