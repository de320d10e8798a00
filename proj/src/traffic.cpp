#include "crosscheck/traffic.hpp"

#include <set>

namespace crosscheck::traffic {

const char* to_string(SignKind k) {
    return k == SignKind::Stop ? "stop" : "give_way";
}

const char* to_string(TurnSignal t) {
    switch (t) {
        case TurnSignal::Left: return "left";
        case TurnSignal::Right: return "right";
        default: return "off";
    }
}

const char* to_string(AgentKind k) {
    switch (k) {
        case AgentKind::Cyclist: return "cyclist";
        case AgentKind::Pedestrian: return "pedestrian";
        default: return "car";
    }
}

const Lane* RoadNetwork::find_lane(int id) const {
    for (const Lane& l : lanes)
        if (l.id == id) return &l;
    return nullptr;
}

double RoadNetwork::lane_length(int id) const {
    const Lane* l = find_lane(id);
    if (!l) throw std::invalid_argument("unknown lane " + std::to_string(id));
    return l->length;
}

std::optional<Interval> RoadNetwork::intersection_on(int lane) const {
    for (const IntersectionSpan& s : intersection)
        if (s.lane == lane) return s.span;
    return std::nullopt;
}

void RoadNetwork::validate() const {
    std::set<int> seen;
    for (const Lane& l : lanes) {
        if (!seen.insert(l.id).second)
            throw std::invalid_argument("duplicate lane id " + std::to_string(l.id));
        if (l.length <= 0.0)
            throw std::invalid_argument("lane " + std::to_string(l.id) +
                                        " has non-positive length");
    }
    auto check_interval = [&](int lane, const Interval& iv, const char* what) {
        double len = lane_length(lane);
        if (iv.lo > iv.hi)
            throw std::invalid_argument(std::string(what) + ": inverted interval");
        if (iv.lo < 0.0 || iv.hi > len)
            throw std::invalid_argument(std::string(what) + " outside lane bounds");
    };
    for (const IntersectionSpan& s : intersection)
        check_interval(s.lane, s.span, "intersection span");
    for (const Crossing& c : crossings) check_interval(c.lane, c.span, "crossing");
    for (const Sign& s : signs) {
        double len = lane_length(s.lane);
        if (s.pos < 0.0 || s.pos > len)
            throw std::invalid_argument("sign outside lane bounds");
    }
}

double braking_distance(double speed, const TrafficConfig& cfg) {
    return speed * speed / (2.0 * cfg.b_max);
}

std::vector<Reservation> derive_reservations(const RoadNetwork& network,
                                             const std::vector<Agent>& agents,
                                             const TrafficConfig& cfg) {
    std::vector<Reservation> out;
    out.reserve(agents.size());
    for (const Agent& a : agents) {
        double len = network.lane_length(a.lane);
        Interval iv;
        if (a.kind == AgentKind::Pedestrian) {
            double w = cfg.pedestrian_width / 2.0;
            iv = {a.pos - w, a.pos + w};
        } else {
            iv = {a.pos - a.size, a.pos + braking_distance(a.speed, cfg)};
        }
        out.push_back({a.id, a.lane, iv.clipped(0.0, len)});
    }
    return out;
}

Snapshot Snapshot::make(RoadNetwork network, std::vector<Agent> agents,
                        double time, const TrafficConfig& cfg) {
    network.validate();
    Snapshot s;
    s.reservations = derive_reservations(network, agents, cfg);
    s.network = std::move(network);
    s.agents = std::move(agents);
    s.time = time;
    return s;
}

const Agent* Snapshot::find_agent(const std::string& id) const {
    for (const Agent& a : agents)
        if (a.id == id) return &a;
    return nullptr;
}

const Reservation* Snapshot::reservation_of(const std::string& id) const {
    for (const Reservation& r : reservations)
        if (r.agent == id) return &r;
    return nullptr;
}

bool intersection_occupied(const Snapshot& snap) {
    for (const Reservation& r : snap.reservations) {
        auto span = snap.network.intersection_on(r.lane);
        if (span && r.interval.overlaps(*span)) return true;
    }
    return false;
}

std::vector<Interval> free_intervals(const Snapshot& snap, const View& view) {
    const Lane* lane = snap.network.find_lane(view.lane);
    if (!lane)
        throw std::invalid_argument("free_intervals: unknown lane " +
                                    std::to_string(view.lane));
    if (view.extent.lo > view.extent.hi)
        throw std::invalid_argument("free_intervals: inverted view extent");

    // Degenerate views hold no space and count as free.
    if (view.extent.degenerate()) return {view.extent};

    std::vector<Interval> blocked;
    for (const Reservation& r : snap.reservations)
        if (r.lane == view.lane) blocked.push_back(r.interval);

    auto span = snap.network.intersection_on(view.lane);
    if (span && intersection_occupied(snap)) blocked.push_back(*span);

    return complement_within(view.extent, blocked);
}

View view_ahead(const Snapshot& snap, const std::string& ego, double horizon) {
    const Agent* a = snap.find_agent(ego);
    if (!a) throw std::invalid_argument("view_ahead: unknown agent " + ego);
    const Reservation* r = snap.reservation_of(ego);
    double len = snap.network.lane_length(a->lane);
    double front = std::min(r->interval.hi, len);
    return {a->lane, {front, std::min(front + horizon, len)}, ego};
}

}  // namespace crosscheck::traffic
