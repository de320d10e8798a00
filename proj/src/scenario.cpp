#include "crosscheck/scenario.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace crosscheck::sim {

using traffic::Agent;
using traffic::AgentKind;
using traffic::SignKind;
using traffic::TurnSignal;

void Scenario::validate() const {
    network.validate();
    if (dt <= 0.0) throw std::invalid_argument("sim.dt must be positive");
    if (duration < dt)
        throw std::invalid_argument("sim.duration must be at least one step");
    if (!ego.empty()) {
        bool found = false;
        for (const Agent& a : agents) found |= (a.id == ego);
        if (!found)
            throw std::invalid_argument("ego agent '" + ego +
                                        "' is not in the agent list");
    }
    for (const Agent& a : agents) {
        double len = network.lane_length(a.lane);
        if (a.size <= 0.0)
            throw std::invalid_argument("agent " + a.id + ": size must be > 0");
        if (a.speed < 0.0)
            throw std::invalid_argument("agent " + a.id + ": speed must be >= 0");
        if (a.pos < 0.0 || a.pos > len)
            throw std::invalid_argument("agent " + a.id + ": pos outside lane");
    }
    for (const ScriptEvent& e : events) {
        if (e.at < 0.0 || e.at > duration)
            throw std::invalid_argument("event time outside [0, duration]");
        if (e.agent == ego)
            throw std::invalid_argument("ego cannot be scripted by events");
        bool found = false;
        for (const Agent& a : agents) found |= (a.id == e.agent);
        if (!found)
            throw std::invalid_argument("event references unknown agent '" +
                                        e.agent + "'");
    }
    for (const CampaignAxis& ax : campaign.axes) {
        if (ax.epsilon <= 0.0)
            throw std::invalid_argument("campaign axis '" + ax.name +
                                        "': epsilon must be > 0");
        if (ax.lo > ax.hi)
            throw std::invalid_argument("campaign axis '" + ax.name +
                                        "': lo exceeds hi");
    }
    if (campaign.trials < 1)
        throw std::invalid_argument("campaign.trials must be >= 1");
}

namespace {

AgentKind parse_kind(const std::string& s, int line) {
    if (s == "car") return AgentKind::Car;
    if (s == "cyclist") return AgentKind::Cyclist;
    if (s == "pedestrian") return AgentKind::Pedestrian;
    throw kv::FormatError("unknown agent kind '" + s + "'", line);
}

SignKind parse_sign_kind(const std::string& s, int line) {
    if (s == "stop") return SignKind::Stop;
    if (s == "give_way") return SignKind::GiveWay;
    throw kv::FormatError("unknown sign kind '" + s + "'", line);
}

TurnSignal parse_turn(const std::string& s, int line) {
    if (s == "off") return TurnSignal::Off;
    if (s == "left") return TurnSignal::Left;
    if (s == "right") return TurnSignal::Right;
    throw kv::FormatError("unknown turn_signal '" + s + "'", line);
}

}  // namespace

Scenario parse_scenario(const kv::Node& root) {
    Scenario s;
    const kv::Node* net = root.child("network");
    if (!net) throw kv::FormatError("scenario needs a network section", root.line);

    for (const kv::Node* l : net->all("lane"))
        s.network.lanes.push_back(
            {static_cast<int>(l->at_int("id")), l->at_double("length")});
    if (const kv::Node* ix = net->child("intersection")) {
        for (const kv::Node* sp : ix->all("span"))
            s.network.intersection.push_back(
                {static_cast<int>(sp->at_int("lane")),
                 {sp->at_double("from"), sp->at_double("to")}});
    }
    for (const kv::Node* sg : net->all("sign"))
        s.network.signs.push_back({parse_sign_kind(sg->at("kind"), sg->line),
                                   static_cast<int>(sg->at_int("lane")),
                                   sg->at_double("at")});
    for (const kv::Node* cr : net->all("crossing"))
        s.network.crossings.push_back({static_cast<int>(cr->at_int("lane")),
                                       {cr->at_double("from"), cr->at_double("to")}});

    for (const kv::Node* a : root.all("agent")) {
        Agent ag;
        ag.id = a->at("id");
        ag.kind = parse_kind(a->get("kind").value_or("car"), a->line);
        ag.lane = static_cast<int>(a->at_int("lane"));
        ag.pos = a->at_double("pos");
        ag.speed = a->get_double("speed").value_or(0.0);
        ag.accel = a->get_double("accel").value_or(0.0);
        ag.size = a->get_double("size").value_or(4.5);
        ag.aut = a->get_int("aut").value_or(0) != 0;
        ag.turn_signal = parse_turn(a->get("turn_signal").value_or("off"), a->line);
        s.agents.push_back(ag);
    }

    for (const kv::Node* e : root.all("event"))
        s.events.push_back(
            {e->at_double("at"), e->at("agent"), e->at_double("speed")});

    if (const kv::Node* sm = root.child("sim")) {
        s.ego = sm->get("ego").value_or("");
        s.duration = sm->get_double("duration").value_or(s.duration);
        s.dt = sm->get_double("dt").value_or(s.dt);
        s.seed = static_cast<std::uint64_t>(sm->get_int("seed").value_or(0));
        s.cruise = sm->get_double("cruise").value_or(s.cruise);
        s.a_max = sm->get_double("a_max").value_or(s.a_max);
        s.v_max = sm->get_double("v_max").value_or(s.v_max);
        s.horizon = sm->get_double("horizon").value_or(s.horizon);
        s.traffic.b_max = sm->get_double("b_max").value_or(s.traffic.b_max);
        s.traffic.pedestrian_width =
            sm->get_double("pedestrian_width").value_or(s.traffic.pedestrian_width);
    }

    if (const kv::Node* c = root.child("campaign")) {
        for (const kv::Node* ax : c->all("axis"))
            s.campaign.axes.push_back({ax->at("name"), ax->at("path"),
                                       ax->at_double("lo"), ax->at_double("hi"),
                                       ax->get_double("epsilon").value_or(0.1)});
        s.campaign.strategy = c->get("strategy").value_or("boundary");
        s.campaign.trials = static_cast<int>(c->get_int("trials").value_or(8));
    }

    s.validate();
    return s;
}

Scenario load_scenario(const std::string& path) {
    return parse_scenario(kv::parse_file(path));
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

std::string serialize_scenario(const Scenario& s) {
    std::ostringstream os;
    os << "network {\n";
    for (const traffic::Lane& l : s.network.lanes)
        os << "  lane { id " << l.id << "  length " << fmt(l.length) << " }\n";
    if (!s.network.intersection.empty()) {
        os << "  intersection {\n";
        for (const traffic::IntersectionSpan& sp : s.network.intersection)
            os << "    span { lane " << sp.lane << "  from " << fmt(sp.span.lo)
               << "  to " << fmt(sp.span.hi) << " }\n";
        os << "  }\n";
    }
    for (const traffic::Sign& sg : s.network.signs)
        os << "  sign { kind " << traffic::to_string(sg.kind) << "  lane "
           << sg.lane << "  at " << fmt(sg.pos) << " }\n";
    for (const traffic::Crossing& cr : s.network.crossings)
        os << "  crossing { lane " << cr.lane << "  from " << fmt(cr.span.lo)
           << "  to " << fmt(cr.span.hi) << " }\n";
    os << "}\n";
    for (const Agent& a : s.agents) {
        os << "agent { id " << a.id << "  kind " << traffic::to_string(a.kind)
           << "  lane " << a.lane << "  pos " << fmt(a.pos) << "  speed "
           << fmt(a.speed) << "  size " << fmt(a.size) << "  aut "
           << (a.aut ? 1 : 0);
        if (a.accel != 0.0) os << "  accel " << fmt(a.accel);
        if (a.turn_signal != TurnSignal::Off)
            os << "  turn_signal " << traffic::to_string(a.turn_signal);
        os << " }\n";
    }
    for (const ScriptEvent& e : s.events)
        os << "event { at " << fmt(e.at) << "  agent " << e.agent << "  speed "
           << fmt(e.speed) << " }\n";
    os << "sim {\n"
       << "  ego " << s.ego << "\n"
       << "  duration " << fmt(s.duration) << "\n"
       << "  dt " << fmt(s.dt) << "\n"
       << "  seed " << s.seed << "\n"
       << "  cruise " << fmt(s.cruise) << "\n"
       << "  horizon " << fmt(s.horizon) << "\n"
       << "  a_max " << fmt(s.a_max) << "\n"
       << "  b_max " << fmt(s.traffic.b_max) << "\n"
       << "  v_max " << fmt(s.v_max) << "\n"
       << "}\n";
    if (!s.campaign.axes.empty()) {
        os << "campaign {\n";
        for (const CampaignAxis& ax : s.campaign.axes)
            os << "  axis { name " << ax.name << "  path " << ax.path << "  lo "
               << fmt(ax.lo) << "  hi " << fmt(ax.hi) << "  epsilon "
               << fmt(ax.epsilon) << " }\n";
        os << "  strategy " << s.campaign.strategy << "\n"
           << "  trials " << s.campaign.trials << "\n"
           << "}\n";
    }
    return os.str();
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write scenario file: " + path);
    out << serialize_scenario(s);
}

namespace {

struct PathCursor {
    std::vector<std::string> parts;
    const std::string& full;

    [[noreturn]] void fail() const {
        throw std::invalid_argument("parameter path does not resolve: " + full);
    }
};

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : path) {
        if (c == '.') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double* resolve(Scenario& s, const std::string& path) {
    PathCursor pc{split_path(path), path};
    const auto& p = pc.parts;
    if (p.size() == 3 && p[0] == "agents") {
        for (Agent& a : s.agents) {
            if (a.id != p[1]) continue;
            if (p[2] == "pos") return &a.pos;
            if (p[2] == "speed") return &a.speed;
            if (p[2] == "size") return &a.size;
            if (p[2] == "accel") return &a.accel;
        }
        pc.fail();
    }
    if (p.size() == 3 && p[0] == "intersection") {
        int lane = std::stoi(p[1]);
        for (traffic::IntersectionSpan& sp : s.network.intersection) {
            if (sp.lane != lane) continue;
            if (p[2] == "lo") return &sp.span.lo;
            if (p[2] == "hi") return &sp.span.hi;
        }
        pc.fail();
    }
    if (p.size() == 3 && p[0] == "signs") {
        size_t i = std::stoul(p[1]);
        if (i < s.network.signs.size() && p[2] == "pos")
            return &s.network.signs[i].pos;
        pc.fail();
    }
    if (p.size() == 3 && p[0] == "crossings") {
        size_t i = std::stoul(p[1]);
        if (i < s.network.crossings.size()) {
            if (p[2] == "lo") return &s.network.crossings[i].span.lo;
            if (p[2] == "hi") return &s.network.crossings[i].span.hi;
        }
        pc.fail();
    }
    if (p.size() == 3 && p[0] == "events") {
        size_t i = std::stoul(p[1]);
        if (i < s.events.size()) {
            if (p[2] == "at") return &s.events[i].at;
            if (p[2] == "speed") return &s.events[i].speed;
        }
        pc.fail();
    }
    if (p.size() == 2 && p[0] == "sim") {
        if (p[1] == "duration") return &s.duration;
        if (p[1] == "dt") return &s.dt;
        if (p[1] == "cruise") return &s.cruise;
        if (p[1] == "a_max") return &s.a_max;
        if (p[1] == "b_max") return &s.traffic.b_max;
        if (p[1] == "v_max") return &s.v_max;
        if (p[1] == "horizon") return &s.horizon;
        pc.fail();
    }
    pc.fail();
}

}  // namespace

double get_param(const Scenario& s, const std::string& path) {
    return *resolve(const_cast<Scenario&>(s), path);
}

void set_param(Scenario& s, const std::string& path, double value) {
    *resolve(s, path) = value;
}

std::string content_digest(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

std::string scenario_digest(const Scenario& s) {
    return content_digest(serialize_scenario(s));
}

}  // namespace crosscheck::sim
