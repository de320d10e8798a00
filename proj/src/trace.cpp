#include "crosscheck/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace crosscheck::sim {

using nlohmann::json;

const AgentRecord* TraceStep::find(const std::string& id) const {
    for (const AgentRecord& a : agents)
        if (a.id == id) return &a;
    return nullptr;
}

traffic::Snapshot Trace::snapshot_at(std::size_t step) const {
    if (step >= steps.size())
        throw std::out_of_range("trace has no step " + std::to_string(step));
    const TraceStep& ts = steps[step];
    std::vector<traffic::Agent> agents;
    for (const AgentRecord& r : ts.agents) {
        traffic::Agent a;
        a.id = r.id;
        a.lane = r.lane;
        a.pos = r.pos;
        a.speed = r.speed;
        a.accel = r.accel;
        a.turn_signal = r.turn_signal;
        a.aut = r.aut;
        for (const AgentStatic& st : header.agents) {
            if (st.id != r.id) continue;
            a.kind = st.kind;
            a.size = st.size;
        }
        agents.push_back(a);
    }
    return traffic::Snapshot::make(header.network, std::move(agents), ts.time,
                                   header.traffic);
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void append_network(std::ostringstream& os, const traffic::RoadNetwork& n) {
    os << "\"network\":{\"lanes\":[";
    for (size_t i = 0; i < n.lanes.size(); ++i) {
        if (i) os << ',';
        os << "{\"id\":" << n.lanes[i].id << ",\"length\":" << fmt(n.lanes[i].length)
           << '}';
    }
    os << "],\"intersection\":[";
    for (size_t i = 0; i < n.intersection.size(); ++i) {
        if (i) os << ',';
        os << "{\"lane\":" << n.intersection[i].lane << ",\"lo\":"
           << fmt(n.intersection[i].span.lo) << ",\"hi\":"
           << fmt(n.intersection[i].span.hi) << '}';
    }
    os << "],\"signs\":[";
    for (size_t i = 0; i < n.signs.size(); ++i) {
        if (i) os << ',';
        os << "{\"kind\":\"" << traffic::to_string(n.signs[i].kind)
           << "\",\"lane\":" << n.signs[i].lane << ",\"pos\":" << fmt(n.signs[i].pos)
           << '}';
    }
    os << "],\"crossings\":[";
    for (size_t i = 0; i < n.crossings.size(); ++i) {
        if (i) os << ',';
        os << "{\"lane\":" << n.crossings[i].lane << ",\"lo\":"
           << fmt(n.crossings[i].span.lo) << ",\"hi\":"
           << fmt(n.crossings[i].span.hi) << '}';
    }
    os << "]}";
}

}  // namespace

std::string serialize_trace(const Trace& t) {
    std::ostringstream os;
    os << "{\"type\":\"header\",\"scenario_digest\":\"" << t.header.scenario_digest
       << "\",\"controller_digest\":\"" << t.header.controller_digest << "\",";
    append_network(os, t.header.network);
    os << ",\"agents\":[";
    for (size_t i = 0; i < t.header.agents.size(); ++i) {
        if (i) os << ',';
        os << "{\"id\":\"" << t.header.agents[i].id << "\",\"kind\":\""
           << traffic::to_string(t.header.agents[i].kind) << "\",\"size\":"
           << fmt(t.header.agents[i].size) << '}';
    }
    os << "],\"ego\":\"" << t.header.ego << "\",\"dt\":" << fmt(t.header.dt)
       << ",\"horizon\":" << fmt(t.header.horizon)
       << ",\"b_max\":" << fmt(t.header.traffic.b_max)
       << ",\"pedestrian_width\":" << fmt(t.header.traffic.pedestrian_width)
       << ",\"observation_override\":"
       << (t.header.observation_override ? "true" : "false") << "}\n";

    for (const TraceStep& s : t.steps) {
        os << "{\"type\":\"step\",\"step\":" << s.step << ",\"time\":" << fmt(s.time)
           << ",\"agents\":[";
        for (size_t i = 0; i < s.agents.size(); ++i) {
            const AgentRecord& a = s.agents[i];
            if (i) os << ',';
            os << "{\"id\":\"" << a.id << "\",\"lane\":" << a.lane << ",\"pos\":"
               << fmt(a.pos) << ",\"speed\":" << fmt(a.speed) << ",\"accel\":"
               << fmt(a.accel) << ",\"turn_signal\":\""
               << traffic::to_string(a.turn_signal) << "\",\"aut\":"
               << (a.aut ? "true" : "false") << '}';
        }
        os << "],\"observations\":{";
        bool first = true;
        for (const auto& [name, value] : s.observations) {
            if (!first) os << ',';
            first = false;
            os << '"' << name << "\":" << (value ? "true" : "false");
        }
        os << "},\"location\":\"" << s.location << "\"}\n";
    }
    return os.str();
}

void save_trace(const Trace& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write trace file: " + path);
    out << serialize_trace(t);
}

namespace {

traffic::TurnSignal turn_from(const std::string& s) {
    if (s == "left") return traffic::TurnSignal::Left;
    if (s == "right") return traffic::TurnSignal::Right;
    return traffic::TurnSignal::Off;
}

traffic::AgentKind kind_from(const std::string& s) {
    if (s == "cyclist") return traffic::AgentKind::Cyclist;
    if (s == "pedestrian") return traffic::AgentKind::Pedestrian;
    return traffic::AgentKind::Car;
}

traffic::SignKind sign_kind_from(const std::string& s) {
    return s == "give_way" ? traffic::SignKind::GiveWay : traffic::SignKind::Stop;
}

}  // namespace

Trace parse_trace(const std::string& text) {
    Trace t;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, true);
        std::string type = j.value("type", "");
        if (type == "header") {
            have_header = true;
            t.header.scenario_digest = j.value("scenario_digest", "");
            t.header.controller_digest = j.value("controller_digest", "");
            t.header.ego = j.value("ego", "");
            t.header.dt = j.value("dt", 0.1);
            t.header.horizon = j.value("horizon", 30.0);
            t.header.traffic.b_max = j.value("b_max", 5.0);
            t.header.traffic.pedestrian_width = j.value("pedestrian_width", 1.0);
            t.header.observation_override = j.value("observation_override", false);
            const json& n = j.at("network");
            for (const json& l : n.at("lanes"))
                t.header.network.lanes.push_back(
                    {l.at("id").get<int>(), l.at("length").get<double>()});
            for (const json& x : n.at("intersection"))
                t.header.network.intersection.push_back(
                    {x.at("lane").get<int>(),
                     {x.at("lo").get<double>(), x.at("hi").get<double>()}});
            for (const json& sg : n.at("signs"))
                t.header.network.signs.push_back(
                    {sign_kind_from(sg.at("kind").get<std::string>()),
                     sg.at("lane").get<int>(), sg.at("pos").get<double>()});
            for (const json& c : n.at("crossings"))
                t.header.network.crossings.push_back(
                    {c.at("lane").get<int>(),
                     {c.at("lo").get<double>(), c.at("hi").get<double>()}});
            for (const json& a : j.at("agents"))
                t.header.agents.push_back(
                    {a.at("id").get<std::string>(),
                     kind_from(a.at("kind").get<std::string>()),
                     a.at("size").get<double>()});
        } else if (type == "step") {
            if (!have_header)
                throw std::runtime_error("trace line " + std::to_string(lineno) +
                                         ": step before header");
            TraceStep s;
            s.step = j.at("step").get<int>();
            s.time = j.at("time").get<double>();
            for (const json& a : j.at("agents")) {
                AgentRecord r;
                r.id = a.at("id").get<std::string>();
                r.lane = a.at("lane").get<int>();
                r.pos = a.at("pos").get<double>();
                r.speed = a.at("speed").get<double>();
                r.accel = a.at("accel").get<double>();
                r.turn_signal = turn_from(a.at("turn_signal").get<std::string>());
                r.aut = a.at("aut").get<bool>();
                s.agents.push_back(r);
            }
            for (auto it = j.at("observations").begin();
                 it != j.at("observations").end(); ++it)
                s.observations[it.key()] = it.value().get<bool>();
            s.location = j.value("location", "");
            t.steps.push_back(std::move(s));
        } else {
            throw std::runtime_error("trace line " + std::to_string(lineno) +
                                     ": unknown record type '" + type + "'");
        }
    }
    if (!have_header) throw std::runtime_error("trace has no header record");
    return t;
}

Trace load_trace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open trace file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_trace(ss.str());
}

}  // namespace crosscheck::sim
