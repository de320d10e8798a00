#include "crosscheck/model_files.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "crosscheck/formula_parse.hpp"
#include "crosscheck/scenario.hpp"

namespace crosscheck::model {

namespace {

std::vector<std::pair<std::string, bool>> parse_literals(
    const std::vector<std::string>& tokens) {
    std::vector<std::pair<std::string, bool>> out;
    for (const std::string& t : tokens) {
        if (t.empty()) continue;
        if (t[0] == '!')
            out.push_back({t.substr(1), false});
        else
            out.push_back({t, true});
    }
    return out;
}

std::int32_t seconds_to_ticks(double seconds, double unit,
                              const std::string& what) {
    double t = seconds / unit;
    double r = std::round(t);
    if (std::fabs(t - r) > 1e-6)
        throw std::invalid_argument(what + ": constant " +
                                    std::to_string(seconds) +
                                    " s does not scale to whole ticks of " +
                                    std::to_string(unit) + " s");
    return static_cast<std::int32_t>(r);
}

sim::ObservationBinding parse_binding(const kv::Node& b,
                                      const usl::FormulaLibrary& lib) {
    sim::ObservationBinding out;
    out.observation = b.values.empty() ? b.at("obs") : b.values[0];
    if (const kv::Node* u = b.child("usl")) {
        out.is_usl = true;
        out.text = u->joined_values();
        out.formula = usl::parse_formula(out.text, lib);
    } else if (const kv::Node* p = b.child("pred")) {
        out.is_usl = false;
        out.text = p->joined_values();
        out.predicate = pred::parse_predicate(out.text, lib);
    } else {
        throw kv::FormatError("binding '" + out.observation +
                              "' needs a usl or pred entry", b.line);
    }
    if (const kv::Node* v = b.child("view")) {
        if (v->values.empty())
            throw kv::FormatError("view needs ahead|around", v->line);
        if (v->values[0] == "ahead")
            out.view = sim::ObservationBinding::ViewKind::Ahead;
        else if (v->values[0] == "around")
            out.view = sim::ObservationBinding::ViewKind::Around;
        else
            throw kv::FormatError("view must be ahead or around", v->line);
        if (v->values.size() > 1) out.horizon = v->value_double(1);
    }
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ta::SafetyProperty parse_property(const kv::Node& p,
                                  const ta::TimedAutomaton& automaton) {
    ta::SafetyProperty prop;
    prop.name = p.values.empty() ? p.get("name").value_or("property")
                                 : p.values[0];
    const kv::Node* bad = p.child("bad");
    if (!bad)
        throw kv::FormatError("property '" + prop.name + "' needs a bad entry",
                              p.line);
    prop.source_text = bad->joined_values();
    prop.bad = ta::parse_prop_expr(prop.source_text, automaton);
    for (const kv::Node* c : p.all("clock"))
        prop.clock_constraint.push_back(
            parse_clock_constraint(c->joined_values(), automaton));
    return prop;
}

}  // namespace

ta::ClockConstraint parse_clock_constraint(const std::string& text,
                                           const ta::TimedAutomaton& automaton) {
    std::istringstream in(text);
    std::string clock, op_or_minus, rest;
    in >> clock;
    ta::ClockConstraint c;
    c.clock = automaton.clock_index(clock);
    in >> op_or_minus;
    if (op_or_minus == "-") {
        std::string other;
        in >> other;
        c.minus_clock = automaton.clock_index(other);
        in >> op_or_minus;
    }
    if (op_or_minus == "<") c.rel = ta::Rel::Lt;
    else if (op_or_minus == "<=") c.rel = ta::Rel::Le;
    else if (op_or_minus == "=" || op_or_minus == "==") c.rel = ta::Rel::Eq;
    else if (op_or_minus == ">=") c.rel = ta::Rel::Ge;
    else if (op_or_minus == ">") c.rel = ta::Rel::Gt;
    else
        throw std::invalid_argument("clock constraint '" + text +
                                    "': bad operator '" + op_or_minus + "'");
    double seconds = 0.0;
    if (!(in >> seconds))
        throw std::invalid_argument("clock constraint '" + text +
                                    "': missing constant");
    c.ticks = seconds_to_ticks(seconds, automaton.time_unit,
                               "clock constraint '" + text + "'");
    return c;
}

ControllerFile load_controller(const std::string& path,
                               const usl::FormulaLibrary& lib) {
    std::string bytes = slurp(path);
    kv::Node root = kv::parse(bytes);
    ControllerFile out;
    out.digest = sim::content_digest(bytes);
    out.path = path;

    double time_unit = 0.1;
    if (const kv::Node* tu = root.child("time_unit"))
        time_unit = tu->value_double();

    std::vector<std::string> observations;
    for (const kv::Node* o : root.all("observation"))
        for (const std::string& v : o->values) observations.push_back(v);

    bool is_diagram = !root.all("step").empty();
    if (is_diagram) {
        ta::RuleDiagram d;
        d.time_unit = time_unit;
        d.observations = observations;
        for (const kv::Node* st : root.all("step")) {
            ta::DiagramStep step;
            step.name = st->values.empty() ? st->at("name") : st->values[0];
            if (const kv::Node* tr = st->child("trigger"))
                step.trigger = parse_literals(tr->values);
            step.action = st->get("action").value_or(step.name);
            step.min_duration = st->get_double("min").value_or(0.0);
            step.max_duration = st->get_double("max").value_or(
                std::numeric_limits<double>::infinity());
            for (const kv::Node* br : st->all("branch")) {
                ta::DiagramBranch b;
                b.target = br->at("to");
                if (const kv::Node* tr = br->child("when"))
                    b.trigger = parse_literals(tr->values);
                step.branches.push_back(b);
            }
            d.steps.push_back(step);
        }
        out.automaton = ta::compile_diagram(d);
        out.diagram = std::move(d);
    } else {
        ta::TimedAutomaton a;
        a.time_unit = time_unit;
        a.observations = observations;
        for (const kv::Node* c : root.all("clock"))
            for (const std::string& v : c->values) a.clocks.push_back(v);
        int initial = -1;
        for (const kv::Node* l : root.all("location")) {
            ta::Location loc;
            loc.name = l->values.empty() ? l->at("name") : l->values[0];
            loc.action = l->get("action").value_or(loc.name);
            if (l->child("initial")) initial = static_cast<int>(a.locations.size());
            a.locations.push_back(loc);
        }
        if (initial < 0)
            throw std::runtime_error(path + ": no location marked initial");
        a.initial = initial;
        // invariants need clock indices, fill after clocks are known
        {
            size_t li = 0;
            for (const kv::Node* l : root.all("location")) {
                for (const kv::Node* inv : l->all("invariant"))
                    a.locations[li].invariant.push_back(
                        parse_clock_constraint(inv->joined_values(), a));
                ++li;
            }
        }
        for (const kv::Node* e : root.all("edge")) {
            ta::Edge edge;
            edge.source = a.location_index(e->at("from"));
            edge.target = a.location_index(e->at("to"));
            if (const kv::Node* w = e->child("when"))
                for (const auto& [name, value] : parse_literals(w->values))
                    edge.obs_guard.push_back({a.observation_index(name), value});
            for (const kv::Node* g : e->all("guard"))
                edge.guard.push_back(parse_clock_constraint(g->joined_values(), a));
            if (const kv::Node* r = e->child("reset"))
                for (const std::string& v : r->values)
                    edge.resets.push_back(a.clock_index(v));
            edge.action = e->get("action").value_or("");
            a.edges.push_back(edge);
        }
        a.validate();
        out.automaton = std::move(a);
    }

    for (const kv::Node* p : root.all("property"))
        out.properties.push_back(parse_property(*p, out.automaton));

    for (const kv::Node* b : root.all("binding"))
        out.bindings.push_back(parse_binding(*b, lib));

    if (const kv::Node* env = root.child("env")) {
        for (const kv::Node* r : env->all("restrict")) {
            ta::ObservationEnvironment::Restriction res;
            res.location = out.automaton.location_index(r->at("location"));
            res.obs = out.automaton.observation_index(r->at("observation"));
            res.value = r->at_int("value") != 0;
            out.env.restrictions.push_back(res);
        }
    }
    return out;
}

std::vector<ta::SafetyProperty> load_properties(const std::string& path,
                                                const ta::TimedAutomaton& automaton) {
    kv::Node root = kv::parse_file(path);
    std::vector<ta::SafetyProperty> out;
    for (const kv::Node* p : root.all("property"))
        out.push_back(parse_property(*p, automaton));
    if (out.empty())
        throw std::runtime_error(path + ": no property section found");
    return out;
}

sim::Bindings load_bindings(const std::string& path,
                            const usl::FormulaLibrary& lib) {
    kv::Node root = kv::parse_file(path);
    sim::Bindings out;
    for (const kv::Node* b : root.all("binding"))
        out.push_back(parse_binding(*b, lib));
    return out;
}

}  // namespace crosscheck::model
