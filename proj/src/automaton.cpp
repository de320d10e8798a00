#include "crosscheck/automaton.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <stdexcept>

namespace crosscheck::ta {

bool literals_hold(const std::vector<ObsLiteral>& lits, Valuation v) {
    for (const ObsLiteral& l : lits)
        if (((v >> l.obs) & 1u) != static_cast<Valuation>(l.value)) return false;
    return true;
}

int TimedAutomaton::clock_index(const std::string& name) const {
    for (size_t i = 0; i < clocks.size(); ++i)
        if (clocks[i] == name) return static_cast<int>(i) + 1;
    throw std::invalid_argument("undeclared clock '" + name + "'");
}

int TimedAutomaton::observation_index(const std::string& name) const {
    for (size_t i = 0; i < observations.size(); ++i)
        if (observations[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("undeclared observation '" + name + "'");
}

int TimedAutomaton::location_index(const std::string& name) const {
    for (size_t i = 0; i < locations.size(); ++i)
        if (locations[i].name == name) return static_cast<int>(i);
    throw std::invalid_argument("unknown location '" + name + "'");
}

std::int32_t TimedAutomaton::max_constant() const {
    std::int32_t k = 0;
    auto scan = [&k](const std::vector<ClockConstraint>& cs) {
        for (const ClockConstraint& c : cs) k = std::max(k, std::abs(c.ticks));
    };
    for (const Location& l : locations) scan(l.invariant);
    for (const Edge& e : edges) scan(e.guard);
    return k;
}

void TimedAutomaton::validate() const {
    if (locations.empty()) throw std::invalid_argument("automaton has no locations");
    if (initial < 0 || initial >= static_cast<int>(locations.size()))
        throw std::invalid_argument("initial location out of range");
    std::set<std::string> names;
    for (const Location& l : locations)
        if (!names.insert(l.name).second)
            throw std::invalid_argument("duplicate location '" + l.name + "'");
    int nclocks = static_cast<int>(clocks.size());
    int nobs = static_cast<int>(observations.size());
    auto check_cs = [&](const std::vector<ClockConstraint>& cs, bool upper_only,
                        const std::string& where) {
        for (const ClockConstraint& c : cs) {
            if (c.clock < 1 || c.clock > nclocks)
                throw std::invalid_argument(where + ": bad clock index");
            if (c.minus_clock < 0 || c.minus_clock > nclocks)
                throw std::invalid_argument(where + ": bad clock index");
            if (upper_only && (c.rel == Rel::Ge || c.rel == Rel::Gt))
                throw std::invalid_argument(
                    where + ": location invariants must be upper bounds");
        }
    };
    for (const Location& l : locations)
        check_cs(l.invariant, true, "invariant of " + l.name);
    for (const Edge& e : edges) {
        if (e.source < 0 || e.source >= static_cast<int>(locations.size()) ||
            e.target < 0 || e.target >= static_cast<int>(locations.size()))
            throw std::invalid_argument("edge endpoint out of range");
        check_cs(e.guard, false, "edge guard");
        for (const ObsLiteral& l : e.obs_guard)
            if (l.obs < 0 || l.obs >= nobs)
                throw std::invalid_argument("edge observation literal out of range");
        for (int r : e.resets)
            if (r < 1 || r > nclocks)
                throw std::invalid_argument("edge reset out of range");
    }
}

void constrain_all(Dbm& zone, const std::vector<ClockConstraint>& cs) {
    for (const ClockConstraint& c : cs) {
        int i = c.clock;
        int j = c.minus_clock;
        switch (c.rel) {
            case Rel::Lt: zone.constrain(i, j, Bound::lt(c.ticks)); break;
            case Rel::Le: zone.constrain(i, j, Bound::le(c.ticks)); break;
            case Rel::Eq:
                zone.constrain(i, j, Bound::le(c.ticks));
                zone.constrain(j, i, Bound::le(-c.ticks));
                break;
            case Rel::Ge: zone.constrain(j, i, Bound::le(-c.ticks)); break;
            case Rel::Gt: zone.constrain(j, i, Bound::lt(-c.ticks)); break;
        }
    }
}

// --- property expressions ---------------------------------------------------

namespace {

template <typename Node>
PropExprPtr pwrap(Node n) {
    return std::make_shared<const PropExpr>(PropExpr{std::move(n)});
}

void collect_locs(const PropExpr& e, std::vector<int>& visited,
                  std::vector<int>& entered) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, PVisited>) {
                visited.push_back(x.location);
            } else if constexpr (std::is_same_v<T, PEntered>) {
                entered.push_back(x.location);
            } else if constexpr (std::is_same_v<T, PNot>) {
                collect_locs(*x.sub, visited, entered);
            } else if constexpr (std::is_same_v<T, PAnd> || std::is_same_v<T, POr>) {
                collect_locs(*x.lhs, visited, entered);
                collect_locs(*x.rhs, visited, entered);
            }
        },
        e.node);
}

class PropParser {
public:
    PropParser(const std::string& s, const TimedAutomaton& ta) : s_(s), ta_(ta) {}

    PropExprPtr parse() {
        PropExprPtr e = parse_or();
        skip_ws();
        if (pos_ != s_.size())
            throw std::invalid_argument("property: trailing input at '" +
                                        s_.substr(pos_) + "'");
        return e;
    }

private:
    PropExprPtr parse_or() {
        PropExprPtr lhs = parse_and();
        while (accept('|')) lhs = pwrap(POr{lhs, parse_and()});
        return lhs;
    }

    PropExprPtr parse_and() {
        PropExprPtr lhs = parse_unary();
        while (accept('&')) lhs = pwrap(PAnd{lhs, parse_unary()});
        return lhs;
    }

    PropExprPtr parse_unary() {
        if (accept('!')) return pwrap(PNot{parse_unary()});
        if (accept('(')) {
            PropExprPtr e = parse_or();
            expect(')');
            return e;
        }
        std::string id = ident();
        if (id == "true") return pwrap(PTrue{});
        if (id == "false") return pwrap(PNot{pwrap(PTrue{})});
        if (id == "at" || id == "visited" || id == "entered") {
            expect('(');
            std::string loc = ident();
            expect(')');
            int li = ta_.location_index(loc);
            if (id == "at") return pwrap(PAt{li});
            if (id == "visited") return pwrap(PVisited{li});
            return pwrap(PEntered{li});
        }
        return pwrap(PObs{ta_.observation_index(id)});
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c))
            throw std::invalid_argument(std::string("property: expected '") + c +
                                        "'");
    }

    std::string ident() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                s_[pos_] == '_'))
            ++pos_;
        if (start == pos_)
            throw std::invalid_argument("property: expected identifier near '" +
                                        s_.substr(start) + "'");
        return s_.substr(start, pos_ - start);
    }

    const std::string& s_;
    const TimedAutomaton& ta_;
    size_t pos_ = 0;
};

}  // namespace

std::vector<int> visited_locations(const PropExpr& e) {
    std::vector<int> v, ent;
    collect_locs(e, v, ent);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<int> entered_locations(const PropExpr& e) {
    std::vector<int> v, ent;
    collect_locs(e, v, ent);
    std::sort(ent.begin(), ent.end());
    ent.erase(std::unique(ent.begin(), ent.end()), ent.end());
    return ent;
}

bool uses_entered(const PropExpr& e) { return !entered_locations(e).empty(); }

PropExprPtr parse_prop_expr(const std::string& text, const TimedAutomaton& ta) {
    return PropParser(text, ta).parse();
}

bool prop_expr_holds(const PropExpr& e, int location, Valuation v,
                     std::uint64_t visited_bits,
                     const std::vector<int>& visited_locs, int entered_location) {
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, PTrue>) {
                return true;
            } else if constexpr (std::is_same_v<T, PObs>) {
                return ((v >> x.obs) & 1u) != 0;
            } else if constexpr (std::is_same_v<T, PAt>) {
                return location == x.location;
            } else if constexpr (std::is_same_v<T, PVisited>) {
                auto it = std::find(visited_locs.begin(), visited_locs.end(),
                                    x.location);
                if (it == visited_locs.end()) return false;
                return (visited_bits >> (it - visited_locs.begin())) & 1u;
            } else if constexpr (std::is_same_v<T, PEntered>) {
                return entered_location == x.location;
            } else if constexpr (std::is_same_v<T, PNot>) {
                return !prop_expr_holds(*x.sub, location, v, visited_bits,
                                        visited_locs, entered_location);
            } else if constexpr (std::is_same_v<T, PAnd>) {
                return prop_expr_holds(*x.lhs, location, v, visited_bits,
                                       visited_locs, entered_location) &&
                       prop_expr_holds(*x.rhs, location, v, visited_bits,
                                       visited_locs, entered_location);
            } else {
                return prop_expr_holds(*x.lhs, location, v, visited_bits,
                                       visited_locs, entered_location) ||
                       prop_expr_holds(*x.rhs, location, v, visited_bits,
                                       visited_locs, entered_location);
            }
        },
        e.node);
}

// --- diagram compilation -----------------------------------------------------

namespace {

std::int32_t to_ticks(double seconds, double unit, const std::string& what) {
    double t = seconds / unit;
    double r = std::round(t);
    if (std::fabs(t - r) > 1e-6)
        throw std::invalid_argument(what + ": " + std::to_string(seconds) +
                                    " s is not a whole number of " +
                                    std::to_string(unit) + " s ticks");
    return static_cast<std::int32_t>(r);
}

}  // namespace

TimedAutomaton compile_diagram(const RuleDiagram& d) {
    TimedAutomaton ta;
    ta.time_unit = d.time_unit;
    ta.observations = d.observations;
    ta.clocks = {"t"};

    std::set<std::string> names;
    for (const DiagramStep& s : d.steps) {
        if (!names.insert(s.name).second)
            throw std::invalid_argument("duplicate step name '" + s.name + "'");
        if (s.min_duration < 0.0 || s.max_duration < 0.0)
            throw std::invalid_argument("step '" + s.name +
                                        "': negative duration");
        if (s.min_duration > s.max_duration)
            throw std::invalid_argument("step '" + s.name +
                                        "': min duration exceeds max");
    }

    if (d.steps.empty()) {
        ta.locations.push_back({"idle", d.terminal_action, {}});
        ta.initial = 0;
        return ta;
    }

    ta.locations.push_back({"init", d.terminal_action, {}});
    for (const DiagramStep& s : d.steps) {
        Location loc{s.name, s.action, {}};
        if (std::isfinite(s.max_duration))
            loc.invariant.push_back(
                {1, 0, Rel::Le, to_ticks(s.max_duration, d.time_unit,
                                         "max duration of " + s.name)});
        ta.locations.push_back(loc);
    }
    ta.locations.push_back({"end", d.terminal_action, {}});
    ta.initial = 0;

    auto obs_literals = [&](const std::vector<std::pair<std::string, bool>>& ls) {
        std::vector<ObsLiteral> out;
        for (const auto& [name, val] : ls)
            out.push_back({ta.observation_index(name), val});
        return out;
    };
    auto exit_guard = [&](const DiagramStep& s) {
        std::vector<ClockConstraint> g;
        std::int32_t min_ticks =
            to_ticks(s.min_duration, d.time_unit, "min duration of " + s.name);
        if (min_ticks > 0) g.push_back({1, 0, Rel::Ge, min_ticks});
        return g;
    };

    // Entry edge: initial location to the first step on its trigger.
    ta.edges.push_back({0, 1, {}, obs_literals(d.steps[0].trigger),
                        "enter " + d.steps[0].name, {1}});

    for (size_t i = 0; i < d.steps.size(); ++i) {
        const DiagramStep& s = d.steps[i];
        int src = static_cast<int>(i) + 1;
        if (!s.branches.empty()) {
            for (const DiagramBranch& b : s.branches) {
                int tgt = 0;
                bool found = false;
                for (size_t j = 0; j < d.steps.size(); ++j)
                    if (d.steps[j].name == b.target) {
                        tgt = static_cast<int>(j) + 1;
                        found = true;
                    }
                if (!found && b.target == "end")
                    tgt = static_cast<int>(d.steps.size()) + 1, found = true;
                if (!found)
                    throw std::invalid_argument("branch target '" + b.target +
                                                "' is not a step");
                ta.edges.push_back({src, tgt, exit_guard(s),
                                    obs_literals(b.trigger), "goto " + b.target,
                                    {1}});
            }
        } else if (i + 1 < d.steps.size()) {
            ta.edges.push_back({src, src + 1, exit_guard(s),
                                obs_literals(d.steps[i + 1].trigger),
                                "enter " + d.steps[i + 1].name, {1}});
        } else {
            ta.edges.push_back({src, src + 1, exit_guard(s), {}, "finish", {1}});
        }
        ta.duration_notes.push_back(
            {src, s.min_duration, s.max_duration});
    }
    ta.validate();
    return ta;
}

bool ObservationEnvironment::allows(int location, Valuation v) const {
    for (const Restriction& r : restrictions)
        if (r.location == location &&
            (((v >> r.obs) & 1u) != static_cast<Valuation>(r.value)))
            return false;
    return true;
}

}  // namespace crosscheck::ta
