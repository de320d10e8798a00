#include "crosscheck/predicate.hpp"

#include "crosscheck/formula_parse.hpp"

#include <cctype>
#include <cmath>
#include <variant>
#include <vector>

namespace crosscheck::pred {

namespace {
constexpr double kFar = 1e18;
}

enum class NumFn { Speed, Pos, Accel, Size, Lane, Time, Step, Dwell,
                   DistToSign, DistToCrossing, DistToAgent, MinGap };
enum class BoolFn { Loc, Entered, Left, Visited, InIntersection, OnCrossing, PassedSign };
enum class NumRel { Eq, Ne, Lt, Le, Gt, Ge };
enum class ViewKind { Ahead, Around };

struct NumTerm {
    bool literal = false;
    double value = 0.0;
    NumFn fn = NumFn::Speed;
    std::string arg0;                    // agent or location
    traffic::SignKind sign_kind = traffic::SignKind::Stop;
    std::string arg1;                    // second agent
};

struct PCompare { NumTerm lhs; NumRel rel; NumTerm rhs; };
struct PBoolFn { BoolFn fn; std::string arg; traffic::SignKind sign_kind; };
struct PAutIs { std::string agent; bool value; };
struct PTurnIs { std::string agent; traffic::TurnSignal value; };
struct PObsField { std::string name; };
struct PUsl { usl::FormulaPtr formula; ViewKind view; double horizon; };
struct PPrev { PredicatePtr sub; };
struct PConst { bool value; };
struct PNot { PredicatePtr sub; };
struct PAnd { PredicatePtr lhs, rhs; };
struct POr { PredicatePtr lhs, rhs; };

struct Predicate {
    std::variant<PCompare, PBoolFn, PAutIs, PTurnIs, PObsField, PUsl, PPrev,
                 PConst, PNot, PAnd, POr> node;
    std::string text;
};

namespace {

template <typename N>
PredicatePtr wrap(N n, std::string text = {}) {
    auto p = std::make_shared<Predicate>();
    p->node = std::move(n);
    p->text = std::move(text);
    return p;
}

class PredParser {
public:
    PredParser(const std::string& s, const usl::FormulaLibrary& lib)
        : s_(s), lib_(lib) {}

    PredicatePtr parse() {
        PredicatePtr e = parse_or();
        skip_ws();
        if (pos_ != s_.size())
            fail("trailing input '" + s_.substr(pos_) + "'");
        auto copy = std::make_shared<Predicate>(*e);
        copy->text = s_;
        return copy;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("predicate: " + msg);
    }

    PredicatePtr parse_or() {
        PredicatePtr lhs = parse_and();
        while (accept('|')) lhs = wrap(POr{lhs, parse_and()});
        return lhs;
    }

    PredicatePtr parse_and() {
        PredicatePtr lhs = parse_unary();
        while (accept('&')) lhs = wrap(PAnd{lhs, parse_unary()});
        return lhs;
    }

    PredicatePtr parse_unary() {
        if (accept('!')) return wrap(PNot{parse_unary()});
        if (accept('(')) {
            PredicatePtr e = parse_or();
            expect(')');
            return e;
        }
        return parse_atom();
    }

    bool starts_number() {
        skip_ws();
        if (pos_ >= s_.size()) return false;
        char c = s_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) || c == '-' ||
               c == '.';
    }

    PredicatePtr parse_atom() {
        skip_ws();
        if (starts_number()) return finish_compare(parse_num());

        std::string id = ident();
        if (id == "true") return wrap(PConst{true});
        if (id == "false") return wrap(PConst{false});
        if (id == "prev") {
            expect('(');
            PredicatePtr sub = parse_or();
            expect(')');
            return wrap(PPrev{sub});
        }
        if (id == "usl") return parse_usl();
        if (id == "obs") {
            expect('(');
            std::string name = ident();
            expect(')');
            return wrap(PObsField{name});
        }
        if (id == "loc" || id == "entered" || id == "left" || id == "visited") {
            expect('(');
            std::string name = ident();
            expect(')');
            BoolFn fn = id == "loc"       ? BoolFn::Loc
                        : id == "entered" ? BoolFn::Entered
                        : id == "left"    ? BoolFn::Left
                                          : BoolFn::Visited;
            return wrap(PBoolFn{fn, name, traffic::SignKind::Stop});
        }
        if (id == "in_intersection" || id == "on_crossing") {
            expect('(');
            std::string agent = ident();
            expect(')');
            return wrap(PBoolFn{id == "on_crossing" ? BoolFn::OnCrossing
                                                    : BoolFn::InIntersection,
                                agent, traffic::SignKind::Stop});
        }
        if (id == "passed_sign") {
            expect('(');
            std::string agent = ident();
            expect(',');
            traffic::SignKind k = sign_kind();
            expect(')');
            return wrap(PBoolFn{BoolFn::PassedSign, agent, k});
        }
        if (id == "aut") {
            expect('(');
            std::string agent = ident();
            expect(')');
            expect('=');
            skip_ws();
            if (pos_ >= s_.size() || (s_[pos_] != '0' && s_[pos_] != '1'))
                fail("aut(..) compares against 0 or 1");
            bool v = s_[pos_++] == '1';
            return wrap(PAutIs{agent, v});
        }
        if (id == "turn_signal") {
            expect('(');
            std::string agent = ident();
            expect(')');
            expect('=');
            std::string v = ident();
            traffic::TurnSignal t;
            if (v == "off") t = traffic::TurnSignal::Off;
            else if (v == "left") t = traffic::TurnSignal::Left;
            else if (v == "right") t = traffic::TurnSignal::Right;
            else fail("turn_signal compares against off|left|right, got '" + v + "'");
            return wrap(PTurnIs{agent, t});
        }
        // otherwise a numeric function: rewind and parse as comparison
        return finish_compare(parse_num_fn(id));
    }

    PredicatePtr parse_usl() {
        expect('(');
        std::string text = quoted();
        ViewKind view = ViewKind::Ahead;
        double horizon = -1.0;
        if (accept(',')) {
            std::string v = ident();
            if (v == "ahead") view = ViewKind::Ahead;
            else if (v == "around") view = ViewKind::Around;
            else fail("usl view must be ahead or around, got '" + v + "'");
            if (accept(',')) horizon = number();
        }
        expect(')');
        usl::FormulaPtr f;
        try {
            f = usl::parse_formula(text, lib_);
        } catch (const std::exception& e) {
            fail(std::string("embedded formula: ") + e.what());
        }
        return wrap(PUsl{f, view, horizon}, "usl(\"" + text + "\")");
    }

    PredicatePtr finish_compare(NumTerm lhs) {
        NumRel rel = relop();
        NumTerm rhs = parse_num();
        return wrap(PCompare{std::move(lhs), rel, std::move(rhs)});
    }

    NumTerm parse_num() {
        skip_ws();
        if (starts_number()) {
            NumTerm t;
            t.literal = true;
            t.value = number();
            return t;
        }
        return parse_num_fn(ident());
    }

    NumTerm parse_num_fn(const std::string& id) {
        NumTerm t;
        if (id == "time") { t.fn = NumFn::Time; return t; }
        if (id == "step") { t.fn = NumFn::Step; return t; }
        auto unary = [&](NumFn fn) {
            expect('(');
            t.fn = fn;
            t.arg0 = ident();
            expect(')');
            return t;
        };
        if (id == "speed") return unary(NumFn::Speed);
        if (id == "pos") return unary(NumFn::Pos);
        if (id == "accel") return unary(NumFn::Accel);
        if (id == "size") return unary(NumFn::Size);
        if (id == "lane") return unary(NumFn::Lane);
        if (id == "dwell") return unary(NumFn::Dwell);
        if (id == "dist_to_crossing") return unary(NumFn::DistToCrossing);
        if (id == "dist_to_sign") {
            expect('(');
            t.fn = NumFn::DistToSign;
            t.arg0 = ident();
            expect(',');
            t.sign_kind = sign_kind();
            expect(')');
            return t;
        }
        if (id == "dist_to_agent") {
            expect('(');
            t.fn = NumFn::DistToAgent;
            t.arg0 = ident();
            expect(',');
            t.arg1 = ident();
            expect(')');
            return t;
        }
        if (id == "min_gap") {
            expect('(');
            t.fn = NumFn::MinGap;
            t.arg0 = ident();
            expect(',');
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == '*') ++pos_;
            else fail("min_gap expects (id, *)");
            expect(')');
            return t;
        }
        fail("unknown field or function '" + id + "'");
    }

    traffic::SignKind sign_kind() {
        std::string k = ident();
        if (k == "stop") return traffic::SignKind::Stop;
        if (k == "give_way") return traffic::SignKind::GiveWay;
        fail("unknown sign kind '" + k + "'");
    }

    NumRel relop() {
        skip_ws();
        auto two = [&](char a, char b) {
            return pos_ + 1 < s_.size() && s_[pos_] == a && s_[pos_ + 1] == b;
        };
        if (two('<', '=')) { pos_ += 2; return NumRel::Le; }
        if (two('>', '=')) { pos_ += 2; return NumRel::Ge; }
        if (two('!', '=')) { pos_ += 2; return NumRel::Ne; }
        if (pos_ < s_.size()) {
            char c = s_[pos_];
            if (c == '<') { ++pos_; return NumRel::Lt; }
            if (c == '>') { ++pos_; return NumRel::Gt; }
            if (c == '=') { ++pos_; return NumRel::Eq; }
        }
        fail("expected comparison operator");
    }

    double number() {
        skip_ws();
        size_t start = pos_;
        if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
        while (pos_ < s_.size() &&
               (std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
                s_[pos_] == '.'))
            ++pos_;
        if (start == pos_) fail("expected a number");
        return std::stod(s_.substr(start, pos_ - start));
    }

    std::string quoted() {
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != '"') fail("expected a quoted string");
        size_t close = s_.find('"', pos_ + 1);
        if (close == std::string::npos) fail("unterminated string");
        std::string out = s_.substr(pos_ + 1, close - pos_ - 1);
        pos_ = close + 1;
        return out;
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    std::string ident() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                s_[pos_] == '_'))
            ++pos_;
        if (start == pos_) fail("expected identifier");
        return s_.substr(start, pos_ - start);
    }

    const std::string& s_;
    const usl::FormulaLibrary& lib_;
    size_t pos_ = 0;
};

// --- evaluation --------------------------------------------------------------

const traffic::Agent& agent_of(const EvalInput& in, const std::string& ref) {
    const std::string& id = (ref == "ego") ? in.ego : ref;
    const traffic::Agent* a = in.snap->find_agent(id);
    if (!a) throw std::invalid_argument("predicate references unknown agent '" +
                                        id + "'");
    return *a;
}

Interval body_of(const traffic::Agent& a) {
    return {a.pos - a.size, a.pos};
}

const sim::Trace& trace_of(const EvalInput& in, const char* what) {
    if (!in.trace)
        throw std::invalid_argument(std::string("predicate atom '") + what +
                                    "' needs a stored trace");
    return *in.trace;
}

double eval_num(const NumTerm& t, const EvalInput& in) {
    if (t.literal) return t.value;
    switch (t.fn) {
        case NumFn::Time: return in.snap->time;
        case NumFn::Step: return static_cast<double>(in.step);
        case NumFn::Speed: return agent_of(in, t.arg0).speed;
        case NumFn::Pos: return agent_of(in, t.arg0).pos;
        case NumFn::Accel: return agent_of(in, t.arg0).accel;
        case NumFn::Size: return agent_of(in, t.arg0).size;
        case NumFn::Lane: return agent_of(in, t.arg0).lane;
        case NumFn::Dwell: {
            const sim::Trace& tr = trace_of(in, "dwell");
            double dwell = 0.0;
            for (std::size_t k = in.step;; --k) {
                if (tr.steps[k].location != t.arg0) break;
                dwell = tr.steps[in.step].time - tr.steps[k].time;
                if (k == 0) break;
            }
            return dwell;
        }
        case NumFn::DistToSign: {
            const traffic::Agent& a = agent_of(in, t.arg0);
            double best = kFar;
            for (const traffic::Sign& s : in.snap->network.signs)
                if (s.lane == a.lane && s.kind == t.sign_kind && s.pos >= a.pos)
                    best = std::min(best, s.pos - a.pos);
            return best;
        }
        case NumFn::DistToCrossing: {
            const traffic::Agent& a = agent_of(in, t.arg0);
            double best = kFar;
            for (const traffic::Crossing& c : in.snap->network.crossings)
                if (c.lane == a.lane && c.span.hi >= a.pos)
                    best = std::min(best, std::max(c.span.lo - a.pos, 0.0));
            return best;
        }
        case NumFn::DistToAgent: {
            const traffic::Agent& a = agent_of(in, t.arg0);
            const traffic::Agent& b = agent_of(in, t.arg1);
            if (a.lane != b.lane) return kFar;
            Interval ba = body_of(a), bb = body_of(b);
            return std::max(bb.lo - ba.hi, ba.lo - bb.hi);
        }
        case NumFn::MinGap: {
            const traffic::Agent& a = agent_of(in, t.arg0);
            Interval ba = body_of(a);
            double best = kFar;
            for (const traffic::Agent& o : in.snap->agents) {
                if (o.id == a.id || o.lane != a.lane) continue;
                Interval bo = body_of(o);
                best = std::min(best, std::max(bo.lo - ba.hi, ba.lo - bo.hi));
            }
            return best;
        }
    }
    return 0.0;
}

bool rel_holds(double a, NumRel r, double b) {
    switch (r) {
        case NumRel::Eq: return a == b;
        case NumRel::Ne: return a != b;
        case NumRel::Lt: return a < b;
        case NumRel::Le: return a <= b;
        case NumRel::Gt: return a > b;
        case NumRel::Ge: return a >= b;
    }
    return false;
}

traffic::View usl_view(const EvalInput& in, ViewKind kind, double horizon) {
    double h = horizon > 0 ? horizon : in.horizon;
    traffic::View ahead = traffic::view_ahead(*in.snap, in.ego, h);
    if (kind == ViewKind::Ahead) return ahead;
    const traffic::Reservation* r = in.snap->reservation_of(in.ego);
    return {ahead.lane, {r->interval.lo, ahead.extent.hi}, in.ego};
}

const std::string& location_at(const EvalInput& in, std::size_t step) {
    return in.trace->steps[step].location;
}

}  // namespace

PredicatePtr parse_predicate(const std::string& text,
                             const usl::FormulaLibrary& lib) {
    return PredParser(text, lib).parse();
}

bool eval_predicate(const Predicate& p, const EvalInput& in) {
    if (!in.snap) throw std::invalid_argument("predicate: missing snapshot");
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, PConst>) {
                return x.value;
            } else if constexpr (std::is_same_v<T, PCompare>) {
                return rel_holds(eval_num(x.lhs, in), x.rel, eval_num(x.rhs, in));
            } else if constexpr (std::is_same_v<T, PAutIs>) {
                return agent_of(in, x.agent).aut == x.value;
            } else if constexpr (std::is_same_v<T, PTurnIs>) {
                return agent_of(in, x.agent).turn_signal == x.value;
            } else if constexpr (std::is_same_v<T, PObsField>) {
                const sim::Trace& tr = trace_of(in, "obs");
                const auto& obs = tr.steps[in.step].observations;
                auto it = obs.find(x.name);
                if (it == obs.end())
                    throw std::invalid_argument(
                        "observation '" + x.name + "' is not in the trace schema");
                return it->second;
            } else if constexpr (std::is_same_v<T, PUsl>) {
                return usl::evaluate(*in.snap, usl_view(in, x.view, x.horizon),
                                     *x.formula, in.usl_cfg);
            } else if constexpr (std::is_same_v<T, PPrev>) {
                trace_of(in, "prev");
                if (in.step == 0) return false;
                EvalInput prev_in = in;
                prev_in.step = in.step - 1;
                traffic::Snapshot prev_snap = in.trace->snapshot_at(in.step - 1);
                prev_in.snap = &prev_snap;
                return eval_predicate(*x.sub, prev_in);
            } else if constexpr (std::is_same_v<T, PBoolFn>) {
                switch (x.fn) {
                    case BoolFn::Loc:
                        trace_of(in, "loc");
                        return location_at(in, in.step) == x.arg;
                    case BoolFn::Entered: {
                        trace_of(in, "entered");
                        if (location_at(in, in.step) != x.arg) return false;
                        return in.step == 0 ||
                               location_at(in, in.step - 1) != x.arg;
                    }
                    case BoolFn::Left: {
                        trace_of(in, "left");
                        if (in.step == 0) return false;
                        return location_at(in, in.step) != x.arg &&
                               location_at(in, in.step - 1) == x.arg;
                    }
                    case BoolFn::Visited: {
                        trace_of(in, "visited");
                        for (std::size_t k = 0; k <= in.step; ++k)
                            if (location_at(in, k) == x.arg) return true;
                        return false;
                    }
                    case BoolFn::InIntersection: {
                        const traffic::Agent& a = agent_of(in, x.arg);
                        auto span = in.snap->network.intersection_on(a.lane);
                        return span && body_of(a).overlaps(*span);
                    }
                    case BoolFn::OnCrossing: {
                        const traffic::Agent& a = agent_of(in, x.arg);
                        for (const traffic::Crossing& c : in.snap->network.crossings)
                            if (c.lane == a.lane && body_of(a).overlaps(c.span))
                                return true;
                        return false;
                    }
                    case BoolFn::PassedSign: {
                        const traffic::Agent& a = agent_of(in, x.arg);
                        for (const traffic::Sign& s : in.snap->network.signs)
                            if (s.lane == a.lane && s.kind == x.sign_kind &&
                                s.pos <= a.pos)
                                return true;
                        return false;
                    }
                }
                return false;
            } else if constexpr (std::is_same_v<T, PNot>) {
                return !eval_predicate(*x.sub, in);
            } else if constexpr (std::is_same_v<T, PAnd>) {
                return eval_predicate(*x.lhs, in) && eval_predicate(*x.rhs, in);
            } else {
                return eval_predicate(*x.lhs, in) || eval_predicate(*x.rhs, in);
            }
        },
        p.node);
}

bool eval_on_trace(const Predicate& p, const sim::Trace& trace,
                   std::size_t step, const usl::EvalConfig& cfg) {
    traffic::Snapshot snap = trace.snapshot_at(step);
    EvalInput in;
    in.snap = &snap;
    in.ego = trace.header.ego;
    in.horizon = trace.header.horizon;
    in.usl_cfg = cfg;
    in.trace = &trace;
    in.step = step;
    return eval_predicate(p, in);
}

const std::string& predicate_text(const Predicate& p) { return p.text; }

}  // namespace crosscheck::pred
