#include "crosscheck/assertions.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace crosscheck::assertions {

const char* to_string(Kind k) {
    switch (k) {
        case Kind::Invariant: return "invariant";
        case Kind::Execution: return "execution";
        case Kind::PreCondition: return "pre";
        case Kind::PostCondition: return "post";
    }
    return "?";
}

const char* to_string(Flavor f) {
    return f == Flavor::Temporal ? "temporal" : "physical";
}

const char* to_string(AssertVerdict v) {
    switch (v) {
        case AssertVerdict::Pass: return "pass";
        case AssertVerdict::Fail: return "fail";
        case AssertVerdict::Vacuous: return "vacuous";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void schema_error(const std::string& name, int line,
                               const std::string& msg) {
    throw std::invalid_argument("assertion '" + name + "' (line " +
                                std::to_string(line) + "): " + msg);
}

}  // namespace

std::vector<Assertion> parse_assertions(const std::string& text,
                                        const usl::FormulaLibrary& lib) {
    std::vector<Assertion> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    Assertion cur;
    bool open = false;
    int open_line = 0;
    bool have_window = false;

    auto finish = [&]() {
        if (!open) return;
        if (!cur.condition)
            schema_error(cur.name, open_line, "missing condition");
        if (cur.kind == Kind::Invariant) {
            if (cur.trigger)
                schema_error(cur.name, open_line,
                             "invariant assertions take no trigger");
        } else if (!cur.trigger) {
            schema_error(cur.name, open_line, "missing trigger");
        }
        if ((cur.kind == Kind::PreCondition || cur.kind == Kind::PostCondition)) {
            if (!have_window || cur.window <= 0.0)
                schema_error(cur.name, open_line,
                             "pre/post assertions need window=<positive value>");
        }
        out.push_back(cur);
        open = false;
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line.substr(0, line.find('#')));
        if (s.empty()) continue;
        if (s.rfind("assert ", 0) == 0 || s == "assert") {
            finish();
            cur = Assertion{};
            have_window = false;
            open = true;
            open_line = lineno;
            std::istringstream hs(s.substr(6));
            hs >> cur.name;
            if (cur.name.empty())
                schema_error("?", lineno, "assert needs a name");
            std::string opt;
            while (hs >> opt) {
                size_t eq = opt.find('=');
                std::string key = opt.substr(0, eq);
                std::string val =
                    eq == std::string::npos ? "" : opt.substr(eq + 1);
                if (key == "kind") {
                    if (val == "invariant") cur.kind = Kind::Invariant;
                    else if (val == "execution") cur.kind = Kind::Execution;
                    else if (val == "pre") cur.kind = Kind::PreCondition;
                    else if (val == "post") cur.kind = Kind::PostCondition;
                    else schema_error(cur.name, lineno, "unknown kind '" + val + "'");
                } else if (key == "flavor") {
                    if (val == "temporal") cur.flavor = Flavor::Temporal;
                    else if (val == "physical") cur.flavor = Flavor::Physical;
                    else schema_error(cur.name, lineno,
                                      "unknown flavor '" + val + "'");
                } else if (key == "window") {
                    try {
                        cur.window = std::stod(val);
                    } catch (...) {
                        schema_error(cur.name, lineno, "bad window '" + val + "'");
                    }
                    have_window = true;
                } else if (key == "edges") {
                    if (val == "all") cur.all_edges = true;
                    else if (val == "rising") cur.all_edges = false;
                    else schema_error(cur.name, lineno, "edges=all|rising");
                } else {
                    schema_error(cur.name, lineno, "unknown option '" + key + "'");
                }
            }
            continue;
        }
        if (!open)
            throw std::invalid_argument("line " + std::to_string(lineno) +
                                        ": expected 'assert ...' stanza");
        if (s.rfind("trigger:", 0) == 0) {
            cur.trigger_text = trim(s.substr(8));
            try {
                cur.trigger = pred::parse_predicate(cur.trigger_text, lib);
            } catch (const std::exception& e) {
                schema_error(cur.name, lineno, e.what());
            }
        } else if (s.rfind("condition:", 0) == 0) {
            cur.condition_text = trim(s.substr(10));
            try {
                cur.condition = pred::parse_predicate(cur.condition_text, lib);
            } catch (const std::exception& e) {
                schema_error(cur.name, lineno, e.what());
            }
        } else {
            schema_error(cur.name, lineno, "unexpected line '" + s + "'");
        }
    }
    finish();
    return out;
}

std::vector<Assertion> load_assertions(const std::string& path,
                                       const usl::FormulaLibrary& lib) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open assertion file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_assertions(ss.str(), lib);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

namespace {

bool eval_at(const pred::Predicate& p, const sim::Trace& trace, int step) {
    return pred::eval_on_trace(p, trace, static_cast<std::size_t>(step));
}

std::string describe_step(const sim::Trace& trace, int step) {
    const sim::TraceStep& ts = trace.steps[step];
    const sim::AgentRecord* ego = ts.find(trace.header.ego);
    char buf[160];
    if (ego)
        std::snprintf(buf, sizeof buf,
                      "t=%.9g loc=%s ego pos=%.9g speed=%.9g", ts.time,
                      ts.location.c_str(), ego->pos, ego->speed);
    else
        std::snprintf(buf, sizeof buf, "t=%.9g loc=%s", ts.time,
                      ts.location.c_str());
    return buf;
}

double ego_pos(const sim::Trace& trace, int step) {
    const sim::AgentRecord* ego = trace.steps[step].find(trace.header.ego);
    if (!ego)
        throw std::invalid_argument("trace step " + std::to_string(step) +
                                    " has no ego record");
    return ego->pos;
}

}  // namespace

std::vector<int> find_reference_points(const sim::Trace& trace,
                                       const Assertion& a) {
    std::vector<int> out;
    if (!a.trigger) return out;
    bool prev = false;
    for (int k = 0; k < static_cast<int>(trace.steps.size()); ++k) {
        bool now = eval_at(*a.trigger, trace, k);
        if (now && (a.all_edges || !prev)) out.push_back(k);
        prev = now;
    }
    return out;
}

AssertionResult check_assertion(const sim::Trace& trace, const Assertion& a) {
    AssertionResult res;
    res.name = a.name;
    const int n = static_cast<int>(trace.steps.size());

    auto check_step = [&](int ref, int step) {
        bool ok;
        try {
            ok = eval_at(*a.condition, trace, step);
        } catch (const std::exception& e) {
            res.failures.push_back(
                {ref, step,
                 std::string("evaluation error at step ") +
                     std::to_string(step) + ": " + e.what()});
            return;
        }
        if (!ok) res.failures.push_back({ref, step, describe_step(trace, step)});
    };

    if (a.kind == Kind::Invariant) {
        for (int k = 0; k < n; ++k) check_step(-1, k);
        res.verdict =
            res.failures.empty() ? AssertVerdict::Pass : AssertVerdict::Fail;
        return res;
    }

    res.reference_points = find_reference_points(trace, a);
    if (res.reference_points.empty()) {
        res.verdict = AssertVerdict::Vacuous;
        return res;
    }

    for (int ref : res.reference_points) {
        switch (a.kind) {
            case Kind::Execution:
                check_step(ref, ref);
                break;
            case Kind::PreCondition: {
                if (a.flavor == Flavor::Temporal) {
                    double from = trace.steps[ref].time - a.window;
                    if (from < trace.steps[0].time - 1e-9) ++res.clipped_windows;
                    for (int k = 0; k < ref; ++k)
                        if (trace.steps[k].time >= from - 1e-9) check_step(ref, k);
                } else {
                    double pref = ego_pos(trace, ref);
                    bool clipped = true;
                    for (int k = ref - 1; k >= 0; --k) {
                        if (pref - ego_pos(trace, k) > a.window + 1e-9) {
                            clipped = false;
                            break;
                        }
                        check_step(ref, k);
                    }
                    if (clipped) ++res.clipped_windows;
                }
                break;
            }
            case Kind::PostCondition: {
                if (a.flavor == Flavor::Temporal) {
                    double to = trace.steps[ref].time + a.window;
                    if (to > trace.steps[n - 1].time + 1e-9) ++res.clipped_windows;
                    for (int k = ref + 1; k < n; ++k)
                        if (trace.steps[k].time <= to + 1e-9) check_step(ref, k);
                } else {
                    double pref = ego_pos(trace, ref);
                    bool clipped = true;
                    for (int k = ref + 1; k < n; ++k) {
                        if (ego_pos(trace, k) - pref > a.window + 1e-9) {
                            clipped = false;
                            break;
                        }
                        check_step(ref, k);
                    }
                    if (clipped) ++res.clipped_windows;
                }
                break;
            }
            default: break;
        }
    }
    res.verdict = res.failures.empty() ? AssertVerdict::Pass : AssertVerdict::Fail;
    return res;
}

std::vector<AssertionResult> check_suite(const sim::Trace& trace,
                                         const std::vector<Assertion>& as,
                                         bool parallel) {
    std::vector<AssertionResult> out(as.size());
#ifdef _OPENMP
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::size_t i = 0; i < as.size(); ++i)
            out[i] = check_assertion(trace, as[i]);
        return out;
    }
#else
    (void)parallel;
#endif
    for (std::size_t i = 0; i < as.size(); ++i)
        out[i] = check_assertion(trace, as[i]);
    return out;
}

SuiteSummary summarize(const std::vector<AssertionResult>& results) {
    SuiteSummary s;
    for (const AssertionResult& r : results) {
        if (r.verdict == AssertVerdict::Pass) ++s.passed;
        else if (r.verdict == AssertVerdict::Fail) ++s.failed;
        else ++s.vacuous;
    }
    return s;
}

}  // namespace crosscheck::assertions
