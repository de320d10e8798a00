#include "crosscheck/corroboration.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "crosscheck/simulator.hpp"

namespace crosscheck::corro {

using nlohmann::ordered_json;

namespace {

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

const sim::ObservationBinding* find_binding(const sim::Bindings& bs,
                                            const std::string& obs) {
    for (const sim::ObservationBinding& b : bs)
        if (b.observation == obs) return &b;
    return nullptr;
}

std::string binding_as_predicate(const sim::ObservationBinding& b) {
    if (!b.is_usl) return "(" + b.text + ")";
    std::string view =
        b.view == sim::ObservationBinding::ViewKind::Around ? "around" : "ahead";
    std::string out = "usl(\"" + b.text + "\", " + view;
    if (b.horizon > 0) out += ", " + fmt_num(b.horizon);
    out += ")";
    return out;
}

// Render a property expression as assertion-predicate text, replacing
// observation atoms via the binding map. With `forced_class` set, location
// and entry atoms collapse to constants per the action class so conflicting
// demands can be probed.
std::string prop_to_predicate(const ta::PropExpr& e, const PropertyBinding& pb,
                              const std::string* forced_class) {
    const ta::TimedAutomaton& a = pb.automaton;
    auto loc_class = [&](int li) {
        const std::string& act = a.locations[li].action;
        return (act == "decelerate" || act == "stopped") ? "stop" : "proceed";
    };
    return std::visit(
        [&](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, ta::PTrue>) {
                return "true";
            } else if constexpr (std::is_same_v<T, ta::PObs>) {
                const std::string& name = a.observations[x.obs];
                const sim::ObservationBinding* b = find_binding(pb.bindings, name);
                if (!b)
                    throw std::invalid_argument(
                        "no binding for observation '" + name + "'");
                return binding_as_predicate(*b);
            } else if constexpr (std::is_same_v<T, ta::PAt>) {
                if (forced_class)
                    return loc_class(x.location) == *forced_class ? "true" : "false";
                return "loc(" + a.locations[x.location].name + ")";
            } else if constexpr (std::is_same_v<T, ta::PVisited>) {
                return "visited(" + a.locations[x.location].name + ")";
            } else if constexpr (std::is_same_v<T, ta::PEntered>) {
                if (forced_class)
                    return loc_class(x.location) == *forced_class ? "true" : "false";
                return "entered(" + a.locations[x.location].name + ")";
            } else if constexpr (std::is_same_v<T, ta::PNot>) {
                return "!(" + prop_to_predicate(*x.sub, pb, forced_class) + ")";
            } else if constexpr (std::is_same_v<T, ta::PAnd>) {
                return "(" + prop_to_predicate(*x.lhs, pb, forced_class) + " & " +
                       prop_to_predicate(*x.rhs, pb, forced_class) + ")";
            } else {
                return "(" + prop_to_predicate(*x.lhs, pb, forced_class) + " | " +
                       prop_to_predicate(*x.rhs, pb, forced_class) + ")";
            }
        },
        e.node);
}

void collect_formula_thresholds(const usl::Formula& f,
                                const traffic::Snapshot& snap,
                                const std::string& obs,
                                std::vector<ta::Assumption>& out) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, usl::Len>) {
                ta::Assumption a;
                a.kind = "observation";
                double v = x.value.literal;
                std::string what = fmt_num(v);
                if (x.value.is_size()) {
                    const traffic::Agent* ag = snap.find_agent(x.value.size_of);
                    if (!ag) return;
                    v = ag->size;
                    what = "size(" + x.value.size_of + ") = " + fmt_num(v);
                }
                a.name = obs + ".threshold";
                switch (x.cmp) {
                    case usl::Cmp::Ge:
                    case usl::Cmp::Gt: a.lo = v; break;
                    case usl::Cmp::Le:
                    case usl::Cmp::Lt: a.lo = 0.0; a.hi = v; break;
                    case usl::Cmp::Eq: a.lo = a.hi = v; break;
                }
                a.detail = "length threshold " + std::string(usl::to_string(x.cmp)) +
                           " " + what + " in binding of '" + obs + "'";
                out.push_back(a);
            } else if constexpr (std::is_same_v<T, usl::Not>) {
                collect_formula_thresholds(*x.sub, snap, obs, out);
            } else if constexpr (std::is_same_v<T, usl::And> ||
                                 std::is_same_v<T, usl::Or> ||
                                 std::is_same_v<T, usl::Chop>) {
                collect_formula_thresholds(*x.lhs, snap, obs, out);
                collect_formula_thresholds(*x.rhs, snap, obs, out);
            }
        },
        f.node);
}

}  // namespace

std::vector<assertions::Assertion> derive_assertions(
    const PropertyBinding& pb, const usl::FormulaLibrary& lib) {
    std::vector<assertions::Assertion> out;

    assertions::Assertion inv;
    inv.name = pb.property.name + ".never_bad";
    inv.kind = assertions::Kind::Invariant;
    inv.condition_text = "!(" + prop_to_predicate(*pb.property.bad, pb, nullptr) + ")";
    inv.condition = pred::parse_predicate(inv.condition_text, lib);
    out.push_back(inv);

    for (const ta::DurationNote& n : pb.automaton.duration_notes) {
        const std::string& loc = pb.automaton.locations[n.location].name;
        if (n.min_seconds > 0.0) {
            assertions::Assertion a;
            a.name = pb.property.name + "." + loc + ".min_dwell";
            a.kind = assertions::Kind::PostCondition;
            a.flavor = assertions::Flavor::Temporal;
            a.window = n.min_seconds;
            a.trigger_text = "entered(" + loc + ")";
            a.trigger = pred::parse_predicate(a.trigger_text, lib);
            a.condition_text = "loc(" + loc + ")";
            a.condition = pred::parse_predicate(a.condition_text, lib);
            out.push_back(a);
        }
        if (std::isfinite(n.max_seconds)) {
            assertions::Assertion a;
            a.name = pb.property.name + "." + loc + ".max_dwell";
            a.kind = assertions::Kind::Invariant;
            a.condition_text =
                "dwell(" + loc + ") <= " + fmt_num(n.max_seconds);
            a.condition = pred::parse_predicate(a.condition_text, lib);
            out.push_back(a);
        }
    }
    return out;
}

std::vector<ta::Assumption> campaign_assumptions(const PropertyBinding& pb,
                                                 const sim::Scenario& base) {
    std::vector<ta::Assumption> out =
        ta::export_assumptions(pb.automaton, pb.property, pb.env);
    traffic::Snapshot snap =
        traffic::Snapshot::make(base.network, base.agents, 0.0, base.traffic);
    for (const sim::ObservationBinding& b : pb.bindings)
        if (b.is_usl)
            collect_formula_thresholds(*b.formula, snap, b.observation, out);
    return out;
}

std::vector<GeneratedScenario> generate_scenarios(const sim::Scenario& base,
                                                  const sim::CampaignSpec& spec,
                                                  std::uint64_t seed) {
    std::vector<GeneratedScenario> out;
    auto try_add = [&](std::vector<std::pair<std::string, double>> params,
                       const std::vector<std::pair<std::string, double>>& paths) {
        sim::Scenario s = base;
        std::string label;
        for (size_t i = 0; i < paths.size(); ++i) {
            sim::set_param(s, paths[i].first, paths[i].second);
            if (!label.empty()) label += ",";
            label += params[i].first + "=" + fmt_num(params[i].second);
        }
        try {
            s.validate();
        } catch (const std::exception&) {
            return;  // physically invalid point
        }
        s.seed = seed;
        out.push_back({std::move(s), label.empty() ? "base" : label,
                       std::move(params)});
    };

    const auto& axes = spec.axes;
    if (axes.empty()) {
        try_add({}, {});
        return out;
    }

    auto boundary_points = [](const sim::CampaignAxis& ax) {
        std::vector<double> pts{ax.lo - ax.epsilon, ax.lo, ax.lo + ax.epsilon,
                                ax.hi - ax.epsilon, ax.hi, ax.hi + ax.epsilon};
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end(),
                              [](double a, double b) {
                                  return std::fabs(a - b) < 1e-12;
                              }),
                  pts.end());
        return pts;
    };

    if (spec.strategy == "boundary") {
        auto cross2 = [&](size_t i, size_t j) {
            for (double vi : boundary_points(axes[i])) {
                if (i == j) {
                    try_add({{axes[i].name, vi}}, {{axes[i].path, vi}});
                    continue;
                }
                for (double vj : boundary_points(axes[j]))
                    try_add({{axes[i].name, vi}, {axes[j].name, vj}},
                            {{axes[i].path, vi}, {axes[j].path, vj}});
            }
        };
        if (axes.size() == 1) {
            cross2(0, 0);
        } else if (axes.size() == 2) {
            cross2(0, 1);
        } else {
            for (size_t i = 0; i < axes.size(); ++i)
                for (size_t j = i + 1; j < axes.size(); ++j) cross2(i, j);
        }
    } else if (spec.strategy == "sweep") {
        for (const sim::CampaignAxis& ax : axes) {
            int n = std::max(spec.trials, 2);
            for (int k = 0; k < n; ++k) {
                double v = ax.lo + (ax.hi - ax.lo) * k / (n - 1);
                try_add({{ax.name, v}}, {{ax.path, v}});
            }
        }
    } else if (spec.strategy == "random") {
        std::mt19937_64 rng(seed);
        auto uniform = [&rng](double lo, double hi) {
            double u = std::ldexp(static_cast<double>(rng() >> 11), -53);
            return lo + (hi - lo) * u;
        };
        for (int k = 0; k < spec.trials; ++k) {
            std::vector<std::pair<std::string, double>> params, paths;
            for (const sim::CampaignAxis& ax : axes) {
                double v = uniform(ax.lo, ax.hi);
                params.push_back({ax.name, v});
                paths.push_back({ax.path, v});
            }
            try_add(std::move(params), paths);
        }
    } else {
        throw std::invalid_argument("unknown campaign strategy '" +
                                    spec.strategy + "'");
    }
    if (out.empty())
        throw std::invalid_argument(
            "campaign produced no physically valid scenario");
    return out;
}

std::vector<ConflictFinding> detect_conflicts(
    const PropertyBinding& pb, const std::vector<ta::SafetyProperty>& properties,
    const sim::Trace& trace, const std::string& trial_label,
    const usl::FormulaLibrary& lib) {
    std::vector<ConflictFinding> out;
    if (properties.size() < 2) return out;

    static const std::string kStop = "stop";
    static const std::string kProceed = "proceed";
    struct Probe {
        std::string name;
        pred::PredicatePtr bad_if_stop;
        pred::PredicatePtr bad_if_proceed;
    };
    std::vector<Probe> probes;
    for (const ta::SafetyProperty& p : properties) {
        PropertyBinding tmp = pb;
        tmp.property = p;
        probes.push_back(
            {p.name,
             pred::parse_predicate(prop_to_predicate(*p.bad, tmp, &kStop), lib),
             pred::parse_predicate(prop_to_predicate(*p.bad, tmp, &kProceed),
                                   lib)});
    }

    for (std::size_t step = 0; step < trace.steps.size(); ++step) {
        // allowed action classes per property at this step
        std::vector<std::pair<bool, bool>> allowed;  // (stop ok, proceed ok)
        for (const Probe& p : probes)
            allowed.push_back(
                {!pred::eval_on_trace(*p.bad_if_stop, trace, step),
                 !pred::eval_on_trace(*p.bad_if_proceed, trace, step)});
        for (size_t i = 0; i < probes.size(); ++i)
            for (size_t j = i + 1; j < probes.size(); ++j) {
                const auto& [is, ip] = allowed[i];
                const auto& [js, jp] = allowed[j];
                bool i_some = is || ip, j_some = js || jp;
                bool overlap = (is && js) || (ip && jp);
                if (i_some && j_some && !overlap) {
                    out.push_back({trial_label, static_cast<int>(step),
                                   probes[i].name, probes[j].name,
                                   is ? "stop" : "proceed",
                                   js ? "stop" : "proceed"});
                }
            }
    }
    return out;
}

namespace {

sim::ObservationOverride witness_override(const ta::TimedAutomaton& a,
                                          const ta::Witness& w, double dt) {
    sim::ObservationOverride out;
    auto to_map = [&](ta::Valuation v) {
        std::map<std::string, bool> m;
        for (size_t i = 0; i < a.observations.size(); ++i)
            m[a.observations[i]] = ((v >> i) & 1u) != 0;
        return m;
    };
    int hold = static_cast<int>(
                   std::ceil(a.max_constant() * a.time_unit / dt)) + 1;
    ta::Valuation cur = w.initial_valuation;
    out.timeline.push_back(to_map(cur));
    for (const ta::WitnessStep& st : w.steps) {
        if (st.kind == ta::WitnessStep::Kind::SetObservations) {
            cur = st.valuation;
            for (int i = 0; i < hold; ++i) out.timeline.push_back(to_map(cur));
        } else {
            for (int i = 0; i < hold; ++i) out.timeline.push_back(to_map(cur));
        }
    }
    return out;
}

}  // namespace

CorroborationReport run_campaign(const PropertyBinding& pb,
                                 const sim::Scenario& base,
                                 const CampaignOptions& opts,
                                 const std::vector<ta::SafetyProperty>& extra,
                                 const usl::FormulaLibrary& lib) {
    auto t0 = std::chrono::steady_clock::now();
    CorroborationReport rep;
    rep.property_name = pb.property.name;
    rep.controller_digest = pb.controller_digest;
    rep.scenario_digest = sim::scenario_digest(base);

    sim::CampaignSpec spec = base.campaign;
    if (!opts.strategy.empty()) spec.strategy = opts.strategy;
    if (opts.trials > 0) spec.trials = opts.trials;
    if (opts.epsilon > 0.0)
        for (sim::CampaignAxis& ax : spec.axes) ax.epsilon = opts.epsilon;
    rep.strategy = spec.strategy;
    rep.seed = opts.seed_set ? opts.seed : base.seed;

    // Formal verification side.
    ta::Verdict verdict = ta::reachability(pb.automaton, pb.property, pb.env);
    rep.formal_safe = verdict.safe;
    rep.formal_explored = verdict.explored;
    if (!verdict.safe) {
        rep.witness_text = verdict.witness->render(pb.automaton);
        rep.witness_replayed =
            ta::replay_witness(pb.automaton, pb.property, pb.env, *verdict.witness);
    }

    rep.assumptions = campaign_assumptions(pb, base);
    rep.derived = derive_assertions(pb, lib);

    std::vector<ta::SafetyProperty> all_props{pb.property};
    all_props.insert(all_props.end(), extra.begin(), extra.end());

    bool writing = !opts.out_dir.empty();
    namespace fs = std::filesystem;
    if (writing) {
        fs::create_directories(fs::path(opts.out_dir) / "scenarios");
        fs::create_directories(fs::path(opts.out_dir) / "traces");
    }

    std::vector<GeneratedScenario> gen = generate_scenarios(base, spec, rep.seed);
    rep.trials.resize(gen.size());

    auto run_trial = [&](int i) {
        const GeneratedScenario& g = gen[i];
        TrialResult tr;
        tr.index = i;
        tr.label = g.label;
        tr.params = g.params;
        try {
            std::string scn_bytes = sim::serialize_scenario(g.scenario);
            sim::Trace trace =
                sim::run(g.scenario, pb.automaton, pb.bindings,
                         sim::content_digest(scn_bytes), pb.controller_digest);
            std::string trace_bytes = sim::serialize_trace(trace);
            tr.trace_digest = sim::content_digest(trace_bytes);
            if (writing) {
                char name[64];
                std::snprintf(name, sizeof name, "trial_%03d", i);
                tr.scenario_file = (fs::path(opts.out_dir) / "scenarios" /
                                    (std::string(name) + ".scn")).string();
                tr.trace_file = (fs::path(opts.out_dir) / "traces" /
                                 (std::string(name) + ".jsonl")).string();
                std::ofstream(tr.scenario_file, std::ios::binary) << scn_bytes;
                std::ofstream(tr.trace_file, std::ios::binary) << trace_bytes;
            }
            tr.results = assertions::check_suite(trace, rep.derived, false);
            tr.summary = assertions::summarize(tr.results);
            tr.non_vacuous = (tr.summary.passed + tr.summary.failed) > 0;
            tr.failed = tr.summary.failed > 0;
            if (all_props.size() > 1) {
                auto confs = detect_conflicts(pb, all_props, trace, g.label, lib);
#ifdef _OPENMP
#pragma omp critical
#endif
                rep.conflicts.insert(rep.conflicts.end(), confs.begin(),
                                     confs.end());
            }
        } catch (const std::exception& e) {
            tr.error = std::string("trial '") + g.label + "': " + e.what();
        }
        rep.trials[i] = std::move(tr);
    };

#ifdef _OPENMP
    if (opts.workers > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(opts.workers)
        for (int i = 0; i < static_cast<int>(gen.size()); ++i) run_trial(i);
    } else {
        for (int i = 0; i < static_cast<int>(gen.size()); ++i) run_trial(i);
    }
#else
    for (int i = 0; i < static_cast<int>(gen.size()); ++i) run_trial(i);
#endif

    // Conflicts collected from parallel trials: deterministic order.
    std::sort(rep.conflicts.begin(), rep.conflicts.end(),
              [](const ConflictFinding& a, const ConflictFinding& b) {
                  return std::tie(a.trial_label, a.step, a.property_a) <
                         std::tie(b.trial_label, b.step, b.property_a);
              });

    // Witness replay as a scripted scenario: drive the controller's
    // observations along the witness and re-check the derived assertions.
    if (!verdict.safe) {
        sim::ObservationOverride ovr =
            witness_override(pb.automaton, *verdict.witness, base.dt);
        TrialResult tr;
        tr.index = static_cast<int>(rep.trials.size());
        tr.label = "witness_replay";
        try {
            sim::Scenario replay_base = base;
            replay_base.campaign = {};
            sim::Trace trace = sim::run(replay_base, pb.automaton, pb.bindings,
                                        rep.scenario_digest,
                                        pb.controller_digest, &ovr);
            std::string trace_bytes = sim::serialize_trace(trace);
            tr.trace_digest = sim::content_digest(trace_bytes);
            if (writing) {
                tr.trace_file =
                    (fs::path(opts.out_dir) / "traces" / "witness_replay.jsonl")
                        .string();
                std::ofstream(tr.trace_file, std::ios::binary) << trace_bytes;
            }
            tr.results = assertions::check_suite(trace, rep.derived, false);
            tr.summary = assertions::summarize(tr.results);
            tr.non_vacuous = (tr.summary.passed + tr.summary.failed) > 0;
            tr.failed = tr.summary.failed > 0;
            rep.witness_realizable = tr.failed;
            rep.witness_trial_label = tr.label;
        } catch (const std::exception& e) {
            tr.error = std::string("witness replay: ") + e.what();
        }
        rep.trials.push_back(std::move(tr));
        if (!rep.witness_realizable)
            rep.findings.push_back(
                "refuted-formally, unrealizable-in-simulation: the "
                "model-checking witness does not reproduce a failing trace");
    }

    // Status per the falsification reading: an attempt to falsify must have
    // been made (every point executed, every derived check exercised
    // somewhere) and must have failed.
    bool any_failed = false, any_error = false, all_non_vacuous = true;
    std::vector<bool> fired(rep.derived.size(), false);
    for (const TrialResult& tr : rep.trials) {
        if (tr.label == "witness_replay") continue;
        any_failed |= tr.failed;
        any_error |= !tr.error.empty();
        all_non_vacuous &= tr.non_vacuous;
        for (size_t i = 0; i < tr.results.size() && i < fired.size(); ++i)
            if (tr.results[i].verdict != assertions::AssertVerdict::Vacuous)
                fired[i] = true;
        if (!tr.non_vacuous && tr.error.empty())
            rep.findings.push_back("trial '" + tr.label +
                                   "' is vacuous: no derived assertion was "
                                   "exercised");
        if (!tr.error.empty()) rep.findings.push_back(tr.error);
    }
    bool coverage_hole = false;
    for (size_t i = 0; i < fired.size(); ++i) {
        if (fired[i]) continue;
        coverage_hole = true;
        rep.findings.push_back("derived assertion '" + rep.derived[i].name +
                               "' never triggered in any trial");
    }
    if (any_failed || rep.witness_realizable) {
        rep.status = "refuted";
    } else if (rep.formal_safe && !any_error && all_non_vacuous &&
               !coverage_hole && !rep.trials.empty()) {
        rep.status = "corroborated";
    } else {
        rep.status = "inconclusive";
        if (!rep.formal_safe)
            rep.findings.push_back(
                "formal verdict is Unsafe but no trial reproduced a failure");
    }

    rep.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();

    if (writing) {
        std::ofstream((fs::path(opts.out_dir) / "report.json").string(),
                      std::ios::binary)
            << render_report_json(rep);
        std::ofstream((fs::path(opts.out_dir) / "report.md").string(),
                      std::ios::binary)
            << render_report_markdown(rep);
    }
    return rep;
}

std::string render_report_json(const CorroborationReport& rep) {
    if (rep.trials.empty())
        throw std::invalid_argument("nothing to report: campaign ran no trials");
    ordered_json j;
    j["property"] = rep.property_name;
    j["status"] = rep.status;
    j["controller_digest"] = rep.controller_digest;
    j["scenario_digest"] = rep.scenario_digest;
    j["strategy"] = rep.strategy;
    j["seed"] = rep.seed;
    j["formal"] = {{"safe", rep.formal_safe},
                   {"explored_nodes", rep.formal_explored},
                   {"witness", rep.witness_text},
                   {"witness_replayed", rep.witness_replayed},
                   {"witness_realizable", rep.witness_realizable}};
    j["assumptions"] = ordered_json::array();
    for (const ta::Assumption& a : rep.assumptions) {
        ordered_json ja{{"name", a.name},
                        {"kind", a.kind},
                        {"lo", a.lo},
                        {"detail", a.detail}};
        if (std::isfinite(a.hi)) ja["hi"] = a.hi;
        j["assumptions"].push_back(ja);
    }
    j["derived_assertions"] = ordered_json::array();
    for (const assertions::Assertion& a : rep.derived)
        j["derived_assertions"].push_back(
            {{"name", a.name},
             {"kind", assertions::to_string(a.kind)},
             {"condition", a.condition_text}});
    j["trials"] = ordered_json::array();
    for (const TrialResult& tr : rep.trials) {
        ordered_json params = ordered_json::object();
        for (const auto& [k, v] : tr.params) params[k] = v;
        ordered_json results = ordered_json::array();
        for (const assertions::AssertionResult& r : tr.results) {
            ordered_json rr{{"name", r.name},
                            {"verdict", assertions::to_string(r.verdict)}};
            if (!r.failures.empty()) {
                rr["failures"] = ordered_json::array();
                for (const assertions::Failure& f : r.failures)
                    rr["failures"].push_back({{"reference_step", f.reference_step},
                                              {"step", f.step},
                                              {"detail", f.detail}});
            }
            results.push_back(rr);
        }
        j["trials"].push_back({{"label", tr.label},
                               {"params", params},
                               {"scenario_file", tr.scenario_file},
                               {"trace_file", tr.trace_file},
                               {"trace_digest", tr.trace_digest},
                               {"pass", tr.summary.passed},
                               {"fail", tr.summary.failed},
                               {"vacuous", tr.summary.vacuous},
                               {"error", tr.error},
                               {"results", results}});
    }
    j["conflicts"] = ordered_json::array();
    for (const ConflictFinding& c : rep.conflicts)
        j["conflicts"].push_back({{"trial", c.trial_label},
                                  {"step", c.step},
                                  {"property_a", c.property_a},
                                  {"demand_a", c.demand_a},
                                  {"property_b", c.property_b},
                                  {"demand_b", c.demand_b}});
    j["findings"] = rep.findings;
    j["runtime_ms"] = rep.runtime_ms;
    return j.dump(2) + "\n";
}

std::string render_report_markdown(const CorroborationReport& rep) {
    if (rep.trials.empty())
        throw std::invalid_argument("nothing to report: campaign ran no trials");
    std::ostringstream os;
    os << "# Corroboration report: " << rep.property_name << "\n\n";
    os << "**Status: " << rep.status << "**\n\n";

    if (rep.status == "refuted") {
        os << "## Counterexamples\n\n";
        for (const TrialResult& tr : rep.trials) {
            if (!tr.failed) continue;
            os << "- trial `" << tr.label << "`";
            if (!tr.trace_file.empty()) os << " — trace `" << tr.trace_file << "`";
            os << " (digest " << tr.trace_digest << ")\n";
            for (const assertions::AssertionResult& r : tr.results)
                for (const assertions::Failure& f : r.failures)
                    os << "  - " << r.name << " failed at step " << f.step << ": "
                       << f.detail << "\n";
        }
        os << "\n";
    }

    os << "## Formal verification\n\n";
    os << "- verdict: " << (rep.formal_safe ? "Safe" : "Unsafe") << " ("
       << rep.formal_explored << " nodes)\n";
    if (!rep.formal_safe) {
        os << "- witness: " << rep.witness_text << "\n";
        os << "- witness replayed symbolically: "
           << (rep.witness_replayed ? "yes" : "no") << "\n";
        os << "- witness realizable in simulation: "
           << (rep.witness_realizable ? "yes" : "no") << "\n";
    }

    os << "\n## Assumptions\n\n";
    for (const ta::Assumption& a : rep.assumptions) {
        os << "- `" << a.name << "` (" << a.kind << "): [" << fmt_num(a.lo) << ", ";
        if (std::isfinite(a.hi)) os << fmt_num(a.hi);
        else os << "inf";
        os << "] — " << a.detail << "\n";
    }

    os << "\n## Trials (" << rep.strategy << ", seed " << rep.seed << ")\n\n";
    os << "| trial | parameters | pass | fail | vacuous | trace |\n";
    os << "|-------|------------|------|------|---------|-------|\n";
    for (const TrialResult& tr : rep.trials) {
        os << "| " << tr.label << " | ";
        for (size_t i = 0; i < tr.params.size(); ++i) {
            if (i) os << ", ";
            os << tr.params[i].first << "=" << fmt_num(tr.params[i].second);
        }
        os << " | " << tr.summary.passed << " | " << tr.summary.failed << " | "
           << tr.summary.vacuous << " | " << tr.trace_digest << " |\n";
    }

    if (!rep.conflicts.empty()) {
        os << "\n## Conflicting demands\n\n";
        for (const ConflictFinding& c : rep.conflicts)
            os << "- trial `" << c.trial_label << "` step " << c.step << ": `"
               << c.property_a << "` demands " << c.demand_a << ", `"
               << c.property_b << "` demands " << c.demand_b << "\n";
    }

    if (!rep.findings.empty()) {
        os << "\n## Findings\n\n";
        for (const std::string& f : rep.findings) os << "- " << f << "\n";
    }
    os << "\n_runtime: " << fmt_num(rep.runtime_ms) << " ms_\n";
    return os.str();
}

}  // namespace crosscheck::corro
