#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include <json.hpp>

#include "crosscheck/corroboration.hpp"
#include "crosscheck/formula_parse.hpp"
#include "crosscheck/simulator.hpp"

using namespace crosscheck;

namespace {

usl::FormulaLibrary load_library(const std::string& path) {
    if (path.empty()) return usl::FormulaLibrary::with_defaults();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open formula file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return usl::parse_library(ss.str());
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_simulate(const std::string& scenario_path,
                 const std::string& controller_path,
                 const std::string& binding_path, const std::string& out,
                 const std::string& formulas, long seed, double dt,
                 double duration) {
    usl::FormulaLibrary lib = load_library(formulas);
    sim::Scenario sc = sim::load_scenario(scenario_path);
    if (seed >= 0) sc.seed = static_cast<std::uint64_t>(seed);
    if (dt > 0) sc.dt = dt;
    if (duration > 0) sc.duration = duration;
    model::ControllerFile cf = model::load_controller(controller_path, lib);
    sim::Bindings bindings = cf.bindings;
    if (!binding_path.empty()) bindings = model::load_bindings(binding_path, lib);
    sim::Trace trace = sim::run(sc, cf.automaton, bindings,
                                sim::content_digest(slurp(scenario_path)),
                                cf.digest);
    sim::save_trace(trace, out);
    std::cout << "wrote " << trace.steps.size() << " steps to " << out << "\n";
    return 0;
}

int run_check(const std::string& trace_path, const std::string& assert_path,
              const std::string& report_path, const std::string& format,
              const std::string& formulas, bool parallel) {
    usl::FormulaLibrary lib = load_library(formulas);
    sim::Trace trace = sim::load_trace(trace_path);
    auto as = assertions::load_assertions(assert_path, lib);
    auto results = assertions::check_suite(trace, as, parallel);
    assertions::SuiteSummary sum = assertions::summarize(results);

    nlohmann::ordered_json j;
    j["trace"] = trace_path;
    j["summary"] = {{"pass", sum.passed},
                    {"fail", sum.failed},
                    {"vacuous", sum.vacuous}};
    j["results"] = nlohmann::ordered_json::array();
    std::ostringstream text;
    for (const assertions::AssertionResult& r : results) {
        nlohmann::ordered_json rr;
        rr["name"] = r.name;
        rr["verdict"] = assertions::to_string(r.verdict);
        rr["reference_points"] = r.reference_points;
        rr["clipped_windows"] = r.clipped_windows;
        rr["failures"] = nlohmann::ordered_json::array();
        for (const assertions::Failure& f : r.failures)
            rr["failures"].push_back({{"reference_step", f.reference_step},
                                      {"step", f.step},
                                      {"detail", f.detail}});
        j["results"].push_back(rr);

        text << (r.verdict == assertions::AssertVerdict::Pass   ? "PASS    "
                 : r.verdict == assertions::AssertVerdict::Fail ? "FAIL    "
                                                                : "VACUOUS ")
             << r.name;
        if (!r.failures.empty()) {
            text << "  (" << r.failures.size() << " failing step"
                 << (r.failures.size() > 1 ? "s" : "") << ", first at "
                 << r.failures[0].step << ": " << r.failures[0].detail << ")";
        }
        text << "\n";
    }
    text << sum.passed << " pass, " << sum.failed << " fail, " << sum.vacuous
         << " vacuous\n";

    std::string rendered = format == "json" ? j.dump(2) + "\n" : text.str();
    std::cout << rendered;
    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::binary);
        out << (format == "json" ? j.dump(2) + "\n" : text.str());
    }
    return sum.failed == 0 ? 0 : 1;
}

int run_verify(const std::string& controller_path,
               const std::string& property_path, const std::string& out,
               const std::string& formulas) {
    usl::FormulaLibrary lib = load_library(formulas);
    model::ControllerFile cf = model::load_controller(controller_path, lib);
    std::vector<ta::SafetyProperty> props = cf.properties;
    if (!property_path.empty())
        props = model::load_properties(property_path, cf.automaton);
    if (props.empty())
        throw std::runtime_error("no property given; use --property");

    int worst = 0;
    nlohmann::ordered_json j;
    j["controller"] = controller_path;
    j["verdicts"] = nlohmann::ordered_json::array();
    for (const ta::SafetyProperty& p : props) {
        ta::Verdict v = ta::reachability(cf.automaton, p, cf.env);
        std::cout << p.name << ": " << (v.safe ? "Safe" : "Unsafe") << " ("
                  << v.explored << " nodes)\n";
        nlohmann::ordered_json pj;
        pj["property"] = p.name;
        pj["safe"] = v.safe;
        pj["explored_nodes"] = v.explored;
        if (!v.safe) {
            std::string w = v.witness->render(cf.automaton);
            std::cout << "  witness: " << w << "\n";
            pj["witness"] = w;
            pj["witness_replays"] =
                ta::replay_witness(cf.automaton, p, cf.env, *v.witness);
            worst = 2;
        }
        auto assumptions = ta::export_assumptions(cf.automaton, p, cf.env);
        pj["assumptions"] = nlohmann::ordered_json::array();
        for (const ta::Assumption& a : assumptions) {
            nlohmann::ordered_json aj{
                {"name", a.name}, {"kind", a.kind}, {"lo", a.lo},
                {"detail", a.detail}};
            if (std::isfinite(a.hi)) aj["hi"] = a.hi;
            pj["assumptions"].push_back(aj);
        }
        j["verdicts"].push_back(pj);
    }
    if (!out.empty()) std::ofstream(out, std::ios::binary) << j.dump(2) << "\n";
    return worst;
}

int run_corroborate(const std::string& scenario_path,
                    const std::string& controller_path,
                    const std::vector<std::string>& property_paths,
                    const std::string& binding_path, const std::string& strategy,
                    double epsilon, int trials, long seed, int workers,
                    const std::string& out_dir, const std::string& formulas) {
    usl::FormulaLibrary lib = load_library(formulas);
    sim::Scenario sc = sim::load_scenario(scenario_path);
    model::ControllerFile cf = model::load_controller(controller_path, lib);

    std::vector<ta::SafetyProperty> props;
    for (const std::string& p : property_paths) {
        auto loaded = model::load_properties(p, cf.automaton);
        props.insert(props.end(), loaded.begin(), loaded.end());
    }
    if (props.empty()) props = cf.properties;
    if (props.empty())
        throw std::runtime_error("no property given; use --property");

    sim::Bindings bindings = model::load_bindings(binding_path, lib);
    if (bindings.empty())
        throw std::runtime_error("binding file '" + binding_path +
                                 "' declares no bindings");

    corro::PropertyBinding pb{cf.automaton, props[0], cf.env, bindings,
                              cf.digest};
    corro::CampaignOptions opts;
    opts.strategy = strategy;
    opts.trials = trials;
    if (seed >= 0) {
        opts.seed = static_cast<std::uint64_t>(seed);
        opts.seed_set = true;
    }
    opts.epsilon = epsilon;
    opts.workers = workers;
    opts.out_dir = out_dir;

    std::vector<ta::SafetyProperty> extra(props.begin() + 1, props.end());
    corro::CorroborationReport rep =
        corro::run_campaign(pb, sc, opts, extra, lib);

    std::cout << "property " << rep.property_name << ": formal "
              << (rep.formal_safe ? "Safe" : "Unsafe") << ", "
              << rep.trials.size() << " trials, status " << rep.status << "\n";
    for (const std::string& f : rep.findings) std::cout << "  - " << f << "\n";
    if (!out_dir.empty())
        std::cout << "report written to " << out_dir << "/report.json and .md\n";
    return rep.status == "corroborated" ? 0 : rep.status == "refuted" ? 2 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "crosscheck: formal verification and simulation-based assertion "
        "checking of traffic-rule controllers, cross-checked"};
    app.require_subcommand(1);

    std::string scenario, controller, binding, out, trace_path, assert_path;
    std::string report_path, format = "text", formulas, property_single;
    std::vector<std::string> properties;
    std::string strategy;
    double epsilon = 0.0, dt = 0.0, duration = 0.0;
    int trials = 0, workers = 1;
    long seed = -1;
    bool parallel = false;

    CLI::App* sim_cmd = app.add_subcommand("simulate", "run a scenario");
    sim_cmd->add_option("--scenario", scenario)->required();
    sim_cmd->add_option("--controller", controller)->required();
    sim_cmd->add_option("--out", out)->required();
    sim_cmd->add_option("--binding", binding,
                        "binding file (default: controller file)");
    sim_cmd->add_option("--seed", seed);
    sim_cmd->add_option("--dt", dt);
    sim_cmd->add_option("--duration", duration);
    sim_cmd->add_option("--formulas", formulas);

    CLI::App* check_cmd =
        app.add_subcommand("check", "check assertions over a stored trace");
    check_cmd->add_option("--trace", trace_path)->required();
    check_cmd->add_option("--assertions", assert_path)->required();
    check_cmd->add_option("--report", report_path);
    check_cmd->add_option("--format", format)
        ->check(CLI::IsMember({"json", "text"}));
    check_cmd->add_option("--formulas", formulas);
    check_cmd->add_flag("--parallel", parallel);

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "model-check a controller");
    verify_cmd->add_option("--controller", controller)->required();
    verify_cmd->add_option("--property", property_single);
    verify_cmd->add_option("--out", out);
    verify_cmd->add_option("--formulas", formulas);

    CLI::App* corro_cmd = app.add_subcommand(
        "corroborate", "boundary campaign pairing both evidence streams");
    corro_cmd->add_option("--scenario", scenario)->required();
    corro_cmd->add_option("--controller", controller)->required();
    corro_cmd->add_option("--property", properties)->required();
    corro_cmd->add_option("--binding", binding)->required();
    corro_cmd->add_option("--strategy", strategy)
        ->check(CLI::IsMember({"boundary", "sweep", "random", ""}));
    corro_cmd->add_option("--epsilon", epsilon);
    corro_cmd->add_option("--trials", trials);
    corro_cmd->add_option("--seed", seed);
    corro_cmd->add_option("--workers", workers);
    corro_cmd->add_option("--out", out)->required();
    corro_cmd->add_option("--formulas", formulas);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim_cmd->parsed())
            return run_simulate(scenario, controller, binding, out, formulas,
                                seed, dt, duration);
        if (check_cmd->parsed())
            return run_check(trace_path, assert_path, report_path, format,
                             formulas, parallel);
        if (verify_cmd->parsed())
            return run_verify(controller, property_single, out, formulas);
        if (corro_cmd->parsed())
            return run_corroborate(scenario, controller, properties, binding,
                                   strategy, epsilon, trials, seed, workers,
                                   out, formulas);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
