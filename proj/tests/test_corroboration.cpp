#include <doctest.h>

#include "crosscheck/corroboration.hpp"
#include "crosscheck/simulator.hpp"

using namespace crosscheck;
using namespace crosscheck::corro;

namespace {

PropertyBinding shipped_binding(const std::string& controller) {
    model::ControllerFile cf = model::load_controller(controller);
    REQUIRE(!cf.properties.empty());
    return {cf.automaton, cf.properties[0], cf.env, cf.bindings, cf.digest};
}

}  // namespace

TEST_CASE("derive_assertions: invariant plus dwell bounds") {
    PropertyBinding pb = shipped_binding("data/stop_rule.rbd");
    auto derived = derive_assertions(pb);
    REQUIRE(derived.size() == 2);
    CHECK(derived[0].name == "stop_compliance.never_bad");
    CHECK(derived[0].kind == assertions::Kind::Invariant);
    // observation symbols were replaced by their bound formulas
    CHECK(derived[0].condition_text.find("usl(\"sg(ego) ; len >= 0\"") !=
          std::string::npos);
    CHECK(derived[0].condition_text.find("safe_gap") == std::string::npos);
    CHECK(derived[1].name == "stop_compliance.decelerate.max_dwell");

    // a property with no duration bounds derives only the invariant
    model::ControllerFile nf = model::load_controller("data/stop_rule_no_stop.ta");
    PropertyBinding pb2{nf.automaton, nf.properties[0], nf.env, nf.bindings,
                        nf.digest};
    CHECK(derive_assertions(pb2).size() == 1);
}

TEST_CASE("derive_assertions: a missing binding names the symbol") {
    PropertyBinding pb = shipped_binding("data/stop_rule.rbd");
    std::erase_if(pb.bindings, [](const sim::ObservationBinding& b) {
        return b.observation == "safe_gap";
    });
    CHECK_THROWS_WITH_AS(derive_assertions(pb),
                         "no binding for observation 'safe_gap'",
                         std::invalid_argument);
}

TEST_CASE("campaign assumptions include the resolved gap threshold") {
    PropertyBinding pb = shipped_binding("data/stop_rule.rbd");
    sim::Scenario sc = sim::load_scenario("data/intersection_stop.scn");
    auto assumptions = campaign_assumptions(pb, sc);
    bool gap = false, dwell = false;
    for (const ta::Assumption& a : assumptions) {
        if (a.name == "safe_gap.threshold" && a.lo == doctest::Approx(4.5))
            gap = true;
        if (a.name == "decelerate.duration" && a.hi == doctest::Approx(2.5))
            dwell = true;
    }
    CHECK(gap);
    CHECK(dwell);
}

TEST_CASE("boundary points bracket the verified range") {
    sim::Scenario sc = sim::load_scenario("data/intersection_stop.scn");
    sim::CampaignSpec spec;
    spec.strategy = "boundary";
    spec.axes.push_back({"gap_threshold", "intersection.0.lo", 52.0, 52.0, 0.1});
    auto gen = generate_scenarios(sc, spec, 7);
    REQUIRE(gen.size() == 3);
    CHECK(gen[0].params[0].second == doctest::Approx(51.9));
    CHECK(gen[1].params[0].second == doctest::Approx(52.0));
    CHECK(gen[2].params[0].second == doctest::Approx(52.1));

    // two axes cross-product
    spec.axes.push_back({"crossing_speed", "events.0.speed", 2.0, 6.0, 0.1});
    auto gen2 = generate_scenarios(sc, spec, 7);
    CHECK(gen2.size() == 3 * 6);

    // physically invalid points are dropped
    sim::CampaignSpec neg;
    neg.strategy = "boundary";
    neg.axes.push_back({"speed", "agents.E.speed", 0.0, 0.0, 0.1});
    auto gen3 = generate_scenarios(sc, neg, 7);
    CHECK(gen3.size() == 2);  // -0.1 m/s dropped
}

TEST_CASE("sweep and random strategies are deterministic per seed") {
    sim::Scenario sc = sim::load_scenario("data/intersection_stop.scn");
    sim::CampaignSpec spec;
    spec.strategy = "random";
    spec.trials = 9;
    spec.axes.push_back({"crossing_speed", "events.0.speed", 2.0, 6.0, 0.1});
    auto a = generate_scenarios(sc, spec, 42);
    auto b = generate_scenarios(sc, spec, 42);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].label == b[i].label);
        CHECK(sim::scenario_digest(a[i].scenario) ==
              sim::scenario_digest(b[i].scenario));
    }
    auto c = generate_scenarios(sc, spec, 43);
    CHECK(c[0].label != a[0].label);

    spec.strategy = "sweep";
    spec.trials = 5;
    auto d = generate_scenarios(sc, spec, 1);
    REQUIRE(d.size() == 5);
    CHECK(d[0].params[0].second == doctest::Approx(2.0));
    CHECK(d[4].params[0].second == doctest::Approx(6.0));
}

TEST_CASE("the correct controller corroborates on the shipped campaign") {
    PropertyBinding pb = shipped_binding("data/stop_rule.rbd");
    sim::Scenario sc = sim::load_scenario("data/intersection_stop.scn");
    CampaignOptions opts;
    opts.workers = 1;
    CorroborationReport rep = run_campaign(pb, sc, opts);
    CHECK(rep.status == "corroborated");
    CHECK(rep.formal_safe);
    CHECK(rep.trials.size() == 18);
    for (const TrialResult& tr : rep.trials) {
        CHECK(tr.non_vacuous);
        CHECK_FALSE(tr.failed);
    }

    // reproducibility: rerunning yields identical labels and verdicts
    CorroborationReport rep2 = run_campaign(pb, sc, opts);
    REQUIRE(rep2.trials.size() == rep.trials.size());
    for (size_t i = 0; i < rep.trials.size(); ++i) {
        CHECK(rep.trials[i].label == rep2.trials[i].label);
        CHECK(rep.trials[i].failed == rep2.trials[i].failed);
        CHECK(rep.trials[i].trace_digest == rep2.trials[i].trace_digest);
    }
}

TEST_CASE("the never-stopping controller is refuted with evidence") {
    PropertyBinding pb = shipped_binding("data/stop_rule_no_stop.ta");
    sim::Scenario sc = sim::load_scenario("data/intersection_stop.scn");
    CampaignOptions opts;
    opts.workers = 1;
    CorroborationReport rep = run_campaign(pb, sc, opts);
    CHECK(rep.status == "refuted");
    CHECK_FALSE(rep.formal_safe);
    CHECK(rep.witness_replayed);
    CHECK(!rep.witness_text.empty());
    int failing = 0;
    for (const TrialResult& tr : rep.trials) failing += tr.failed;
    CHECK(failing > 0);
}

TEST_CASE("a campaign whose triggers never fire is inconclusive") {
    // give the stopped step a minimum dwell so a triggered Post assertion is
    // derived, then end the run before the ego ever reaches the line
    model::ControllerFile cf = model::load_controller("data/stop_rule.rbd");
    ta::RuleDiagram d = *cf.diagram;
    for (ta::DiagramStep& s : d.steps)
        if (s.name == "stopped") s.min_duration = 0.5;
    PropertyBinding pb{ta::compile_diagram(d), cf.properties[0], cf.env,
                       cf.bindings, cf.digest};
    pb.property.bad = ta::parse_prop_expr(pb.property.source_text, pb.automaton);

    sim::Scenario sc = sim::load_scenario("data/intersection_stop.scn");
    sc.duration = 2.0;  // too short to reach the stop line
    sc.events.clear();
    sc.campaign.axes.resize(1);
    CampaignOptions opts;
    opts.workers = 1;
    CorroborationReport rep = run_campaign(pb, sc, opts);
    CHECK(rep.formal_safe);
    CHECK(rep.status == "inconclusive");
    bool hole = false;
    for (const std::string& f : rep.findings)
        hole |= f.find("never triggered") != std::string::npos;
    CHECK(hole);
}

TEST_CASE("campaigns with invalid axis values reject or drop points") {
    sim::Scenario sc = sim::load_scenario("data/intersection_stop.scn");
    sc.campaign.axes.resize(1);
    sc.campaign.axes[0].path = "agents.E.pos";
    sc.campaign.axes[0].lo = 200.0;  // outside the lane: every point invalid
    sc.campaign.axes[0].hi = 200.0;
    CHECK_THROWS_AS(generate_scenarios(sc, sc.campaign, 1),
                    std::invalid_argument);

    sim::Scenario bad_path = sim::load_scenario("data/intersection_stop.scn");
    bad_path.campaign.axes[0].path = "agents.Q.pos";
    CHECK_THROWS_AS(generate_scenarios(bad_path, bad_path.campaign, 1),
                    std::invalid_argument);
}

TEST_CASE("conflicting demands are detected on the crossing scenario") {
    model::ControllerFile cf = model::load_controller("data/stop_rule.rbd");
    PropertyBinding pb{cf.automaton, cf.properties[0], cf.env, cf.bindings,
                       cf.digest};
    auto keep_clear =
        model::load_properties("data/keep_clear_crossing.prop", cf.automaton);
    sim::Scenario sc = sim::load_scenario("data/crossing_conflict.scn");
    sim::Trace trace = sim::run(sc, cf.automaton, cf.bindings);

    auto conflicts = detect_conflicts(
        pb, {cf.properties[0], keep_clear[0]}, trace, "conflict");
    REQUIRE(!conflicts.empty());
    // the conflict appears while the ego holds at the line on the crossing
    bool stopped_conflict = false;
    for (const ConflictFinding& c : conflicts)
        stopped_conflict |= trace.steps[c.step].location == "stopped";
    CHECK(stopped_conflict);
    CHECK(conflicts[0].demand_a != conflicts[0].demand_b);

    // single property: no pair, no findings
    CHECK(detect_conflicts(pb, {cf.properties[0]}, trace, "x").empty());

    // disjoint triggers: a property that never restricts anything
    auto harmless = model::load_properties("data/stop_property.prop",
                                           cf.automaton);
    harmless[0].bad = ta::parse_prop_expr("false", cf.automaton);
    CHECK(detect_conflicts(pb, {harmless[0], harmless[0]}, trace, "x").empty());
}

TEST_CASE("reports render in both formats with ordering rules") {
    PropertyBinding pb = shipped_binding("data/stop_rule_ignore_gap.rbd");
    sim::Scenario sc = sim::load_scenario("data/intersection_stop.scn");
    sc.campaign.axes.resize(1);  // gap axis only
    CampaignOptions opts;
    opts.workers = 1;
    CorroborationReport rep = run_campaign(pb, sc, opts);
    CHECK(rep.status == "refuted");

    std::string md = render_report_markdown(rep);
    // counterexamples come first in a refuted report
    CHECK(md.find("## Counterexamples") < md.find("## Formal verification"));
    std::string js = render_report_json(rep);
    CHECK(js.find("\"status\": \"refuted\"") != std::string::npos);

    CorroborationReport empty;
    CHECK_THROWS_AS(render_report_json(empty), std::invalid_argument);
    CHECK_THROWS_AS(render_report_markdown(empty), std::invalid_argument);
}
