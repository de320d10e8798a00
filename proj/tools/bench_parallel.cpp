// Compares the serial and OpenMP paths of the batch layers: assertion suites
// over one trace, campaign trials, and bulk formula evaluation. The serial
// paths are the reference the tests pin the parallel results against.
#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "crosscheck/corroboration.hpp"
#include "crosscheck/formula_parse.hpp"
#include "crosscheck/simulator.hpp"
#include "crosscheck/spatial_eval.hpp"

using namespace crosscheck;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

struct Row {
    const char* name;
    double serial_ms;
    double parallel_ms;
};

void print_rows(const std::vector<Row>& rows) {
    std::printf("%-28s %12s %12s %9s\n", "benchmark", "serial(ms)",
                "parallel(ms)", "speedup");
    for (const Row& r : rows)
        std::printf("%-28s %12.1f %12.1f %8.2fx\n", r.name, r.serial_ms,
                    r.parallel_ms, r.serial_ms / r.parallel_ms);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP with %d thread(s) available\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; parallel paths run serially\n");
#endif
    std::vector<Row> rows;

    sim::Scenario sc = sim::load_scenario("data/intersection_stop.scn");
    model::ControllerFile cf = model::load_controller("data/stop_rule.rbd");

    // fine-grained trace + a stack of assertions
    {
        sim::Scenario fine = sc;
        fine.dt = 0.02;
        sim::Trace trace = sim::run(fine, cf.automaton, cf.bindings);
        auto base = assertions::load_assertions("data/ukhc_rule_170.assert");
        std::vector<assertions::Assertion> suite;
        for (int i = 0; i < 12; ++i)
            for (const assertions::Assertion& a : base) {
                assertions::Assertion copy = a;
                copy.name += "_" + std::to_string(i);
                if (copy.window > 0) copy.window += 0.01 * i;
                suite.push_back(copy);
            }
        double t0 = now_ms();
        auto serial = assertions::check_suite(trace, suite, false);
        double t1 = now_ms();
        auto par = assertions::check_suite(trace, suite, true);
        double t2 = now_ms();
        for (size_t i = 0; i < serial.size(); ++i)
            if (serial[i].verdict != par[i].verdict) {
                std::fprintf(stderr, "verdict mismatch in %s\n",
                             serial[i].name.c_str());
                return 1;
            }
        rows.push_back({"assertion suite (72 checks)", t1 - t0, t2 - t1});
    }

    // campaign trials: workers=1 vs all cores
    {
        corro::PropertyBinding pb{cf.automaton, cf.properties[0], cf.env,
                                  cf.bindings, cf.digest};
        corro::CampaignOptions serial_opts;
        serial_opts.workers = 1;
        corro::CampaignOptions par_opts;
#ifdef _OPENMP
        par_opts.workers = omp_get_max_threads();
#else
        par_opts.workers = 1;
#endif
        double t0 = now_ms();
        auto a = corro::run_campaign(pb, sc, serial_opts);
        double t1 = now_ms();
        auto b = corro::run_campaign(pb, sc, par_opts);
        double t2 = now_ms();
        if (a.status != b.status) {
            std::fprintf(stderr, "campaign status diverged\n");
            return 1;
        }
        rows.push_back({"campaign (18 trials)", t1 - t0, t2 - t1});
    }

    // bulk spatial evaluation over many views
    {
        sim::Trace trace = sim::run(sc, cf.automaton, cf.bindings);
        auto f = usl::parse_formula("re(E) ; sg(E) ; len >= 0");
        std::vector<traffic::Snapshot> snaps;
        for (size_t k = 0; k < trace.steps.size(); ++k)
            snaps.push_back(trace.snapshot_at(k));
        const int rounds = 40;
        std::vector<char> serial_out(snaps.size() * rounds);
        std::vector<char> par_out(snaps.size() * rounds);

        double t0 = now_ms();
        for (int r = 0; r < rounds; ++r)
            for (size_t k = 0; k < snaps.size(); ++k) {
                const traffic::Reservation* res = snaps[k].reservation_of("E");
                traffic::View v{0,
                                {res->interval.lo,
                                 std::min(res->interval.hi + 30.0, 100.0)},
                                "E"};
                serial_out[r * snaps.size() + k] =
                    usl::evaluate(snaps[k], v, *f);
            }
        double t1 = now_ms();
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (size_t i = 0; i < snaps.size() * rounds; ++i) {
            size_t k = i % snaps.size();
            const traffic::Reservation* res = snaps[k].reservation_of("E");
            traffic::View v{0,
                            {res->interval.lo,
                             std::min(res->interval.hi + 30.0, 100.0)},
                            "E"};
            par_out[i] = usl::evaluate(snaps[k], v, *f);
        }
        double t2 = now_ms();
        for (size_t i = 0; i < par_out.size(); ++i)
            if (serial_out[i] != par_out[i]) {
                std::fprintf(stderr, "bulk evaluation mismatch\n");
                return 1;
            }
        rows.push_back({"bulk chop evaluation", t1 - t0, t2 - t1});
    }

    print_rows(rows);
    return 0;
}
