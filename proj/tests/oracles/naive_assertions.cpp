#include "oracles/naive_assertions.hpp"

namespace oracle {

using namespace crosscheck;
using assertions::Assertion;
using assertions::AssertionResult;
using assertions::AssertVerdict;
using assertions::Kind;

namespace {

bool cond_at(const Assertion& a, const sim::Trace& t, int k) {
    return pred::eval_on_trace(*a.condition, t, static_cast<std::size_t>(k));
}

double pos_at(const sim::Trace& t, int k) {
    return t.steps[k].find(t.header.ego)->pos;
}

}  // namespace

AssertionResult naive_check(const sim::Trace& t, const Assertion& a) {
    AssertionResult res;
    res.name = a.name;
    const int n = static_cast<int>(t.steps.size());

    if (a.kind == Kind::Invariant) {
        for (int k = 0; k < n; ++k)
            if (!cond_at(a, t, k)) res.failures.push_back({-1, k, "violated"});
        res.verdict = res.failures.empty() ? AssertVerdict::Pass
                                           : AssertVerdict::Fail;
        return res;
    }

    std::vector<bool> trig(n);
    for (int k = 0; k < n; ++k)
        trig[k] = pred::eval_on_trace(*a.trigger, t, k);
    for (int k = 0; k < n; ++k)
        if (trig[k] && (a.all_edges || k == 0 || !trig[k - 1]))
            res.reference_points.push_back(k);

    if (res.reference_points.empty()) {
        res.verdict = AssertVerdict::Vacuous;
        return res;
    }

    for (int ref : res.reference_points) {
        for (int k = 0; k < n; ++k) {
            bool in_window = false;
            switch (a.kind) {
                case Kind::Execution:
                    in_window = (k == ref);
                    break;
                case Kind::PreCondition:
                    if (k >= ref) break;
                    if (a.flavor == assertions::Flavor::Temporal)
                        in_window = t.steps[k].time >=
                                    t.steps[ref].time - a.window - 1e-9;
                    else
                        in_window = pos_at(t, ref) - pos_at(t, k) <=
                                    a.window + 1e-9;
                    break;
                case Kind::PostCondition:
                    if (k <= ref) break;
                    if (a.flavor == assertions::Flavor::Temporal)
                        in_window = t.steps[k].time <=
                                    t.steps[ref].time + a.window + 1e-9;
                    else
                        in_window = pos_at(t, k) - pos_at(t, ref) <=
                                    a.window + 1e-9;
                    break;
                default:
                    break;
            }
            if (in_window && !cond_at(a, t, k))
                res.failures.push_back({ref, k, "violated"});
        }
    }
    res.verdict = res.failures.empty() ? AssertVerdict::Pass : AssertVerdict::Fail;
    return res;
}

}  // namespace oracle
