#include <doctest.h>

#include "crosscheck/dbm.hpp"
#include "oracles/generators.hpp"

using namespace crosscheck::ta;

namespace {

// random non-empty canonical zone over `dim-1` clocks
Dbm random_zone(oracle::Rng& rng, int dim) {
    for (;;) {
        Dbm z = Dbm::universe(dim);
        int n = oracle::pick(rng, 0, 6);
        for (int i = 0; i < n; ++i) {
            int a = oracle::pick(rng, 0, dim - 1);
            int b = oracle::pick(rng, 0, dim - 1);
            if (a == b) continue;
            z.constrain(a, b,
                        oracle::chance(rng, 0.5)
                            ? Bound::le(oracle::pick(rng, -6, 6))
                            : Bound::lt(oracle::pick(rng, -6, 6)));
        }
        if (!z.is_empty()) return z;
    }
}

}  // namespace

TEST_CASE("delay removes upper bounds from the origin zone") {
    Dbm z = Dbm::zero(3);  // x = y = 0
    z.up();
    // x - y = 0 both ways, lower bounds 0, no upper bounds
    CHECK(z.at(1, 2) == Bound::le(0));
    CHECK(z.at(2, 1) == Bound::le(0));
    CHECK(z.at(0, 1) == Bound::le(0));
    CHECK(z.at(1, 0).is_inf());
    CHECK(z.at(2, 0).is_inf());
}

TEST_CASE("contradicting constraints empty the zone") {
    Dbm z = Dbm::universe(2);  // x >= 0
    z.constrain(1, 0, Bound::lt(0));  // x < 0
    CHECK(z.is_empty());
}

TEST_CASE("equality constraint pins a clock") {
    Dbm z = Dbm::universe(2);
    z.constrain(1, 0, Bound::le(3));
    z.constrain(0, 1, Bound::le(-3));  // x >= 3
    CHECK(!z.is_empty());
    z.constrain(1, 0, Bound::lt(3));  // now x < 3
    CHECK(z.is_empty());
}

TEST_CASE("canonicalize is idempotent on random zones") {
    oracle::Rng rng(123);
    for (int i = 0; i < 300; ++i) {
        Dbm z = random_zone(rng, oracle::pick(rng, 2, 4));
        Dbm once = z;
        once.canonicalize();
        Dbm twice = once;
        twice.canonicalize();
        CHECK(once == twice);
    }
}

TEST_CASE("up is idempotent and intersect shrinks") {
    oracle::Rng rng(321);
    for (int i = 0; i < 200; ++i) {
        int dim = oracle::pick(rng, 2, 4);
        Dbm z = random_zone(rng, dim);
        Dbm u = z;
        u.up();
        Dbm uu = u;
        uu.up();
        CHECK(u == uu);
        CHECK(u.includes(z));  // delay only grows the zone

        Dbm c = z;
        c.constrain(oracle::pick(rng, 1, dim - 1), 0,
                    Bound::le(oracle::pick(rng, 0, 6)));
        if (!c.is_empty()) CHECK(z.includes(c));
    }
}

TEST_CASE("inclusion is a partial order on canonical zones") {
    oracle::Rng rng(777);
    for (int i = 0; i < 200; ++i) {
        int dim = oracle::pick(rng, 2, 3);
        Dbm a = random_zone(rng, dim);
        Dbm b = random_zone(rng, dim);
        CHECK(a.includes(a));
        if (a.includes(b) && b.includes(a)) CHECK(a == b);
        Dbm c = a;
        c.constrain(1, 0, Bound::le(2));
        if (!c.is_empty() && b.includes(a)) CHECK(b.includes(c));
    }
}

TEST_CASE("reset pins clocks to zero") {
    Dbm z = Dbm::universe(3);
    z.constrain(1, 0, Bound::le(5));
    z.constrain(0, 1, Bound::le(-2));  // x in [2, 5]
    z.reset({2});                       // y := 0
    CHECK(z.at(2, 0) == Bound::le(0));
    CHECK(z.at(0, 2) == Bound::le(0));
    CHECK(z.at(1, 0) == Bound::le(5));  // x untouched
    CHECK(z.at(1, 2) == Bound::le(5));  // x - y = x
}

TEST_CASE("k-normalization caps bounds and keeps the zone canonical") {
    Dbm z = Dbm::universe(2);
    z.constrain(1, 0, Bound::le(42));
    z.constrain(0, 1, Bound::le(-17));  // x in [17, 42], constants beyond k=5
    z.k_normalize(5);
    CHECK(z.at(1, 0).is_inf());
    CHECK(z.at(0, 1) == Bound::lt(-5));  // x > 5
    Dbm again = z;
    again.canonicalize();
    CHECK(again == z);
}
