#include <doctest.h>

#include "crosscheck/geometry.hpp"

using namespace crosscheck;

TEST_CASE("merge_intervals fuses overlapping and touching pieces") {
    auto m = merge_intervals({{5, 8}, {0, 2}, {2, 3}, {7, 9}});
    REQUIRE(m.size() == 2);
    CHECK(m[0] == Interval{0, 3});
    CHECK(m[1] == Interval{5, 9});
}

TEST_CASE("merge_intervals drops degenerate pieces") {
    auto m = merge_intervals({{4, 4}, {1, 2}});
    REQUIRE(m.size() == 1);
    CHECK(m[0] == Interval{1, 2});
}

TEST_CASE("complement_within returns closed gaps") {
    auto free = complement_within({0, 50}, {{20, 30}});
    REQUIRE(free.size() == 2);
    CHECK(free[0] == Interval{0, 20});
    CHECK(free[1] == Interval{30, 50});
}

TEST_CASE("complement_within with touching blockers has no free space") {
    auto free = complement_within({0, 50}, {{0, 20}, {20, 50}});
    CHECK(free.empty());
}

TEST_CASE("complement_within ignores zero-width blockers") {
    auto free = complement_within({0, 10}, {{5, 5}});
    REQUIRE(free.size() == 1);
    CHECK(free[0] == Interval{0, 10});
}
