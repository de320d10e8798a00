#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace crosscheck::ta {

// Upper bound on a clock difference: value plus strictness, or infinity.
struct Bound {
    std::int32_t value = 0;
    bool strict = false;

    static Bound inf() { return {kInf, true}; }
    static Bound le(std::int32_t v) { return {v, false}; }
    static Bound lt(std::int32_t v) { return {v, true}; }

    bool is_inf() const { return value == kInf; }
    bool operator==(const Bound&) const = default;

    static constexpr std::int32_t kInf = INT32_MAX;
};

// a strictly tighter than b
bool bound_less(const Bound& a, const Bound& b);
Bound bound_add(const Bound& a, const Bound& b);

// Difference bound matrix over clocks 1..n with reference clock 0.
// Entry (i, j) bounds x_i - x_j. All mutating operations leave the matrix
// in canonical (all-pairs tightest) form.
class Dbm {
public:
    explicit Dbm(int dim);

    static Dbm zero(int dim);      // all clocks equal 0
    static Dbm universe(int dim);  // all clocks >= 0

    int dim() const { return dim_; }
    const Bound& at(int i, int j) const { return m_[i * dim_ + j]; }

    bool is_empty() const;

    void canonicalize();

    // Delay: remove upper bounds against the reference clock.
    void up();

    // Set the listed clocks to zero.
    void reset(const std::vector<int>& clocks);

    // Conjoin x_i - x_j <= / < b and re-canonicalize.
    void constrain(int i, int j, Bound b);

    // Subset test; both sides must be canonical and non-empty.
    bool includes(const Dbm& other) const;

    // Uniform max-constant extrapolation: bounds above k loosen to infinity,
    // bounds below -k loosen to (-k, <). Keeps the zone graph finite.
    void k_normalize(std::int32_t k);

    bool operator==(const Dbm& o) const = default;

    std::string to_string(const std::vector<std::string>& clock_names) const;

private:
    Bound& cell(int i, int j) { return m_[i * dim_ + j]; }

    int dim_;
    std::vector<Bound> m_;
};

}  // namespace crosscheck::ta
