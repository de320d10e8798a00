#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "crosscheck/traffic.hpp"

namespace crosscheck::usl {

enum class Cmp { Lt, Le, Eq, Ge, Gt };

const char* to_string(Cmp c);
bool cmp_holds(double lhs, Cmp c, double rhs, double eps = 1e-9);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Length operand: a literal in meters or the size of a named agent.
struct LenValue {
    double literal = 0.0;
    std::string size_of;  // non-empty: resolve agent size at evaluation time

    bool is_size() const { return !size_of.empty(); }
    bool operator==(const LenValue&) const = default;
};

struct Free {};
struct Re { std::string agent; };
struct Aut { std::string agent; bool value = true; };
struct SignAhead { traffic::SignKind kind = traffic::SignKind::Stop; };
struct CrossingAhead {};
struct Len { Cmp cmp = Cmp::Ge; LenValue value; };
struct Not { FormulaPtr sub; };
struct And { FormulaPtr lhs, rhs; };
struct Or { FormulaPtr lhs, rhs; };
struct Chop { FormulaPtr lhs, rhs; };

struct Formula {
    std::variant<Free, Re, Aut, SignAhead, CrossingAhead, Len, Not, And, Or, Chop> node;
};

FormulaPtr make_free();
FormulaPtr make_re(std::string agent);
FormulaPtr make_aut(std::string agent, bool value);
FormulaPtr make_sign(traffic::SignKind kind);
FormulaPtr make_crossing();
FormulaPtr make_len(Cmp cmp, double literal);
FormulaPtr make_len_size(Cmp cmp, std::string agent);
FormulaPtr make_not(FormulaPtr sub);
FormulaPtr make_and(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr make_or(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr make_chop(FormulaPtr lhs, FormulaPtr rhs);

bool equal(const Formula& a, const Formula& b);

// Concrete syntax with minimal parentheses; parse(print(f)) == f.
std::string print(const Formula& f);

// Replace every agent reference equal to `from` with `to` (re, aut, size).
FormulaPtr substitute_agent(const FormulaPtr& f, const std::string& from,
                            const std::string& to);

// Named abbreviations, e.g. sg(X) := free & len >= size(X). Definitions may
// reference earlier ones; recursion is rejected at load time.
class FormulaLibrary {
public:
    // Registers name(params...) := body. Throws on duplicates.
    void define(const std::string& name, std::vector<std::string> params,
                FormulaPtr body);
    const std::pair<std::vector<std::string>, FormulaPtr>*
    lookup(const std::string& name) const;

    // Library with the stock safe-gap definition sg(X).
    static FormulaLibrary with_defaults();

private:
    std::map<std::string, std::pair<std::vector<std::string>, FormulaPtr>> defs_;
};

}  // namespace crosscheck::usl
