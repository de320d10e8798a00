#include "crosscheck/formula.hpp"

#include <cmath>
#include <sstream>

namespace crosscheck::usl {

const char* to_string(Cmp c) {
    switch (c) {
        case Cmp::Lt: return "<";
        case Cmp::Le: return "<=";
        case Cmp::Eq: return "=";
        case Cmp::Ge: return ">=";
        case Cmp::Gt: return ">";
    }
    return "?";
}

bool cmp_holds(double lhs, Cmp c, double rhs, double eps) {
    switch (c) {
        case Cmp::Lt: return lhs < rhs - eps;
        case Cmp::Le: return lhs <= rhs + eps;
        case Cmp::Eq: return std::fabs(lhs - rhs) <= eps;
        case Cmp::Ge: return lhs >= rhs - eps;
        case Cmp::Gt: return lhs > rhs + eps;
    }
    return false;
}

namespace {
template <typename Node>
FormulaPtr wrap(Node n) {
    return std::make_shared<const Formula>(Formula{std::move(n)});
}
}  // namespace

FormulaPtr make_free() { return wrap(Free{}); }
FormulaPtr make_re(std::string agent) { return wrap(Re{std::move(agent)}); }
FormulaPtr make_aut(std::string agent, bool value) {
    return wrap(Aut{std::move(agent), value});
}
FormulaPtr make_sign(traffic::SignKind kind) { return wrap(SignAhead{kind}); }
FormulaPtr make_crossing() { return wrap(CrossingAhead{}); }
FormulaPtr make_len(Cmp cmp, double literal) {
    return wrap(Len{cmp, LenValue{literal, {}}});
}
FormulaPtr make_len_size(Cmp cmp, std::string agent) {
    return wrap(Len{cmp, LenValue{0.0, std::move(agent)}});
}
FormulaPtr make_not(FormulaPtr sub) { return wrap(Not{std::move(sub)}); }
FormulaPtr make_and(FormulaPtr lhs, FormulaPtr rhs) {
    return wrap(And{std::move(lhs), std::move(rhs)});
}
FormulaPtr make_or(FormulaPtr lhs, FormulaPtr rhs) {
    return wrap(Or{std::move(lhs), std::move(rhs)});
}
FormulaPtr make_chop(FormulaPtr lhs, FormulaPtr rhs) {
    return wrap(Chop{std::move(lhs), std::move(rhs)});
}

bool equal(const Formula& a, const Formula& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const T& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, Free> || std::is_same_v<T, CrossingAhead>) {
                return true;
            } else if constexpr (std::is_same_v<T, Re>) {
                return x.agent == y.agent;
            } else if constexpr (std::is_same_v<T, Aut>) {
                return x.agent == y.agent && x.value == y.value;
            } else if constexpr (std::is_same_v<T, SignAhead>) {
                return x.kind == y.kind;
            } else if constexpr (std::is_same_v<T, Len>) {
                return x.cmp == y.cmp && x.value == y.value;
            } else if constexpr (std::is_same_v<T, Not>) {
                return equal(*x.sub, *y.sub);
            } else {
                return equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
            }
        },
        a.node);
}

namespace {

// Precedence: atoms(4) < not(3) < and(2) < or(1) < chop(0) -- higher binds tighter.
int precedence(const Formula& f) {
    return std::visit(
        [](const auto& x) -> int {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Chop>) return 0;
            else if constexpr (std::is_same_v<T, Or>) return 1;
            else if constexpr (std::is_same_v<T, And>) return 2;
            else if constexpr (std::is_same_v<T, Not>) return 3;
            else return 4;
        },
        f.node);
}

std::string format_number(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

void print_rec(const Formula& f, int parent_prec, std::string& out) {
    int prec = precedence(f);
    bool parens = prec < parent_prec;
    if (parens) out += '(';
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Free>) {
                out += "free";
            } else if constexpr (std::is_same_v<T, Re>) {
                out += "re(" + x.agent + ")";
            } else if constexpr (std::is_same_v<T, Aut>) {
                out += "aut(" + x.agent + ")=" + (x.value ? "1" : "0");
            } else if constexpr (std::is_same_v<T, SignAhead>) {
                out += std::string("sign(") + traffic::to_string(x.kind) + ")";
            } else if constexpr (std::is_same_v<T, CrossingAhead>) {
                out += "crossing";
            } else if constexpr (std::is_same_v<T, Len>) {
                out += std::string("len ") + to_string(x.cmp) + " ";
                if (x.value.is_size())
                    out += "size(" + x.value.size_of + ")";
                else
                    out += format_number(x.value.literal);
            } else if constexpr (std::is_same_v<T, Not>) {
                out += '!';
                print_rec(*x.sub, prec + 1, out);
            } else if constexpr (std::is_same_v<T, And>) {
                print_rec(*x.lhs, prec, out);
                out += " & ";
                print_rec(*x.rhs, prec + 1, out);
            } else if constexpr (std::is_same_v<T, Or>) {
                print_rec(*x.lhs, prec, out);
                out += " | ";
                print_rec(*x.rhs, prec + 1, out);
            } else if constexpr (std::is_same_v<T, Chop>) {
                // Right-associative: left side needs parens at equal precedence.
                print_rec(*x.lhs, prec + 1, out);
                out += " ; ";
                print_rec(*x.rhs, prec, out);
            }
        },
        f.node);
    if (parens) out += ')';
}

}  // namespace

std::string print(const Formula& f) {
    std::string out;
    print_rec(f, 0, out);
    return out;
}

FormulaPtr substitute_agent(const FormulaPtr& f, const std::string& from,
                            const std::string& to) {
    return std::visit(
        [&](const auto& x) -> FormulaPtr {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Re>) {
                return x.agent == from ? make_re(to) : f;
            } else if constexpr (std::is_same_v<T, Aut>) {
                return x.agent == from ? make_aut(to, x.value) : f;
            } else if constexpr (std::is_same_v<T, Len>) {
                if (x.value.is_size() && x.value.size_of == from)
                    return make_len_size(x.cmp, to);
                return f;
            } else if constexpr (std::is_same_v<T, Not>) {
                FormulaPtr s = substitute_agent(x.sub, from, to);
                return s == x.sub ? f : make_not(s);
            } else if constexpr (std::is_same_v<T, And>) {
                FormulaPtr l = substitute_agent(x.lhs, from, to);
                FormulaPtr r = substitute_agent(x.rhs, from, to);
                return (l == x.lhs && r == x.rhs) ? f : make_and(l, r);
            } else if constexpr (std::is_same_v<T, Or>) {
                FormulaPtr l = substitute_agent(x.lhs, from, to);
                FormulaPtr r = substitute_agent(x.rhs, from, to);
                return (l == x.lhs && r == x.rhs) ? f : make_or(l, r);
            } else if constexpr (std::is_same_v<T, Chop>) {
                FormulaPtr l = substitute_agent(x.lhs, from, to);
                FormulaPtr r = substitute_agent(x.rhs, from, to);
                return (l == x.lhs && r == x.rhs) ? f : make_chop(l, r);
            } else {
                return f;
            }
        },
        f->node);
}

void FormulaLibrary::define(const std::string& name,
                            std::vector<std::string> params, FormulaPtr body) {
    if (defs_.count(name))
        throw std::invalid_argument("duplicate formula definition: " + name);
    defs_[name] = {std::move(params), std::move(body)};
}

const std::pair<std::vector<std::string>, FormulaPtr>*
FormulaLibrary::lookup(const std::string& name) const {
    auto it = defs_.find(name);
    return it == defs_.end() ? nullptr : &it->second;
}

FormulaLibrary FormulaLibrary::with_defaults() {
    FormulaLibrary lib;
    lib.define("sg", {"X"},
               make_and(make_free(), make_len_size(Cmp::Ge, "X")));
    return lib;
}

}  // namespace crosscheck::usl
