#include "crosscheck/dbm.hpp"

#include <sstream>
#include <stdexcept>

namespace crosscheck::ta {

bool bound_less(const Bound& a, const Bound& b) {
    if (a.is_inf()) return false;
    if (b.is_inf()) return true;
    if (a.value != b.value) return a.value < b.value;
    return a.strict && !b.strict;
}

Bound bound_add(const Bound& a, const Bound& b) {
    if (a.is_inf() || b.is_inf()) return Bound::inf();
    return {a.value + b.value, a.strict || b.strict};
}

Dbm::Dbm(int dim) : dim_(dim), m_(dim * dim, Bound::inf()) {
    if (dim < 1) throw std::invalid_argument("dbm dimension must be >= 1");
    for (int i = 0; i < dim; ++i) cell(i, i) = Bound::le(0);
}

Dbm Dbm::zero(int dim) {
    Dbm z(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) z.cell(i, j) = Bound::le(0);
    return z;
}

Dbm Dbm::universe(int dim) {
    Dbm z(dim);
    // x_i >= 0 encoded as x_0 - x_i <= 0
    for (int j = 0; j < dim; ++j) z.cell(0, j) = Bound::le(0);
    return z;
}

bool Dbm::is_empty() const {
    for (int i = 0; i < dim_; ++i)
        if (bound_less(at(i, i), Bound::le(0))) return true;
    return false;
}

void Dbm::canonicalize() {
    for (int k = 0; k < dim_; ++k)
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) {
                Bound via = bound_add(at(i, k), at(k, j));
                if (bound_less(via, at(i, j))) cell(i, j) = via;
            }
}

void Dbm::up() {
    for (int i = 1; i < dim_; ++i) cell(i, 0) = Bound::inf();
    // Canonical form is preserved by removing upper bounds: any i->0 path
    // through k would need a finite k->0 bound, which up() also removed.
    canonicalize();
}

void Dbm::reset(const std::vector<int>& clocks) {
    for (int x : clocks) {
        if (x <= 0 || x >= dim_)
            throw std::invalid_argument("reset: bad clock index");
        for (int j = 0; j < dim_; ++j) {
            cell(x, j) = at(0, j);
            cell(j, x) = at(j, 0);
        }
        cell(x, x) = Bound::le(0);
    }
    canonicalize();
}

void Dbm::constrain(int i, int j, Bound b) {
    if (i < 0 || j < 0 || i >= dim_ || j >= dim_)
        throw std::invalid_argument("constrain: bad clock index");
    if (bound_less(b, at(i, j))) {
        cell(i, j) = b;
        canonicalize();
    }
}

bool Dbm::includes(const Dbm& other) const {
    if (other.dim_ != dim_) throw std::invalid_argument("dbm dimension mismatch");
    for (int i = 0; i < dim_ * dim_; ++i)
        if (bound_less(m_[i], other.m_[i])) return false;
    return true;
}

void Dbm::k_normalize(std::int32_t k) {
    bool changed = false;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
            if (i == j) continue;
            Bound& b = cell(i, j);
            if (b.is_inf()) continue;
            if (bound_less(Bound::le(k), b)) {
                b = Bound::inf();
                changed = true;
            } else if (bound_less(b, Bound::le(-k))) {
                b = Bound::lt(-k);
                changed = true;
            }
        }
    if (changed) canonicalize();
}

std::string Dbm::to_string(const std::vector<std::string>& clock_names) const {
    auto name = [&](int i) -> std::string {
        if (i == 0) return "0";
        if (i - 1 < static_cast<int>(clock_names.size())) return clock_names[i - 1];
        return "x" + std::to_string(i);
    };
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
            if (i == j || at(i, j).is_inf()) continue;
            if (i == 0 && at(i, j) == Bound::le(0)) continue;  // x >= 0 is implicit
            if (!first) os << " & ";
            first = false;
            if (i == 0)
                os << name(j) << (at(i, j).strict ? " > " : " >= ")
                   << -at(i, j).value;
            else if (j == 0)
                os << name(i) << (at(i, j).strict ? " < " : " <= ")
                   << at(i, j).value;
            else
                os << name(i) << "-" << name(j)
                   << (at(i, j).strict ? " < " : " <= ") << at(i, j).value;
        }
    if (first) os << "true";
    return os.str();
}

}  // namespace crosscheck::ta
