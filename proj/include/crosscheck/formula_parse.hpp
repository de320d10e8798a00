#pragma once

#include <stdexcept>
#include <string>

#include "crosscheck/formula.hpp"

namespace crosscheck::usl {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int column)
        : std::runtime_error(msg + " at line " + std::to_string(line) +
                             ", column " + std::to_string(column)),
          line(line),
          column(column) {}
    int line;
    int column;
};

// Parses the concrete syntax
//   free | re(ID) | aut(ID)=0|1 | sign(stop|give_way) | crossing
//   | len <cmp> NUMBER | len <cmp> size(ID) | !f | f & g | f | g | f ; g | (f)
// where ';' is the chop connector (precedence ! > & > | > ; and chop is
// right-associative). Names found in `lib` expand inline with their
// arguments substituted.
FormulaPtr parse_formula(const std::string& text,
                         const FormulaLibrary& lib = FormulaLibrary::with_defaults());

// One definition per line: `name := formula` or `name(X) := formula`,
// with `#` comments and blank lines. Later definitions may use earlier ones.
// Starts from the stock library so sg remains available.
FormulaLibrary parse_library(const std::string& text);

}  // namespace crosscheck::usl
