#pragma once

// DIMACS CNF interchange. Export writes "p cnf <m> <n>" followed by one
// zero-terminated clause per line; import preserves clause and literal order.

#include <cstdlib>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lllsep/error.hpp"
#include "lllsep/sat_model.hpp"

namespace lllsep {

inline void dimacs_export(const Formula& formula, std::ostream& out) {
  out << "p cnf " << formula.variable_count() << ' ' << formula.clause_count()
      << '\n';
  for (const auto& clause : formula.clauses()) {
    for (const auto& lit : clause.literals) out << lit.to_dimacs() << ' ';
    out << "0\n";
  }
}

inline std::string dimacs_export(const Formula& formula) {
  std::ostringstream out;
  dimacs_export(formula, out);
  return out.str();
}

/// Parses DIMACS CNF. When `width` is given every clause must have exactly
/// that many literals; otherwise the width of the first clause is used and
/// must be shared by all clauses. An empty formula needs an explicit width.
inline Formula dimacs_import(std::istream& in,
                             std::optional<std::size_t> width = std::nullopt) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> declared_vars, declared_clauses;
  std::vector<Clause> clauses;
  Clause current;
  std::size_t current_line = 0;

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string tok;
    if (!(tokens >> tok)) continue;
    if (tok == "c" || tok[0] == 'c') continue;
    if (tok == "%") break;  // SATLIB trailer
    if (tok == "p") {
      if (declared_vars) throw ParseError(line_no, "duplicate problem line");
      std::string fmt;
      long long vars = -1, ncl = -1;
      if (!(tokens >> fmt >> vars >> ncl) || fmt != "cnf" || vars < 0 ||
          ncl < 0)
        throw ParseError(line_no, "malformed problem line '" + line + "'");
      if (std::string extra; tokens >> extra)
        throw ParseError(line_no, "trailing tokens on problem line");
      declared_vars = static_cast<std::size_t>(vars);
      declared_clauses = static_cast<std::size_t>(ncl);
      continue;
    }
    if (!declared_vars)
      throw ParseError(line_no, "clause before the problem line");
    do {
      char* end = nullptr;
      long value = std::strtol(tok.c_str(), &end, 10);
      if (end == tok.c_str() || *end != '\0')
        throw ParseError(line_no, "malformed literal '" + tok + "'");
      if (value == 0) {
        if (current.literals.empty())
          throw ParseError(line_no, "empty clause");
        if (width && current.size() != *width)
          throw ParseError(line_no, "clause width " +
                                        std::to_string(current.size()) +
                                        " does not match required width " +
                                        std::to_string(*width));
        if (!width) width = current.size();
        clauses.push_back(std::move(current));
        current = Clause{};
        continue;
      }
      std::size_t var = static_cast<std::size_t>(value < 0 ? -value : value);
      if (var > *declared_vars)
        throw ParseError(line_no, "variable " + std::to_string(var) +
                                      " exceeds declared count " +
                                      std::to_string(*declared_vars));
      if (current.contains(static_cast<Variable>(var)))
        throw ParseError(line_no, "variable " + std::to_string(var) +
                                      " repeated within a clause");
      current_line = line_no;
      current.literals.push_back({static_cast<Variable>(var), value > 0});
    } while (tokens >> tok);
  }
  if (!current.literals.empty())
    throw ParseError(current_line, "clause not terminated by 0");
  if (!declared_vars) throw ParseError(line_no, "missing problem line");
  if (clauses.size() != *declared_clauses)
    throw ParseError(line_no, "declared " + std::to_string(*declared_clauses) +
                                  " clauses, found " +
                                  std::to_string(clauses.size()));
  if (!width)
    throw ParseError(line_no, "cannot infer the width of an empty formula");
  try {
    return Formula(*width, *declared_vars, std::move(clauses));
  } catch (const InvalidArgument& e) {
    throw ParseError(line_no, e.what());
  }
}

inline Formula dimacs_import(const std::string& text,
                             std::optional<std::size_t> width = std::nullopt) {
  std::istringstream in(text);
  return dimacs_import(in, width);
}

}  // namespace lllsep
