#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lllsep/error.hpp"
#include "lllsep/rng.hpp"

namespace lllsep {

using Variable = std::uint32_t;

struct Literal {
  Variable variable = 0;
  bool positive = true;

  int to_dimacs() const {
    return positive ? static_cast<int>(variable) : -static_cast<int>(variable);
  }

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Clause {
  std::vector<Literal> literals;

  std::size_t size() const { return literals.size(); }

  bool contains(Variable v) const {
    return std::any_of(literals.begin(), literals.end(),
                       [v](const Literal& l) { return l.variable == v; });
  }

  friend bool operator==(const Clause&, const Clause&) = default;
};

/// Uniform-width CNF formula over variables 1..m.
class Formula {
 public:
  Formula(std::size_t width, std::size_t variable_count,
          std::vector<Clause> clauses)
      : width_(width),
        variable_count_(variable_count),
        clauses_(std::move(clauses)) {
    if (width_ < 2) throw InvalidArgument("formula width must be at least 2");
    for (std::size_t c = 0; c < clauses_.size(); ++c) {
      const auto& lits = clauses_[c].literals;
      if (lits.size() != width_)
        throw InvalidArgument("clause " + std::to_string(c) + " has " +
                              std::to_string(lits.size()) +
                              " literals, expected " + std::to_string(width_));
      for (std::size_t a = 0; a < lits.size(); ++a) {
        if (lits[a].variable < 1 || lits[a].variable > variable_count_)
          throw InvalidArgument("clause " + std::to_string(c) +
                                " references variable " +
                                std::to_string(lits[a].variable) +
                                " outside [1, " +
                                std::to_string(variable_count_) + "]");
        for (std::size_t b = a + 1; b < lits.size(); ++b)
          if (lits[a].variable == lits[b].variable)
            throw InvalidArgument("clause " + std::to_string(c) +
                                  " repeats variable " +
                                  std::to_string(lits[a].variable));
      }
    }
  }

  std::size_t width() const { return width_; }
  std::size_t variable_count() const { return variable_count_; }
  std::size_t clause_count() const { return clauses_.size(); }
  const std::vector<Clause>& clauses() const { return clauses_; }
  const Clause& clause(std::size_t i) const { return clauses_.at(i); }

  friend bool operator==(const Formula&, const Formula&) = default;

 private:
  std::size_t width_;
  std::size_t variable_count_;
  std::vector<Clause> clauses_;
};

struct OccurrenceCounts {
  std::size_t positive = 0;  // R0: clauses containing x_i
  std::size_t negative = 0;  // R1: clauses containing not x_i

  std::size_t total() const { return positive + negative; }
};

/// Per-variable occurrence counts, indexed by variable (1-based).
class OccurrenceProfile {
 public:
  explicit OccurrenceProfile(std::size_t variable_count)
      : counts_(variable_count + 1) {}

  const OccurrenceCounts& at(Variable v) const {
    if (v < 1 || v >= counts_.size())
      throw InvalidArgument("variable " + std::to_string(v) + " out of range");
    return counts_[v];
  }
  OccurrenceCounts& at(Variable v) {
    return const_cast<OccurrenceCounts&>(std::as_const(*this).at(v));
  }

  std::size_t variable_count() const { return counts_.size() - 1; }

  std::size_t max_positive() const {
    std::size_t m = 0;
    for (const auto& c : counts_) m = std::max(m, c.positive);
    return m;
  }
  std::size_t max_negative() const {
    std::size_t m = 0;
    for (const auto& c : counts_) m = std::max(m, c.negative);
    return m;
  }

 private:
  std::vector<OccurrenceCounts> counts_;
};

inline OccurrenceProfile occurrences(const Formula& formula) {
  OccurrenceProfile profile(formula.variable_count());
  for (const auto& clause : formula.clauses())
    for (const auto& lit : clause.literals) {
      auto& counts = profile.at(lit.variable);
      (lit.positive ? counts.positive : counts.negative) += 1;
    }
  return profile;
}

/// Provenance of the recursively expanded formula: which variable introduced
/// which, and the clause indices added when each variable was expanded.
struct ExpansionTree {
  struct Stage {
    Variable variable = 0;
    std::vector<std::size_t> positive_half;  // clauses containing x_i
    std::vector<std::size_t> negative_half;  // clauses containing not x_i
  };

  /// parent[v] is the variable whose expansion introduced v; 0 for the root
  /// and for unused slot 0.
  std::vector<Variable> parent;
  std::vector<Stage> stages;  // stages[i - 1] expands variable i

  const Stage& stage_of(Variable v) const {
    if (v < 1 || v > stages.size())
      throw InvalidArgument("variable " + std::to_string(v) +
                            " was not expanded");
    return stages[v - 1];
  }

  /// Variables introduced by the expansion of v, in clause order.
  std::vector<Variable> children(Variable v) const {
    std::vector<Variable> out;
    for (Variable c = 1; c < parent.size(); ++c)
      if (parent[c] == v) out.push_back(c);
    return out;
  }
};

struct ExtremalFormula {
  Formula formula;
  ExpansionTree tree;
};

inline constexpr std::size_t kDefaultClauseGuard = std::size_t{1} << 22;

/// Builds the formula obtained from the empty formula by expanding variables
/// 1..stages in order. Expanding i appends L-1 clauses with x_i and L-1 with
/// not x_i; the other k-1 literals of each new clause are fresh positive
/// variables, numbered in clause order with the positive half first.
inline ExtremalFormula build_extremal_formula(
    std::size_t k, std::size_t L, std::size_t stages,
    std::size_t clause_guard = kDefaultClauseGuard) {
  if (k < 2) throw InvalidArgument("clause width k must be at least 2");
  if (L < 2)
    throw InvalidArgument("occurrence bound L must be at least 2 (L = 1 adds "
                          "no clauses)");
  const std::size_t per_stage = 2 * (L - 1);
  if (stages != 0 && per_stage > clause_guard / stages)
    throw GuardViolation("construction would create " +
                         std::to_string(stages) + " x " +
                         std::to_string(per_stage) +
                         " clauses, above the guard of " +
                         std::to_string(clause_guard));

  std::vector<Clause> clauses;
  clauses.reserve(stages * per_stage);
  ExpansionTree tree;
  tree.parent.assign(1, 0);
  Variable next_var = 1;
  if (stages > 0) {
    tree.parent.push_back(0);  // variable 1 is the root
    next_var = 2;
  }

  for (std::size_t i = 1; i <= stages; ++i) {
    const auto expanded = static_cast<Variable>(i);
    ExpansionTree::Stage stage;
    stage.variable = expanded;
    for (bool polarity : {true, false}) {
      for (std::size_t c = 0; c + 1 < L; ++c) {
        Clause clause;
        clause.literals.push_back({expanded, polarity});
        for (std::size_t f = 0; f + 1 < k; ++f) {
          clause.literals.push_back({next_var, true});
          tree.parent.push_back(expanded);
          ++next_var;
        }
        (polarity ? stage.positive_half : stage.negative_half)
            .push_back(clauses.size());
        clauses.push_back(std::move(clause));
      }
    }
    tree.stages.push_back(std::move(stage));
  }
  const std::size_t variable_count = next_var - 1;
  return {Formula(k, variable_count, std::move(clauses)), std::move(tree)};
}

/// Checks R0 <= L and R1 <= L-1 for every variable, and that each recorded
/// expansion stage contributes exactly L-1 clauses per polarity.
inline bool validate_occurrences(const Formula& formula,
                                 const ExpansionTree& tree, std::size_t L) {
  if (L < 1) return false;
  const auto profile = occurrences(formula);
  for (Variable v = 1; v <= formula.variable_count(); ++v) {
    const auto& c = profile.at(v);
    if (c.positive > L || c.negative > L - 1) return false;
  }
  for (const auto& stage : tree.stages) {
    if (stage.positive_half.size() != L - 1 ||
        stage.negative_half.size() != L - 1)
      return false;
    for (bool polarity : {true, false}) {
      const auto& half = polarity ? stage.positive_half : stage.negative_half;
      for (auto idx : half) {
        if (idx >= formula.clause_count()) return false;
        const auto& lits = formula.clause(idx).literals;
        if (std::find(lits.begin(), lits.end(),
                      Literal{stage.variable, polarity}) == lits.end())
          return false;
      }
    }
  }
  return true;
}

/// A clause (x_1 or ... or x_k) plus, for each i, L clauses containing
/// not x_i padded with fresh positive variables. Every literal occurs at
/// most L times, and the events hit by the central clause's atoms are
/// pairwise disjoint in the variables they disagree on.
inline Formula build_star_formula(std::size_t k, std::size_t L) {
  if (k < 2) throw InvalidArgument("clause width k must be at least 2");
  if (L < 1) throw InvalidArgument("L must be at least 1");
  std::vector<Clause> clauses;
  Clause center;
  for (Variable v = 1; v <= k; ++v) center.literals.push_back({v, true});
  clauses.push_back(std::move(center));
  auto next_var = static_cast<Variable>(k + 1);
  for (Variable v = 1; v <= k; ++v)
    for (std::size_t c = 0; c < L; ++c) {
      Clause clause;
      clause.literals.push_back({v, false});
      for (std::size_t f = 0; f + 1 < k; ++f)
        clause.literals.push_back({next_var++, true});
      clauses.push_back(std::move(clause));
    }
  return Formula(k, next_var - 1, std::move(clauses));
}

/// Random k-CNF in which every literal occurs at most `literal_bound` times.
/// Clauses pick distinct variables uniformly among literals with spare
/// capacity. Throws when the requested clause count cannot be placed.
inline Formula random_bounded_formula(std::size_t k, std::size_t literal_bound,
                                      std::size_t variable_count,
                                      std::size_t clause_count,
                                      std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("clause width k must be at least 2");
  if (k > variable_count)
    throw InvalidArgument("need at least k variables");
  if (clause_count * k > 2 * variable_count * literal_bound)
    throw InvalidArgument("occurrence bound too small for the clause count");
  RandomStream rng(SplitMix64(seed).next());
  for (int attempt = 0; attempt < 64; ++attempt) {
    // capacity[2v] for x_v, capacity[2v+1] for not x_v
    std::vector<std::size_t> capacity(2 * (variable_count + 1), literal_bound);
    std::vector<Clause> clauses;
    bool stuck = false;
    for (std::size_t c = 0; c < clause_count && !stuck; ++c) {
      Clause clause;
      for (std::size_t slot = 0; slot < k; ++slot) {
        std::vector<Literal> options;
        for (Variable v = 1; v <= variable_count; ++v) {
          if (clause.contains(v)) continue;
          if (capacity[2 * v] > 0) options.push_back({v, true});
          if (capacity[2 * v + 1] > 0) options.push_back({v, false});
        }
        if (options.empty()) {
          stuck = true;
          break;
        }
        Literal pick = options[rng.uniform_below(options.size())];
        --capacity[2 * pick.variable + (pick.positive ? 0 : 1)];
        clause.literals.push_back(pick);
      }
      if (!stuck) clauses.push_back(std::move(clause));
    }
    if (!stuck) return Formula(k, variable_count, std::move(clauses));
  }
  throw InvalidArgument("could not place the requested clauses within the "
                        "occurrence bound");
}

}  // namespace lllsep
