#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lllsep/error.hpp"
#include "lllsep/events_graph.hpp"
#include "lllsep/rational.hpp"
#include "lllsep/rng.hpp"
#include "lllsep/sat_model.hpp"

namespace lllsep {

/// Total assignment of variables 1..m.
class Assignment {
 public:
  explicit Assignment(std::size_t variable_count)
      : values_(variable_count + 1, 0) {}

  std::size_t variable_count() const { return values_.size() - 1; }

  bool operator[](Variable v) const { return values_.at(v) != 0; }
  void set(Variable v, bool value) { values_.at(v) = value ? 1 : 0; }

  bool satisfies(const BadEvent& event) const {
    for (const auto& a : event.atoms())
      if ((*this)[a.variable] != a.value) return false;
    return true;
  }

  bool satisfies(const Clause& clause) const {
    for (const auto& lit : clause.literals)
      if ((*this)[lit.variable] == lit.positive) return true;
    return false;
  }

  bool satisfies(const Formula& formula) const {
    for (const auto& c : formula.clauses())
      if (!satisfies(c)) return false;
    return true;
  }

  std::string to_string() const {
    std::string out;
    for (Variable v = 1; v <= variable_count(); ++v) {
      if (!out.empty()) out += ' ';
      out += (*this)[v] ? std::to_string(v) : "-" + std::to_string(v);
    }
    return out;
  }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<unsigned char> values_;
};

enum class SelectionRule { first_index, uniform_random, lowest_probability };

inline const char* to_string(SelectionRule rule) {
  switch (rule) {
    case SelectionRule::first_index: return "first";
    case SelectionRule::uniform_random: return "random";
    case SelectionRule::lowest_probability: return "lowest-probability";
  }
  return "?";
}

inline SelectionRule parse_selection_rule(const std::string& name) {
  if (name == "first") return SelectionRule::first_index;
  if (name == "random") return SelectionRule::uniform_random;
  if (name == "lowest-probability") return SelectionRule::lowest_probability;
  throw InvalidArgument("unknown selection rule '" + name +
                        "' (expected first, random or lowest-probability)");
}

/// Independent generator streams derived from one run seed. SplitMix64
/// outputs 1, 2 and 3 seed the initial-draw, resample and selection streams.
struct RandomStreams {
  RandomStream initial;
  RandomStream resample;
  RandomStream selection;
};

inline RandomStreams derive_streams(std::uint64_t seed) {
  SplitMix64 sm(seed);
  std::uint64_t a = sm.next();
  std::uint64_t b = sm.next();
  std::uint64_t c = sm.next();
  return {RandomStream(a), RandomStream(b), RandomStream(c)};
}

/// Index of a currently true bad event chosen by `rule`, or nothing when the
/// assignment avoids all of them. `probability` is consulted only by
/// lowest_probability (ties go to the smaller index).
inline std::optional<std::size_t> find_true_bad_event(
    const Assignment& assignment, const std::vector<BadEvent>& events,
    SelectionRule rule, RandomStream& rng,
    const std::vector<BigRational>& probability = {}) {
  switch (rule) {
    case SelectionRule::first_index:
      for (std::size_t i = 0; i < events.size(); ++i)
        if (assignment.satisfies(events[i])) return i;
      return std::nullopt;
    case SelectionRule::uniform_random: {
      std::vector<std::size_t> truth;
      for (std::size_t i = 0; i < events.size(); ++i)
        if (assignment.satisfies(events[i])) truth.push_back(i);
      if (truth.empty()) return std::nullopt;
      return truth[rng.uniform_below(truth.size())];
    }
    case SelectionRule::lowest_probability: {
      if (probability.size() != events.size())
        throw InvalidArgument("lowest-probability rule needs event probabilities");
      std::optional<std::size_t> best;
      for (std::size_t i = 0; i < events.size(); ++i)
        if (assignment.satisfies(events[i]) &&
            (!best || probability[i] < probability[*best]))
          best = i;
      return best;
    }
  }
  return std::nullopt;
}

struct RunStats {
  std::uint64_t total_resamples = 0;
  std::vector<std::uint64_t> per_event;
  bool terminated = false;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 0;
  SelectionRule rule = SelectionRule::first_index;
  std::vector<std::size_t> trace;  // resampled event per step, when recorded
};

struct MtOptions {
  SelectionRule rule = SelectionRule::first_index;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 1000000;
  bool record_trace = false;
};

struct MtResult {
  Assignment assignment;
  RunStats stats;
};

/// The resampling algorithm: draw every variable from its bias, then while
/// some bad event holds, pick one by the selection rule and redraw exactly
/// its variables. `bias[v]` is P(X_v = true); an empty vector means 1/2.
inline MtResult run_mt(const std::vector<BadEvent>& events,
                       std::size_t variable_count,
                       std::vector<BigRational> bias = {},
                       const MtOptions& options = {}) {
  if (bias.empty()) bias.assign(variable_count + 1, make_rational(1, 2));
  if (bias.size() != variable_count + 1)
    throw InvalidArgument("bias vector must have one entry per variable");
  for (Variable v = 1; v <= variable_count; ++v)
    if (bias[v] < 0 || bias[v] > 1)
      throw DomainError("bias of variable " + std::to_string(v) +
                        " outside [0, 1]");
  for (const auto& e : events)
    if (e.max_variable() > variable_count)
      throw InvalidArgument("event references a variable above m");

  std::vector<BigRational> probability;
  if (options.rule == SelectionRule::lowest_probability)
    for (const auto& e : events) probability.push_back(e.probability(bias));

  auto streams = derive_streams(options.seed);
  MtResult result{Assignment(variable_count), RunStats{}};
  RunStats& stats = result.stats;
  stats.per_event.assign(events.size(), 0);
  stats.seed = options.seed;
  stats.max_steps = options.max_steps;
  stats.rule = options.rule;

  for (Variable v = 1; v <= variable_count; ++v)
    result.assignment.set(v, streams.initial.bernoulli(bias[v]));

  for (;;) {
    auto chosen = find_true_bad_event(result.assignment, events, options.rule,
                                      streams.selection, probability);
    if (!chosen) {
      stats.terminated = true;
      break;
    }
    if (stats.total_resamples >= options.max_steps) break;
    for (const auto& a : events[*chosen].atoms())
      result.assignment.set(a.variable,
                            streams.resample.bernoulli(bias[a.variable]));
    ++stats.total_resamples;
    ++stats.per_event[*chosen];
    if (options.record_trace) stats.trace.push_back(*chosen);
  }
  return result;
}

inline MtResult run_mt(const Formula& formula, const MtOptions& options = {}) {
  return run_mt(events_from_formula(formula), formula.variable_count(), {},
                options);
}

}  // namespace lllsep
