#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lllsep/error.hpp"
#include "lllsep/rational.hpp"
#include "lllsep/sat_model.hpp"

namespace lllsep {

/// One conjunct X_variable = value of an atomic bad event.
struct Atom {
  Variable variable = 0;
  bool value = false;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// An atomic conjunction of variable assignments. Atoms are kept sorted by
/// variable.
class BadEvent {
 public:
  explicit BadEvent(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw InvalidArgument("bad event without atoms");
    std::sort(atoms_.begin(), atoms_.end());
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (atoms_[i].variable < 1)
        throw InvalidArgument("bad event atom on variable 0");
      if (i > 0 && atoms_[i].variable == atoms_[i - 1].variable)
        throw InvalidArgument("bad event repeats variable " +
                              std::to_string(atoms_[i].variable));
    }
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  std::optional<bool> value_of(Variable v) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), Atom{v, false},
                               [](const Atom& a, const Atom& b) {
                                 return a.variable < b.variable;
                               });
    if (it == atoms_.end() || it->variable != v) return std::nullopt;
    return it->value;
  }

  Variable max_variable() const { return atoms_.back().variable; }

  /// P(B) when each X_i is true with probability bias[i].
  BigRational probability(const std::vector<BigRational>& bias) const {
    BigRational p = 1;
    for (const auto& a : atoms_) {
      if (a.variable >= bias.size())
        throw InvalidArgument("no bias for variable " +
                              std::to_string(a.variable));
      p *= a.value ? bias[a.variable] : BigRational(1 - bias[a.variable]);
    }
    return p;
  }

  /// P(B) under uniform 1/2 probabilities: 2^{-|B|}.
  BigRational uniform_probability() const {
    return inverse_power_of_two(atoms_.size());
  }

  friend bool operator==(const BadEvent&, const BadEvent&) = default;

 private:
  std::vector<Atom> atoms_;
};

/// The falsifying assignment of a clause.
inline BadEvent event_from_clause(const Clause& clause) {
  std::vector<Atom> atoms;
  atoms.reserve(clause.size());
  for (const auto& lit : clause.literals)
    atoms.push_back({lit.variable, !lit.positive});
  return BadEvent(std::move(atoms));
}

inline std::vector<BadEvent> events_from_formula(const Formula& formula) {
  std::vector<BadEvent> events;
  events.reserve(formula.clause_count());
  for (const auto& clause : formula.clauses())
    events.push_back(event_from_clause(clause));
  return events;
}

/// (i, j) ~ B: B fixes variable i to a value other than j.
inline bool atom_disagrees(const Atom& z, const BadEvent& b) {
  auto v = b.value_of(z.variable);
  return v && *v != z.value;
}

struct Disagreement {
  bool disagree = false;
  std::vector<Variable> variables;  // witness: variables fixed differently
};

inline Disagreement disagree(const BadEvent& a, const BadEvent& b) {
  Disagreement out;
  const auto& x = a.atoms();
  const auto& y = b.atoms();
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i].variable < y[j].variable) {
      ++i;
    } else if (y[j].variable < x[i].variable) {
      ++j;
    } else {
      if (x[i].value != y[j].value) out.variables.push_back(x[i].variable);
      ++i;
      ++j;
    }
  }
  out.disagree = !out.variables.empty();
  return out;
}

inline bool share_variable(const BadEvent& a, const BadEvent& b) {
  const auto& x = a.atoms();
  const auto& y = b.atoms();
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i].variable == y[j].variable) return true;
    if (x[i].variable < y[j].variable)
      ++i;
    else
      ++j;
  }
  return false;
}

/// Finite simple graph on vertices 0..n-1.
class DepGraph {
 public:
  using Vertex = std::size_t;

  explicit DepGraph(std::size_t vertex_count = 0) : adj_(vertex_count) {}

  std::size_t vertex_count() const { return adj_.size(); }

  std::size_t edge_count() const {
    std::size_t twice = 0;
    for (const auto& n : adj_) twice += n.size();
    return twice / 2;
  }

  Vertex add_vertex() {
    adj_.emplace_back();
    return adj_.size() - 1;
  }

  void add_edge(Vertex u, Vertex v) {
    check(u);
    check(v);
    if (u == v) throw InvalidArgument("self-loop on vertex " + std::to_string(u));
    insert_sorted(adj_[u], v);
    insert_sorted(adj_[v], u);
  }

  bool has_edge(Vertex u, Vertex v) const {
    check(u);
    check(v);
    return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
  }

  const std::vector<Vertex>& neighbors(Vertex v) const {
    check(v);
    return adj_[v];
  }

  std::size_t degree(Vertex v) const { return neighbors(v).size(); }

  /// Edges (u, v) with u < v in lexicographic order.
  std::vector<std::pair<Vertex, Vertex>> edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    for (Vertex u = 0; u < adj_.size(); ++u)
      for (Vertex v : adj_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  bool is_independent(const std::vector<Vertex>& set) const {
    for (std::size_t a = 0; a < set.size(); ++a)
      for (std::size_t b = a + 1; b < set.size(); ++b)
        if (set[a] == set[b] || has_edge(set[a], set[b])) return false;
    return true;
  }

  friend bool operator==(const DepGraph&, const DepGraph&) = default;

 private:
  void check(Vertex v) const {
    if (v >= adj_.size())
      throw InvalidArgument("vertex " + std::to_string(v) + " out of range");
  }

  static void insert_sorted(std::vector<Vertex>& list, Vertex v) {
    auto it = std::lower_bound(list.begin(), list.end(), v);
    if (it == list.end() || *it != v) list.insert(it, v);
  }

  std::vector<std::vector<Vertex>> adj_;
};

/// Canonical lopsidependency graph: an edge iff the events disagree.
inline DepGraph lopsidependency_graph(const std::vector<BadEvent>& events) {
  DepGraph g(events.size());
  for (std::size_t a = 0; a < events.size(); ++a)
    for (std::size_t b = a + 1; b < events.size(); ++b)
      if (disagree(events[a], events[b]).disagree) g.add_edge(a, b);
  return g;
}

/// Canonical dependency graph: an edge iff the events share a variable.
inline DepGraph dependency_graph(const std::vector<BadEvent>& events) {
  DepGraph g(events.size());
  for (std::size_t a = 0; a < events.size(); ++a)
    for (std::size_t b = a + 1; b < events.size(); ++b)
      if (share_variable(events[a], events[b])) g.add_edge(a, b);
  return g;
}

struct InducedSubgraph {
  DepGraph graph;
  std::vector<DepGraph::Vertex> original;  // new vertex -> old vertex
};

inline InducedSubgraph induced_subgraph(
    const DepGraph& g, std::vector<DepGraph::Vertex> vertices) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()),
                 vertices.end());
  std::vector<std::size_t> index(g.vertex_count(), SIZE_MAX);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] >= g.vertex_count())
      throw InvalidArgument("vertex " + std::to_string(vertices[i]) +
                            " out of range");
    index[vertices[i]] = i;
  }
  DepGraph sub(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (auto w : g.neighbors(vertices[i]))
      if (index[w] != SIZE_MAX && i < index[w]) sub.add_edge(i, index[w]);
  return {std::move(sub), std::move(vertices)};
}

/// Components as sorted vertex lists, ordered by smallest vertex.
inline std::vector<std::vector<DepGraph::Vertex>> connected_components(
    const DepGraph& g) {
  std::vector<std::vector<DepGraph::Vertex>> out;
  std::vector<bool> seen(g.vertex_count(), false);
  for (DepGraph::Vertex s = 0; s < g.vertex_count(); ++s) {
    if (seen[s]) continue;
    std::vector<DepGraph::Vertex> comp{s};
    seen[s] = true;
    for (std::size_t head = 0; head < comp.size(); ++head)
      for (auto w : g.neighbors(comp[head]))
        if (!seen[w]) {
          seen[w] = true;
          comp.push_back(w);
        }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

inline const std::vector<DepGraph::Vertex>& neighborhood(const DepGraph& g,
                                                        DepGraph::Vertex v) {
  return g.neighbors(v);
}

inline std::size_t max_degree(const DepGraph& g) {
  std::size_t d = 0;
  for (DepGraph::Vertex v = 0; v < g.vertex_count(); ++v)
    d = std::max(d, g.degree(v));
  return d;
}

/// "v: n1 n2 ..." per vertex, preceded by "p graph <n> <e>".
inline std::string to_adjacency_text(const DepGraph& g) {
  std::ostringstream out;
  out << "p graph " << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (DepGraph::Vertex v = 0; v < g.vertex_count(); ++v) {
    out << v << ':';
    for (auto w : g.neighbors(v)) out << ' ' << w;
    out << '\n';
  }
  return out.str();
}

struct LopsidependencyOptions {
  std::size_t max_variables = 20;
  /// Largest |S| examined; 0 selects the default (every subset when there
  /// are at most 12 events, otherwise 3).
  std::size_t subset_cap = 0;
};

struct LopsidependencyWitness {
  std::size_t event = 0;
  std::vector<std::size_t> avoided;  // S: events conditioned to be false
};

struct LopsidependencyCheck {
  bool holds = true;
  std::optional<LopsidependencyWitness> witness;
  std::size_t conditions_checked = 0;
};

/// Exhaustively checks P(B | no event of S) <= P(B) for every event B and
/// every S drawn from the non-neighbors of B, under uniform assignments of
/// m variables. Probabilities are exact counts over all 2^m assignments.
inline LopsidependencyCheck verify_lopsidependency(
    const std::vector<BadEvent>& events, const DepGraph& graph,
    std::size_t variable_count, const LopsidependencyOptions& options = {}) {
  if (graph.vertex_count() != events.size())
    throw InvalidArgument("graph and event list sizes differ");
  if (variable_count > options.max_variables || variable_count > 30)
    throw GuardViolation("exhaustive enumeration over " +
                         std::to_string(variable_count) +
                         " variables exceeds the guard of " +
                         std::to_string(options.max_variables));
  for (const auto& e : events)
    if (e.max_variable() > variable_count)
      throw InvalidArgument("event references a variable above m");

  const std::size_t cap =
      options.subset_cap != 0 ? options.subset_cap
                              : (events.size() <= 12 ? events.size() : 3);
  const std::uint64_t total = std::uint64_t{1} << variable_count;
  const std::size_t words = static_cast<std::size_t>((total + 63) / 64);
  using Bits = std::vector<std::uint64_t>;

  // truth[e] has bit x set iff assignment x (bit v-1 = X_v) makes e true.
  std::vector<Bits> truth(events.size(), Bits(words, 0));
  for (std::size_t e = 0; e < events.size(); ++e)
    for (std::uint64_t x = 0; x < total; ++x) {
      bool holds = true;
      for (const auto& a : events[e].atoms())
        if ((((x >> (a.variable - 1)) & 1U) != 0) != a.value) {
          holds = false;
          break;
        }
      if (holds) truth[e][x / 64] |= std::uint64_t{1} << (x % 64);
    }
  Bits all(words, ~std::uint64_t{0});
  if (total % 64 != 0) all.back() = (std::uint64_t{1} << (total % 64)) - 1;

  auto count = [](const Bits& b) {
    std::uint64_t c = 0;
    for (auto w : b) c += static_cast<std::uint64_t>(std::popcount(w));
    return c;
  };

  LopsidependencyCheck result;
  for (std::size_t b = 0; b < events.size(); ++b) {
    std::vector<std::size_t> candidates;
    for (std::size_t a = 0; a < events.size(); ++a)
      if (a != b && !graph.has_edge(a, b)) candidates.push_back(a);
    const BigInt count_b(static_cast<unsigned long>(count(truth[b])));

    // Depth-first over subsets of candidates, carrying the avoid-set mask.
    std::vector<std::size_t> chosen;
    std::vector<Bits> stack{all};
    bool failed = false;
    auto visit = [&](auto&& self, std::size_t start) -> void {
      const Bits& avoid = stack.back();
      const std::uint64_t c_avoid = count(avoid);
      if (c_avoid > 0) {
        std::uint64_t c_both = 0;
        for (std::size_t w = 0; w < words; ++w)
          c_both += static_cast<std::uint64_t>(
              std::popcount(avoid[w] & truth[b][w]));
        ++result.conditions_checked;
        // P(B and avoid) / P(avoid) <= P(B)  <=>  c_both * 2^m <= c_b * c_avoid
        BigInt lhs = BigInt(static_cast<unsigned long>(c_both)) *
                     BigInt(static_cast<unsigned long>(total));
        BigInt rhs = count_b * BigInt(static_cast<unsigned long>(c_avoid));
        if (lhs > rhs) {
          result.holds = false;
          result.witness = LopsidependencyWitness{b, chosen};
          failed = true;
          return;
        }
      }
      if (chosen.size() >= cap) return;
      for (std::size_t i = start; i < candidates.size() && !failed; ++i) {
        Bits next = stack.back();
        for (std::size_t w = 0; w < words; ++w)
          next[w] &= ~truth[candidates[i]][w];
        stack.push_back(std::move(next));
        chosen.push_back(candidates[i]);
        self(self, i + 1);
        chosen.pop_back();
        stack.pop_back();
      }
    };
    visit(visit, 0);
    if (failed) return result;
  }
  return result;
}

}  // namespace lllsep
