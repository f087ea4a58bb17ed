#pragma once

// Exact independence polynomial
//   Q(G, S, p) = sum over independent T with S subset of T of
//                (-1)^{|T|-|S|} prod_{i in T} p_i
// and Shearer-criterion verdicts.
//
// The engine evaluates Q(G[W], {}, p) by the deletion recursion
//   Q(W) = Q(W - v) - p_v Q(W - v - N(v)),
// factoring over connected components and memoizing on the vertex mask W.

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lllsep/error.hpp"
#include "lllsep/events_graph.hpp"
#include "lllsep/rational.hpp"

namespace lllsep {

using ProbabilityVector = std::vector<BigRational>;

inline constexpr std::size_t kDefaultVertexGuard = 40;
inline constexpr std::size_t kMaskCapacity = 64;

using VertexMask = std::uint64_t;

inline VertexMask mask_of(const std::vector<DepGraph::Vertex>& vertices) {
  VertexMask m = 0;
  for (auto v : vertices) m |= VertexMask{1} << v;
  return m;
}

inline std::vector<DepGraph::Vertex> vertices_of(VertexMask m) {
  std::vector<DepGraph::Vertex> out;
  while (m != 0) {
    out.push_back(static_cast<DepGraph::Vertex>(std::countr_zero(m)));
    m &= m - 1;
  }
  return out;
}

/// Memoized evaluator for one (graph, p) pair. Not shared between threads;
/// construct one per invocation.
class IndependencePolynomialEngine {
 public:
  IndependencePolynomialEngine(const DepGraph& g, const ProbabilityVector& p,
                               std::size_t vertex_guard = kDefaultVertexGuard)
      : p_(p) {
    const std::size_t n = g.vertex_count();
    if (n > vertex_guard || n > kMaskCapacity)
      throw GuardViolation("graph has " + std::to_string(n) +
                           " vertices, above the guard of " +
                           std::to_string(std::min(vertex_guard, kMaskCapacity)));
    if (p.size() != n)
      throw InvalidArgument("probability vector has " +
                            std::to_string(p.size()) + " entries for " +
                            std::to_string(n) + " vertices");
    neighbors_.resize(n, 0);
    for (std::size_t v = 0; v < n; ++v) neighbors_[v] = mask_of(g.neighbors(v));
    full_ = n == kMaskCapacity ? ~VertexMask{0} : (VertexMask{1} << n) - 1;
  }

  VertexMask all_vertices() const { return full_; }
  VertexMask neighbors(std::size_t v) const { return neighbors_[v]; }

  /// Q(G[mask], {}, p).
  BigRational evaluate(VertexMask mask) {
    if (mask == 0) return BigRational(1);
    if (auto it = memo_.find(mask); it != memo_.end()) return it->second;

    BigRational value;
    VertexMask comp = component_of(mask);
    if (comp != mask) {
      value = evaluate(comp) * evaluate(mask & ~comp);
    } else if (std::popcount(mask) == 1) {
      value = 1 - p_[static_cast<std::size_t>(std::countr_zero(mask))];
    } else {
      std::size_t pivot = pick_pivot(mask);
      VertexMask without = mask & ~(VertexMask{1} << pivot);
      value = evaluate(without) -
              p_[pivot] * evaluate(without & ~neighbors_[pivot]);
    }
    memo_.emplace(mask, value);
    return value;
  }

  /// Q(G, S, p) for an arbitrary vertex set S; 0 when S is not independent.
  BigRational evaluate_with_base(VertexMask base) {
    BigRational weight = 1;
    VertexMask removed = base;
    for (auto v : vertices_of(base)) {
      if ((neighbors_[v] & base) != 0) return BigRational(0);
      weight *= p_[v];
      removed |= neighbors_[v];
    }
    return weight * evaluate(full_ & ~removed);
  }

  std::size_t memo_size() const { return memo_.size(); }

 private:
  VertexMask component_of(VertexMask mask) const {
    VertexMask comp = mask & (~mask + 1);  // lowest vertex
    VertexMask frontier = comp;
    while (frontier != 0) {
      VertexMask next = 0;
      for (VertexMask f = frontier; f != 0; f &= f - 1)
        next |= neighbors_[static_cast<std::size_t>(std::countr_zero(f))];
      next &= mask & ~comp;
      comp |= next;
      frontier = next;
    }
    return comp;
  }

  std::size_t pick_pivot(VertexMask mask) const {
    std::size_t best = static_cast<std::size_t>(std::countr_zero(mask));
    int best_degree = -1;
    for (VertexMask m = mask; m != 0; m &= m - 1) {
      auto v = static_cast<std::size_t>(std::countr_zero(m));
      int d = std::popcount(neighbors_[v] & mask);
      if (d > best_degree) {
        best_degree = d;
        best = v;
      }
    }
    return best;
  }

  const ProbabilityVector& p_;
  std::vector<VertexMask> neighbors_;
  VertexMask full_ = 0;
  std::unordered_map<VertexMask, BigRational> memo_;
};

inline BigRational independence_polynomial(
    const DepGraph& g, const std::vector<DepGraph::Vertex>& base,
    const ProbabilityVector& p, std::size_t vertex_guard = kDefaultVertexGuard) {
  IndependencePolynomialEngine engine(g, p, vertex_guard);
  for (auto v : base)
    if (v >= g.vertex_count())
      throw InvalidArgument("vertex " + std::to_string(v) + " out of range");
  return engine.evaluate_with_base(mask_of(base));
}

inline BigRational independence_polynomial(
    const DepGraph& g, const ProbabilityVector& p,
    std::size_t vertex_guard = kDefaultVertexGuard) {
  return independence_polynomial(g, {}, p, vertex_guard);
}

inline ProbabilityVector restrict_probabilities(
    const ProbabilityVector& p, const std::vector<DepGraph::Vertex>& original) {
  ProbabilityVector out;
  out.reserve(original.size());
  for (auto v : original) out.push_back(p.at(v));
  return out;
}

/// Q(G, {}, p) as the product of Q over the connected components.
inline BigRational component_factorization(
    const DepGraph& g, const ProbabilityVector& p,
    std::size_t vertex_guard = kDefaultVertexGuard) {
  if (p.size() != g.vertex_count())
    throw InvalidArgument("probability vector size mismatch");
  BigRational product = 1;
  for (const auto& comp : connected_components(g)) {
    auto sub = induced_subgraph(g, comp);
    product *= independence_polynomial(
        sub.graph, restrict_probabilities(p, sub.original), vertex_guard);
  }
  return product;
}

/// Q(G, {}, p) expanded over the independent subsets U of X:
///   sum_U Q(G[V - X - N(U)], {}, p) * prod_{i in U} (-p_i).
inline BigRational expansion_identity(
    const DepGraph& g, const std::vector<DepGraph::Vertex>& x,
    const ProbabilityVector& p, std::size_t vertex_guard = kDefaultVertexGuard) {
  if (x.size() > 24)
    throw GuardViolation("expansion set larger than 24 vertices");
  IndependencePolynomialEngine engine(g, p, vertex_guard);
  for (auto v : x)
    if (v >= g.vertex_count())
      throw InvalidArgument("vertex " + std::to_string(v) + " out of range");
  const VertexMask x_mask = mask_of(x);
  const std::vector<DepGraph::Vertex> xs = vertices_of(x_mask);
  BigRational total = 0;
  const std::uint64_t subsets = std::uint64_t{1} << xs.size();
  for (std::uint64_t s = 0; s < subsets; ++s) {
    VertexMask u = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if ((s >> i) & 1U) u |= VertexMask{1} << xs[i];
    bool independent = true;
    VertexMask closed = 0;
    BigRational weight = 1;
    for (auto v : vertices_of(u)) {
      if ((engine.neighbors(v) & u) != 0) {
        independent = false;
        break;
      }
      closed |= engine.neighbors(v);
      weight *= -p[v];
    }
    if (!independent) continue;
    total += weight * engine.evaluate(engine.all_vertices() & ~x_mask & ~closed);
  }
  return total;
}

enum class ShearerStatus { satisfied, violated };

struct ShearerVerdict {
  ShearerStatus status = ShearerStatus::satisfied;
  std::optional<std::vector<DepGraph::Vertex>> witness;  // independent S
  std::optional<BigRational> witness_value;               // Q(G, S, p) <= 0
  std::size_t sets_checked = 0;
};

struct ShearerOptions {
  std::size_t vertex_guard = kDefaultVertexGuard;
  std::size_t max_independent_sets = std::size_t{1} << 24;
};

/// Satisfied iff Q(G, S, p) > 0 for every independent S (including the
/// empty set). Independent sets are visited in lexicographic order of their
/// sorted vertex lists, so the reported witness is the first failing set.
inline ShearerVerdict shearer_check(const DepGraph& g, const ProbabilityVector& p,
                                    const ShearerOptions& options = {}) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] <= 0 || p[i] >= 1)
      throw DomainError("probability of vertex " + std::to_string(i) + " is " +
                        p[i].get_str() + ", outside the open interval (0, 1)");
  IndependencePolynomialEngine engine(g, p, options.vertex_guard);
  const std::size_t n = g.vertex_count();

  ShearerVerdict verdict;
  std::vector<DepGraph::Vertex> current;
  // Q(G, S) = prod_{S} p_i * Q(G - S - N(S)); `blocked` is S plus N(S).
  auto visit = [&](auto&& self, std::size_t start, VertexMask blocked,
                   const BigRational& weight) -> bool {
    if (++verdict.sets_checked > options.max_independent_sets)
      throw GuardViolation("more than " +
                           std::to_string(options.max_independent_sets) +
                           " independent sets");
    BigRational q = weight * engine.evaluate(engine.all_vertices() & ~blocked);
    if (q <= 0) {
      verdict.status = ShearerStatus::violated;
      verdict.witness = current;
      verdict.witness_value = q;
      return true;
    }
    for (std::size_t v = start; v < n; ++v) {
      if ((blocked >> v) & 1U) continue;
      current.push_back(v);
      bool stop = self(self, v + 1,
                       blocked | (VertexMask{1} << v) | engine.neighbors(v),
                       weight * p[v]);
      current.pop_back();
      if (stop) return true;
    }
    return false;
  };
  visit(visit, 0, 0, BigRational(1));
  return verdict;
}

}  // namespace lllsep
