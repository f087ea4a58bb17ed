#pragma once

// The recursive graph families H_j and H'_j, their independence-polynomial
// recurrence, the fixed-point iteration on a_j = r_j / s_{j-1}^{k-1}, the
// threshold curve l(t) with its certified maximum, and the embedding of H_j
// into the lopsidependency graph of the expanded formula.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lllsep/error.hpp"
#include "lllsep/events_graph.hpp"
#include "lllsep/interval.hpp"
#include "lllsep/rational.hpp"
#include "lllsep/sat_model.hpp"

namespace lllsep {

// ---------------------------------------------------------------------------
// Graph families

/// Vertex layout of one copy of H_j (or H'_j) inside a larger graph.
struct HLayout {
  std::vector<DepGraph::Vertex> left;
  std::vector<DepGraph::Vertex> right;
  /// attached[q] holds the k-1 child copies hanging off root vertex q, where
  /// q enumerates `left` then `right`.
  std::vector<std::vector<HLayout>> attached;

  bool empty() const { return left.empty() && right.empty(); }
};

struct HGraph {
  DepGraph graph;
  HLayout layout;
  std::size_t j = 0;
  std::size_t k = 0;
  std::size_t L = 0;
  bool prime = false;

  const std::vector<DepGraph::Vertex>& root_left() const { return layout.left; }
  const std::vector<DepGraph::Vertex>& root_right() const {
    return layout.right;
  }
};

inline constexpr std::size_t kDefaultHVertexGuard = std::size_t{1} << 16;

namespace detail {

inline std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a)
    return std::numeric_limits<std::size_t>::max();
  return a * b;
}

inline std::size_t saturating_add(std::size_t a, std::size_t b) {
  if (b > std::numeric_limits<std::size_t>::max() - a)
    return std::numeric_limits<std::size_t>::max();
  return a + b;
}

inline void check_family_parameters(std::size_t k, std::size_t L) {
  if (k < 2) throw InvalidArgument("k must be at least 2");
  if (L < 2) throw InvalidArgument("L must be at least 2");
}

inline HLayout append_h(DepGraph& g, std::size_t j, std::size_t k,
                        std::size_t L) {
  HLayout layout;
  if (j == 0) return layout;
  for (std::size_t i = 0; i + 1 < L; ++i) layout.left.push_back(g.add_vertex());
  for (std::size_t i = 0; i + 1 < L; ++i)
    layout.right.push_back(g.add_vertex());
  for (auto u : layout.left)
    for (auto v : layout.right) g.add_edge(u, v);

  std::vector<DepGraph::Vertex> root = layout.left;
  root.insert(root.end(), layout.right.begin(), layout.right.end());
  for (auto v : root) {
    std::vector<HLayout> copies;
    for (std::size_t c = 0; c + 1 < k; ++c) {
      HLayout child = append_h(g, j - 1, k, L);
      for (auto w : child.right) g.add_edge(v, w);
      copies.push_back(std::move(child));
    }
    layout.attached.push_back(std::move(copies));
  }
  return layout;
}

}  // namespace detail

/// |H_j|, saturating at SIZE_MAX.
inline std::size_t h_vertex_count(std::size_t j, std::size_t k, std::size_t L) {
  std::size_t n = 0;
  for (std::size_t t = 0; t < j; ++t) {
    std::size_t attached = detail::saturating_mul(
        detail::saturating_mul(2 * (L - 1), k - 1), n);
    n = detail::saturating_add(2 * (L - 1), attached);
  }
  return n;
}

/// |H'_j|, saturating at SIZE_MAX.
inline std::size_t hprime_vertex_count(std::size_t j, std::size_t k,
                                       std::size_t L) {
  if (j == 0) return 0;
  return detail::saturating_add(
      1, detail::saturating_mul(k - 1, h_vertex_count(j - 1, k, L)));
}

/// H_0 is the null graph; H_{j+1} is a K_{L-1,L-1} root in which every root
/// vertex is joined to the right root half of each of its own k-1 copies of
/// H_j.
inline HGraph build_H(std::size_t j, std::size_t k, std::size_t L,
                      std::size_t vertex_guard = kDefaultHVertexGuard) {
  detail::check_family_parameters(k, L);
  const std::size_t n = h_vertex_count(j, k, L);
  if (n > vertex_guard)
    throw GuardViolation("H_" + std::to_string(j) + " would have " +
                         (n == SIZE_MAX ? std::string("too many")
                                        : std::to_string(n)) +
                         " vertices, above the guard of " +
                         std::to_string(vertex_guard));
  HGraph h;
  h.layout = detail::append_h(h.graph, j, k, L);
  h.j = j;
  h.k = k;
  h.L = L;
  return h;
}

/// H'_0 is null; H'_{j+1} is a single root vertex joined to the right root
/// halves of k-1 copies of H_j. The root is reported as `root_left`.
inline HGraph build_Hprime(std::size_t j, std::size_t k, std::size_t L,
                           std::size_t vertex_guard = kDefaultHVertexGuard) {
  detail::check_family_parameters(k, L);
  const std::size_t n = hprime_vertex_count(j, k, L);
  if (n > vertex_guard)
    throw GuardViolation("H'_" + std::to_string(j) + " would have " +
                         std::to_string(n) + " vertices, above the guard of " +
                         std::to_string(vertex_guard));
  HGraph h;
  h.j = j;
  h.k = k;
  h.L = L;
  h.prime = true;
  if (j == 0) return h;
  auto v = h.graph.add_vertex();
  h.layout.left.push_back(v);
  std::vector<HLayout> copies;
  for (std::size_t c = 0; c + 1 < k; ++c) {
    HLayout child = detail::append_h(h.graph, j - 1, k, L);
    for (auto w : child.right) h.graph.add_edge(v, w);
    copies.push_back(std::move(child));
  }
  h.layout.attached.push_back(std::move(copies));
  return h;
}

// ---------------------------------------------------------------------------
// Exact recurrence

/// s_t = Q(H_t, {}, p) and r_t = Q(H'_t, {}, p) at p = 2^{-k}, for
/// t = -1..j (s) and t = 0..j (r).
struct RecurrenceState {
  std::size_t j = 0;
  std::size_t k = 0;
  std::size_t L = 0;
  BigRational p;
  std::vector<BigRational> s_values;  // s_values[t + 1] = s_t
  std::vector<BigRational> r_values;  // r_values[t] = r_t

  const BigRational& s(long t) const {
    if (t < -1 || t > static_cast<long>(j))
      throw InvalidArgument("s index out of range");
    return s_values[static_cast<std::size_t>(t + 1)];
  }
  const BigRational& r(long t) const {
    if (t < 0 || t > static_cast<long>(j))
      throw InvalidArgument("r index out of range");
    return r_values[static_cast<std::size_t>(t)];
  }
};

struct RecurrenceExponents {
  unsigned long e1;  // (k-1)(L-1)
  unsigned long e2;  // (k-1)^2 (L-1)
  unsigned long e3;  // (k-1)(2L-2)
};

inline RecurrenceExponents recurrence_exponents(std::size_t k, std::size_t L) {
  const unsigned long km = k - 1, lm = L - 1;
  constexpr auto max = std::numeric_limits<unsigned long>::max();
  if (km != 0 && (lm > max / km || km * lm > max / km || km * lm > max / 2))
    throw DomainError("recurrence exponents overflow");
  return {km * lm, km * km * lm, 2 * km * lm};
}

inline std::size_t bit_size(const BigRational& q) {
  return mpz_sizeinbase(q.get_num_mpz_t(), 2) +
         mpz_sizeinbase(q.get_den_mpz_t(), 2);
}

inline constexpr std::size_t kDefaultRecurrenceBitGuard = std::size_t{1} << 28;

/// r_t = s_{t-1}^{k-1} - p r_{t-1}^{(k-1)(L-1)} s_{t-2}^{(k-1)^2(L-1)}
/// s_t = 2 r_t^{L-1} s_{t-1}^{(k-1)(L-1)} - s_{t-1}^{(k-1)(2L-2)}
/// with s_{-1} = s_0 = r_0 = 1.
inline RecurrenceState recurrence_sr(
    std::size_t j, std::size_t k, std::size_t L,
    std::size_t bit_guard = kDefaultRecurrenceBitGuard) {
  detail::check_family_parameters(k, L);
  const auto e = recurrence_exponents(k, L);
  RecurrenceState st;
  st.j = j;
  st.k = k;
  st.L = L;
  st.p = inverse_power_of_two(k);
  st.s_values = {BigRational(1), BigRational(1)};
  st.r_values = {BigRational(1)};
  for (std::size_t t = 1; t <= j; ++t) {
    const BigRational& s1 = st.s_values[t];      // s_{t-1}
    const BigRational& s2 = st.s_values[t - 1];  // s_{t-2}
    const BigRational& r1 = st.r_values[t - 1];  // r_{t-1}
    // Powers scale bit sizes linearly; refuse before computing them.
    const double projected =
        std::max({static_cast<double>(bit_size(s1)) * static_cast<double>(e.e3),
                  static_cast<double>(bit_size(r1)) * static_cast<double>(e.e1) +
                      static_cast<double>(bit_size(s2)) *
                          static_cast<double>(e.e2)});
    if (projected > static_cast<double>(bit_guard))
      throw GuardViolation("recurrence values at step " + std::to_string(t) +
                           " would exceed " + std::to_string(bit_guard) +
                           " bits");
    BigRational r = pow(s1, k - 1) - st.p * pow(r1, e.e1) * pow(s2, e.e2);
    BigRational s = 2 * pow(r, L - 1) * pow(s1, e.e1) - pow(s1, e.e3);
    if (bit_size(r) > bit_guard || bit_size(s) > bit_guard)
      throw GuardViolation("recurrence values at step " + std::to_string(t) +
                           " exceed " + std::to_string(bit_guard) + " bits");
    st.r_values.push_back(std::move(r));
    st.s_values.push_back(std::move(s));
  }
  return st;
}

struct ABTerm {
  BigRational a;  // r_t / s_{t-1}^{k-1}
  BigRational b;  // s_t / s_{t-1}^{(k-1)(2L-2)}
};

/// Exact a_t and b_t for t = 0..state.j, stopping early at the first t with
/// s_{t-1} = 0.
inline std::vector<ABTerm> a_b_sequence(const RecurrenceState& state) {
  const auto e = recurrence_exponents(state.k, state.L);
  std::vector<ABTerm> out;
  for (std::size_t t = 0; t <= state.j; ++t) {
    const BigRational& prev = state.s(static_cast<long>(t) - 1);
    if (prev == 0) break;
    ABTerm term;
    term.a = state.r(static_cast<long>(t)) / pow(prev, state.k - 1);
    term.b = state.s(static_cast<long>(t)) / pow(prev, e.e3);
    out.push_back(std::move(term));
  }
  return out;
}

inline ABTerm a_b_sequence(std::size_t j, std::size_t k, std::size_t L) {
  auto terms = a_b_sequence(recurrence_sr(j, k, L));
  if (terms.size() != j + 1)
    throw DomainError("a_j undefined: s_{j-1} vanishes before step " +
                      std::to_string(j));
  return terms.back();
}

// ---------------------------------------------------------------------------
// Fixed-point iteration

/// g(a) = 1 - p / (2 - a^{-(L-1)})^{k-1}, exactly, for rational a with
/// a^{L-1} > 1/2.
inline BigRational g_function(const BigRational& a, std::size_t k,
                              std::size_t L, const BigRational& p) {
  if (a <= 0) throw DomainError("g requires a > 0");
  BigRational base = 2 - 1 / pow(a, L - 1);
  if (base <= 0) throw DomainError("g requires a > 2^{-1/(L-1)}");
  return 1 - p / pow(base, k - 1);
}

/// Interval extension of g. g is increasing in a, and the enclosure is
/// computed from outward-rounded operations.
inline Interval g_function(const Interval& a, std::size_t k, std::size_t L,
                           const BigRational& p) {
  const auto prec = a.precision();
  if (!a.certainly_positive()) throw DomainError("g requires a > 0");
  Interval base =
      Interval::exact(2, prec) - Interval::exact(1, prec) / pow(a, L - 1);
  if (!base.certainly_positive())
    throw DomainError("g requires a > 2^{-1/(L-1)}");
  return Interval::exact(1, prec) -
         Interval::from_rational(p, prec) / pow(base, k - 1);
}

/// 2^{-2/(2L-2)}: a_j at or below this value forces b_j <= 0.
inline Interval violation_threshold(std::size_t L, mpfr_prec_t precision) {
  return root(Interval::from_rational(make_rational(1, 2), precision), L - 1);
}

enum class FixedPointOutcome { violated_at_step, converged, inconclusive };

inline const char* to_string(FixedPointOutcome o) {
  switch (o) {
    case FixedPointOutcome::violated_at_step: return "ViolatedAtStep";
    case FixedPointOutcome::converged: return "ConvergedTo";
    case FixedPointOutcome::inconclusive: return "Inconclusive";
  }
  return "?";
}

struct FixedPointOptions {
  std::size_t max_iterations = 100000;
  long tolerance_log2 = -80;
  mpfr_prec_t precision = kDefaultPrecision;
};

struct FixedPointReport {
  std::size_t k = 0;
  std::size_t L = 0;
  FixedPointOptions options;
  Interval threshold;
  std::vector<Interval> trajectory;  // a_0 .. a_J
  FixedPointOutcome outcome = FixedPointOutcome::inconclusive;
  std::size_t step = 0;  // step of violation, or of convergence
  std::optional<Interval> limit;
  std::string note;
};

/// Iterates a_j = g(a_{j-1}) from a_0 = 1 with p = 2^{-k}. Reports a
/// violation at the first j with a_j certainly at or below 2^{-1/(L-1)}, and
/// convergence once |a_j - a_{j-1}| <= 2^{tolerance_log2} with a_j certainly
/// above the threshold. Anything not decidable from the enclosures is
/// Inconclusive.
inline FixedPointReport fixed_point_iteration(std::size_t k, std::size_t L,
                                              const FixedPointOptions& options =
                                                  {}) {
  detail::check_family_parameters(k, L);
  if (options.precision < 64)
    throw InvalidArgument("precision must be at least 64 bits");
  const auto prec = options.precision;
  const BigRational p = inverse_power_of_two(k);

  FixedPointReport report;
  report.k = k;
  report.L = L;
  report.options = options;
  report.threshold = violation_threshold(L, prec);
  BigFloat tolerance(prec);
  mpfr_set_ui_2exp(tolerance.get(), 1, options.tolerance_log2, MPFR_RNDD);

  Interval a = Interval::exact(1, prec);
  report.trajectory.push_back(a);
  for (std::size_t j = 1; j <= options.max_iterations; ++j) {
    Interval next = g_function(a, k, L, p);
    report.trajectory.push_back(next);
    if (next.certainly_less_equal(report.threshold)) {
      report.outcome = FixedPointOutcome::violated_at_step;
      report.step = j;
      report.note = "b_j <= 0, so s_j <= 0 or s_{j-1} <= 0";
      return report;
    }
    if (!report.threshold.certainly_less(next)) {
      report.outcome = FixedPointOutcome::inconclusive;
      report.step = j;
      report.note = "a_j enclosure overlaps the threshold";
      return report;
    }
    Interval diff = next - a;
    BigFloat magnitude(prec);
    mpfr_abs(magnitude.get(), diff.lo().get(), MPFR_RNDU);
    BigFloat hi_abs(prec);
    mpfr_abs(hi_abs.get(), diff.hi().get(), MPFR_RNDU);
    if (magnitude < hi_abs) magnitude = hi_abs;
    if (magnitude <= tolerance) {
      report.outcome = FixedPointOutcome::converged;
      report.step = j;
      report.limit = next;
      report.note =
          "fixed point above the threshold; a necessary condition for "
          "Shearer on every H_j, not a proof of it";
      return report;
    }
    a = std::move(next);
  }
  report.outcome = FixedPointOutcome::inconclusive;
  report.step = options.max_iterations;
  report.note = "iteration limit reached";
  return report;
}

// ---------------------------------------------------------------------------
// Threshold curve l(t) = 1 - ln(2 - t) / ln(1 - 2^{-k} t^{1-k})

/// Lower end 2^{-k/(k-1)} of the domain of l, as an enclosure.
inline Interval threshold_domain_lower(std::size_t k, mpfr_prec_t precision) {
  return root(Interval::from_rational(inverse_power_of_two(k), precision),
              k - 1);
}

namespace detail {

/// -ln(1 - 2^{-k} t^{1-k}) as a positive enclosure.
inline Interval negated_log_denominator(const Interval& t, std::size_t k) {
  const auto prec = t.precision();
  Interval w = Interval::from_rational(inverse_power_of_two(k), prec) /
               pow(t, k - 1);
  Interval inner = Interval::exact(1, prec) - w;
  if (!inner.certainly_positive())
    throw DomainError("t is not certainly above 2^{-k/(k-1)}");
  return -log(inner);
}

}  // namespace detail

inline Interval threshold_ell(const Interval& t, std::size_t k) {
  if (k < 2) throw InvalidArgument("k must be at least 2");
  const auto prec = t.precision();
  if (!t.certainly_less(Interval::exact(2, prec)))
    throw DomainError("t is not certainly below 2");
  if (!threshold_domain_lower(k, prec).certainly_less(t))
    throw DomainError("t is not certainly above 2^{-k/(k-1)}");
  Interval num = log(Interval::exact(2, prec) - t);
  Interval den = detail::negated_log_denominator(t, k);
  return Interval::exact(1, prec) + num / den;
}

inline Interval threshold_ell(const BigRational& t, std::size_t k,
                              mpfr_prec_t precision = kDefaultPrecision) {
  return threshold_ell(Interval::from_rational(t, precision), k);
}

struct ShearerBoundOptions {
  mpfr_prec_t precision = kDefaultPrecision;
  std::size_t grid = 64;
  /// Repeat at doubled precision and grid density and require agreement.
  bool verify_doubling = true;
};

struct ShearerBoundReport {
  std::size_t k = 0;
  BigInt value;            // floor of max l(t)
  BigFloat argmax;         // approximate maximizer
  BigFloat max_lower;      // certified lower bound on max l
  BigFloat max_upper;      // certified upper bound on max l
  mpfr_prec_t precision = 0;
  std::size_t grid = 0;
  std::size_t boxes = 0;
  bool doubling_verified = false;
};

namespace detail {

struct ThresholdBox {
  BigFloat a;
  BigFloat b;
};

/// Upper bound of l over [a, b] subset of (2^{-k/(k-1)}, 1]: the numerator
/// ln(2 - t) and the magnitude of the denominator both decrease in t, so
/// l <= 1 + ln(2 - a) / |den(b)|.
inline BigFloat ell_upper_on_box(const BigFloat& a, const BigFloat& b,
                                 std::size_t k) {
  const auto prec = a.precision();
  Interval num = log(Interval::exact(2, prec) - Interval::point(a));
  Interval den = negated_log_denominator(Interval::point(b), k);
  Interval ell = Interval::exact(1, prec) + num / den;
  return ell.hi();
}

inline std::optional<Interval> ell_at(const BigFloat& t, std::size_t k) {
  try {
    return threshold_ell(Interval::point(t), k);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

inline BigFloat golden_section_argmax(const BigFloat& lo, const BigFloat& hi,
                                      std::size_t k) {
  const auto prec = lo.precision();
  BigFloat a = lo, b = hi, c(prec), d(prec), tmp(prec);
  BigFloat ratio(prec);
  mpfr_sqrt_ui(ratio.get(), 5, MPFR_RNDN);
  mpfr_sub_ui(ratio.get(), ratio.get(), 1, MPFR_RNDN);
  mpfr_div_2ui(ratio.get(), ratio.get(), 1, MPFR_RNDN);
  auto value = [&](const BigFloat& t) {
    auto v = ell_at(t, k);
    return v ? v->mid() : BigFloat(prec);
  };
  for (int it = 0; it < static_cast<int>(prec) * 3 / 2; ++it) {
    mpfr_sub(tmp.get(), b.get(), a.get(), MPFR_RNDN);
    mpfr_mul(tmp.get(), tmp.get(), ratio.get(), MPFR_RNDN);
    mpfr_sub(c.get(), b.get(), tmp.get(), MPFR_RNDN);
    mpfr_add(d.get(), a.get(), tmp.get(), MPFR_RNDN);
    if (value(d) < value(c))
      b = d;
    else
      a = c;
  }
  mpfr_add(tmp.get(), a.get(), b.get(), MPFR_RNDN);
  mpfr_div_2ui(tmp.get(), tmp.get(), 1, MPFR_RNDN);
  return tmp;
}

/// Certified floor of max l(t) by grid seeding, golden-section refinement and
/// interval branch-and-bound over (2^{-k/(k-1)}, 1]. On [1, 2) l <= 1 = l(1).
inline ShearerBoundReport certify_shearer_bound(std::size_t k,
                                                mpfr_prec_t prec,
                                                std::size_t grid) {
  ShearerBoundReport report;
  report.k = k;
  report.precision = prec;
  report.grid = grid;

  const Interval tmin = threshold_domain_lower(k, prec);
  BigFloat one(prec);
  mpfr_set_ui(one.get(), 1, MPFR_RNDN);

  BigFloat best_lower(prec);
  mpfr_set_ui(best_lower.get(), 1, MPFR_RNDD);  // l(1) = 1 exactly
  BigFloat best_t = one;
  auto consider = [&](const BigFloat& t) {
    if (auto v = ell_at(t, k); v && best_lower < v->lo()) {
      best_lower = v->lo();
      best_t = t;
    }
  };

  // Grid over [tmin.lo, 1]; the first box reaches into the sliver below the
  // true domain end, which only makes its bound more conservative.
  std::vector<ThresholdBox> pending;
  BigFloat step(prec);
  mpfr_sub(step.get(), one.get(), tmin.lo().get(), MPFR_RNDN);
  mpfr_div_ui(step.get(), step.get(), grid, MPFR_RNDN);
  BigFloat left = tmin.lo();
  for (std::size_t i = 0; i < grid; ++i) {
    BigFloat right(prec);
    if (i + 1 == grid) {
      right = one;
    } else {
      mpfr_mul_ui(right.get(), step.get(), i + 1, MPFR_RNDN);
      mpfr_add(right.get(), right.get(), tmin.lo().get(), MPFR_RNDN);
    }
    BigFloat mid(prec);
    mpfr_add(mid.get(), left.get(), right.get(), MPFR_RNDN);
    mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
    consider(mid);
    pending.push_back({left, right});
    left = right;
  }

  report.argmax = golden_section_argmax(tmin.hi(), one, k);
  consider(report.argmax);

  BigFloat min_width(prec);
  mpfr_set_ui_2exp(min_width.get(), 1, -static_cast<long>(prec / 2),
                   MPFR_RNDN);
  BigFloat pruned_upper = best_lower;
  auto next_integer = [&]() -> BigInt {
    BigInt floor_value;
    mpfr_get_z(floor_value.get_mpz_t(), best_lower.get(), MPFR_RNDD);
    return floor_value + 1;
  };

  while (!pending.empty()) {
    ThresholdBox box = std::move(pending.back());
    pending.pop_back();
    ++report.boxes;
    if (!(tmin.hi() < box.b)) {
      // Entirely inside the uncertified sliver at the domain end.
      throw CertificationFailure("threshold search box below the domain end");
    }
    BigFloat upper = ell_upper_on_box(box.a, box.b, k);
    BigFloat cutoff(prec);
    mpfr_set_z(cutoff.get(), next_integer().get_mpz_t(), MPFR_RNDN);
    if (upper < cutoff) {
      if (pruned_upper < upper) pruned_upper = upper;
      continue;
    }
    BigFloat width(prec);
    mpfr_sub(width.get(), box.b.get(), box.a.get(), MPFR_RNDU);
    if (width < min_width)
      throw CertificationFailure(
          "cannot separate max l(t) from the next integer for k = " +
          std::to_string(k));
    BigFloat mid(prec);
    mpfr_add(mid.get(), box.a.get(), box.b.get(), MPFR_RNDN);
    mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
    consider(mid);
    pending.push_back({mid, box.b});
    pending.push_back({box.a, mid});
  }

  mpfr_get_z(report.value.get_mpz_t(), best_lower.get(), MPFR_RNDD);
  report.max_lower = best_lower;
  report.max_upper = pruned_upper;
  if (report.max_upper < report.max_lower) report.max_upper = report.max_lower;
  report.argmax = best_t;
  return report;
}

}  // namespace detail

/// floor(max over t of l(t)): the largest L for which the fixed-point
/// obstruction on H_j does not rule out Shearer's criterion.
inline ShearerBoundReport shearer_upper_bound(
    std::size_t k, const ShearerBoundOptions& options = {}) {
  if (k < 2) throw InvalidArgument("k must be at least 2");
  if (options.precision < 64)
    throw InvalidArgument("precision must be at least 64 bits");
  if (options.grid < 1) throw InvalidArgument("grid must be positive");
  auto report = detail::certify_shearer_bound(k, options.precision, options.grid);
  if (options.verify_doubling) {
    auto doubled = detail::certify_shearer_bound(k, 2 * options.precision,
                                                 2 * options.grid);
    if (doubled.value != report.value)
      throw CertificationFailure(
          "floor of max l(t) changed under precision doubling for k = " +
          std::to_string(k));
    report.doubling_verified = true;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Embedding H_j into the lopsidependency graph of the expanded formula

struct Embedding {
  ExtremalFormula instance;
  HGraph h;
  std::vector<std::size_t> vertex_to_clause;  // H_j vertex -> clause index
  std::size_t stages = 0;
  bool verified = false;
};

namespace detail {

inline void map_layout(const HLayout& layout, Variable variable,
                       const ExtremalFormula& inst,
                       std::vector<std::size_t>& out) {
  if (layout.empty()) return;
  const auto& stage = inst.tree.stage_of(variable);
  if (stage.positive_half.size() != layout.left.size() ||
      stage.negative_half.size() != layout.right.size())
    throw InvalidArgument("layout and expansion stage sizes differ");
  std::vector<std::size_t> root_clauses;
  for (std::size_t i = 0; i < layout.left.size(); ++i) {
    out[layout.left[i]] = stage.positive_half[i];
    root_clauses.push_back(stage.positive_half[i]);
  }
  for (std::size_t i = 0; i < layout.right.size(); ++i) {
    out[layout.right[i]] = stage.negative_half[i];
    root_clauses.push_back(stage.negative_half[i]);
  }
  for (std::size_t q = 0; q < root_clauses.size(); ++q) {
    const auto& clause = inst.formula.clause(root_clauses[q]);
    std::vector<Variable> fresh;
    for (const auto& lit : clause.literals)
      if (lit.variable != variable) fresh.push_back(lit.variable);
    const auto& copies = layout.attached.at(q);
    if (copies.size() != fresh.size())
      throw InvalidArgument("child copy count differs from fresh variables");
    for (std::size_t c = 0; c < copies.size(); ++c)
      map_layout(copies[c], fresh[c], inst, out);
  }
}

}  // namespace detail

/// Expands variables breadth-first down to tree depth j below variable 1,
/// maps H_j onto the resulting clauses (root halves onto the positive and
/// negative halves of A_1, each child copy onto the stage of the fresh
/// variable it hangs from) and checks that the map is an induced-subgraph
/// isomorphism into the canonical lopsidependency graph.
inline Embedding embed_H_in_G(std::size_t j, std::size_t k, std::size_t L,
                              std::size_t clause_guard = 1 << 16) {
  detail::check_family_parameters(k, L);
  const std::size_t branching = (2 * L - 2) * (k - 1);
  std::size_t stages = 0, level = 1;
  for (std::size_t d = 0; d < j; ++d) {
    stages = detail::saturating_add(stages, level);
    level = detail::saturating_mul(level, branching);
  }
  if (detail::saturating_mul(stages, 2 * L - 2) > clause_guard)
    throw GuardViolation("embedding for j = " + std::to_string(j) +
                         " needs more than " + std::to_string(clause_guard) +
                         " clauses");

  Embedding emb{build_extremal_formula(k, L, stages, clause_guard),
                build_H(j, k, L, clause_guard),
                {},
                stages,
                false};
  const std::size_t n = emb.h.graph.vertex_count();
  emb.vertex_to_clause.assign(n, SIZE_MAX);
  if (j > 0) detail::map_layout(emb.h.layout, 1, emb.instance, emb.vertex_to_clause);

  const DepGraph g = lopsidependency_graph(events_from_formula(emb.instance.formula));
  std::vector<bool> used(g.vertex_count(), false);
  bool ok = true;
  for (auto c : emb.vertex_to_clause) {
    if (c == SIZE_MAX || c >= g.vertex_count() || used[c]) {
      ok = false;
      break;
    }
    used[c] = true;
  }
  for (std::size_t u = 0; ok && u < n; ++u)
    for (std::size_t v = u + 1; ok && v < n; ++v)
      if (emb.h.graph.has_edge(u, v) !=
          g.has_edge(emb.vertex_to_clause[u], emb.vertex_to_clause[v]))
        ok = false;
  emb.verified = ok;
  return emb;
}

}  // namespace lllsep
