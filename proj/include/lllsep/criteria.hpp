#pragma once

// Occurrence bounds provable from the symmetric LLL (F_LLL) and from the
// orderable-set criterion for Moser-Tardos termination (F_MT), the generic
// orderable-set criterion itself, and the gap between the two bounds.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lllsep/error.hpp"
#include "lllsep/events_graph.hpp"
#include "lllsep/interval.hpp"
#include "lllsep/rational.hpp"

namespace lllsep {

struct CriterionReport {
  std::string criterion;
  bool satisfied = false;
  std::map<std::string, std::string> parameters;
  std::optional<std::size_t> witness;  // failing event
  std::string lhs;
  std::string rhs;
};

// ---------------------------------------------------------------------------
// Closed-form bounds

inline void check_width(std::size_t k) {
  if (k < 2) throw InvalidArgument("k must be at least 2");
}

/// Enclosure of 2^k / (e k) - 1/k.
inline Interval f_lll_enclosure(std::size_t k,
                                mpfr_prec_t precision = kDefaultPrecision) {
  check_width(k);
  const auto kk = static_cast<long>(k);
  Interval two_k = Interval::from_integer(pow(BigInt(2), k), precision);
  return two_k / (Interval::e(precision) * Interval::exact(kk, precision)) -
         Interval::from_rational(make_rational(1, k), precision);
}

/// floor(2^k / (e k) - 1/k); throws CertificationFailure when the enclosure
/// straddles an integer.
inline BigInt f_lll(std::size_t k, mpfr_prec_t precision = kDefaultPrecision) {
  return require_certified_floor(f_lll_enclosure(k, precision),
                                 "F_LLL(" + std::to_string(k) + ")");
}

/// floor((2^k - 1)(k - 1)^{k-1} / k^k) in integer arithmetic.
inline BigInt f_mt(std::size_t k) {
  check_width(k);
  BigInt num = (pow(BigInt(2), k) - 1) * pow(BigInt(k - 1), k - 1);
  BigInt den = pow(BigInt(k), k);
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

/// e p (d + 1) <= 1, decided on an enclosure of e.
inline bool symmetric_lll_check(const BigRational& p, std::size_t d,
                                mpfr_prec_t precision = kDefaultPrecision) {
  if (p < 0 || p > 1) throw DomainError("p must lie in [0, 1]");
  BigRational q = p * BigRational(BigInt(d) + 1);
  if (q == 0) return true;
  Interval x = Interval::e(precision) * Interval::from_rational(q, precision);
  Interval one = Interval::exact(1, precision);
  if (x.certainly_less_equal(one)) return true;
  if (one.certainly_less(x)) return false;
  throw CertificationFailure("e p (d+1) not separated from 1: " + x.to_string());
}

struct AlphaReport {
  std::size_t k = 0;
  std::size_t L = 0;
  Interval alpha;
  Interval margin;  // alpha - 2^{-k} (alpha + (1 + L alpha)^k)
  bool satisfied = false;
};

/// The uniform weight alpha = (((2^k-1)/(kL))^{1/(k-1)} - 1) / L that
/// maximizes alpha - 2^{-k}(alpha + (1 + L alpha)^k), and whether that
/// maximum is nonnegative.
inline AlphaReport mt_ksat_alpha(std::size_t k, std::size_t L,
                                     mpfr_prec_t precision = kDefaultPrecision) {
  check_width(k);
  if (L < 1) throw DomainError("L must be at least 1");
  const BigInt top = pow(BigInt(2), k) - 1;
  if (BigInt(k) * BigInt(L) > top)
    throw DomainError("alpha is negative for L > (2^k - 1)/k");
  AlphaReport r;
  r.k = k;
  r.L = L;
  const auto prec = precision;
  Interval ratio = Interval::from_rational(
      BigRational(top, BigInt(k) * BigInt(L)), prec);
  Interval len = Interval::exact(static_cast<long>(L), prec);
  r.alpha = (root(ratio, k - 1) - Interval::exact(1, prec)) / len;
  Interval p = Interval::from_rational(inverse_power_of_two(k), prec);
  Interval growth = pow(Interval::exact(1, prec) + len * r.alpha, k);
  r.margin = r.alpha - p * (r.alpha + growth);
  if (mpfr_sgn(r.margin.lo().get()) >= 0)
    r.satisfied = true;
  else if (r.margin.certainly_negative())
    r.satisfied = false;
  else
    throw CertificationFailure("sign of the alpha condition undecided: " +
                               r.margin.to_string());
  return r;
}

/// F_MT(k) - F_LLL(k) >= 2^k / (2 e k^2) - 1.
inline CriterionReport gap_inequality(std::size_t k,
                                      mpfr_prec_t precision = kDefaultPrecision) {
  check_width(k);
  CriterionReport r;
  r.criterion = "gap_inequality";
  r.parameters["k"] = std::to_string(k);
  const BigInt lhs = f_mt(k) - f_lll(k, precision);
  const auto kk = static_cast<long>(k);
  Interval rhs = Interval::from_integer(pow(BigInt(2), k), precision) /
                     (Interval::exact(2, precision) * Interval::e(precision) *
                      Interval::exact(kk * kk, precision)) -
                 Interval::exact(1, precision);
  Interval left = Interval::from_integer(lhs, precision);
  if (rhs.certainly_less_equal(left))
    r.satisfied = true;
  else if (left.certainly_less(rhs))
    r.satisfied = false;
  else
    throw CertificationFailure("gap inequality undecided for k = " +
                               std::to_string(k));
  r.lhs = lhs.get_str();
  r.rhs = rhs.mid().to_string(20);
  return r;
}

// ---------------------------------------------------------------------------
// Orderable sets

struct OrderableOptions {
  std::size_t max_candidates = 64;
  std::size_t max_sets = std::size_t{1} << 22;
};

namespace detail {

/// Bit q set iff the candidate disagrees with B on B's q-th atom.
inline std::uint64_t disagreement_mask(const BadEvent& b, const BadEvent& a) {
  std::uint64_t mask = 0;
  const auto& atoms = b.atoms();
  for (std::size_t q = 0; q < atoms.size(); ++q)
    if (atom_disagrees(atoms[q], a)) mask |= std::uint64_t{1} << q;
  return mask;
}

/// A set is orderable iff repeatedly removing a member that owns an atom no
/// other remaining member is hit by empties it. Orderable sets are closed
/// under taking subsets, and the last member of any valid ordering owns
/// such an atom, so the peeling order never matters.
inline bool peelable(std::vector<std::uint64_t> masks) {
  while (!masks.empty()) {
    bool removed = false;
    for (std::size_t i = 0; i < masks.size(); ++i) {
      std::uint64_t others = 0;
      for (std::size_t j = 0; j < masks.size(); ++j)
        if (j != i) others |= masks[j];
      if ((masks[i] & ~others) != 0) {
        masks.erase(masks.begin() + static_cast<std::ptrdiff_t>(i));
        removed = true;
        break;
      }
    }
    if (!removed) return false;
  }
  return true;
}

}  // namespace detail

/// Visits {B} first, then every Y orderable to B through some ordering
/// B_1..B_s where each B_i is hit by an atom of B that hits none of
/// B_1..B_{i-1}. The empty ordering (s = 0) is included. Sets are sorted
/// index lists, each visited once, in lexicographic depth-first order.
inline void for_each_orderable_set(
    std::size_t b, const std::vector<BadEvent>& events,
    const std::function<void(const std::vector<std::size_t>&)>& visit,
    const OrderableOptions& options = {}) {
  if (b >= events.size()) throw InvalidArgument("event index out of range");
  const BadEvent& center = events[b];
  if (center.size() > 64)
    throw GuardViolation("bad event with more than 64 atoms");
  std::vector<std::size_t> candidates;
  std::vector<std::uint64_t> masks;
  for (std::size_t a = 0; a < events.size(); ++a) {
    std::uint64_t m = detail::disagreement_mask(center, events[a]);
    if (m != 0) {
      candidates.push_back(a);
      masks.push_back(m);
    }
  }
  if (candidates.size() > options.max_candidates)
    throw GuardViolation(std::to_string(candidates.size()) +
                         " events disagree with event " + std::to_string(b) +
                         ", above the guard of " +
                         std::to_string(options.max_candidates));

  std::size_t emitted = 0;
  auto emit = [&](const std::vector<std::size_t>& set) {
    if (++emitted > options.max_sets)
      throw GuardViolation("more than " + std::to_string(options.max_sets) +
                           " orderable sets");
    visit(set);
  };
  emit({b});

  std::vector<std::size_t> current;
  std::vector<std::uint64_t> current_masks;
  auto dfs = [&](auto&& self, std::size_t start) -> void {
    emit(current);
    if (current.size() >= center.size()) return;  // each member adds an atom
    for (std::size_t i = start; i < candidates.size(); ++i) {
      current_masks.push_back(masks[i]);
      if (detail::peelable(current_masks)) {
        current.push_back(candidates[i]);
        self(self, i + 1);
        current.pop_back();
      }
      current_masks.pop_back();
    }
  };
  dfs(dfs, 0);
}

inline std::vector<std::vector<std::size_t>> orderable_sets(
    std::size_t b, const std::vector<BadEvent>& events,
    const OrderableOptions& options = {}) {
  std::vector<std::vector<std::size_t>> out;
  for_each_orderable_set(
      b, events, [&](const std::vector<std::size_t>& y) { out.push_back(y); },
      options);
  return out;
}

/// For every B: mu(B) >= P(B) * sum over Y orderable to B of prod mu(A).
/// Exact rational evaluation; the first failing B is the witness.
inline CriterionReport mt_criterion_check(const std::vector<BadEvent>& events,
                                    const std::vector<BigRational>& mu,
                                    const std::vector<BigRational>& probability,
                                    const OrderableOptions& options = {}) {
  if (mu.size() != events.size() || probability.size() != events.size())
    throw InvalidArgument("mu and probability vectors must match the events");
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] < 0) throw DomainError("negative weight mu for event " +
                                     std::to_string(i));
    if (probability[i] < 0 || probability[i] > 1)
      throw DomainError("probability of event " + std::to_string(i) +
                        " outside [0, 1]");
  }
  CriterionReport report;
  report.criterion = "mt_criterion";
  report.parameters["events"] = std::to_string(events.size());
  report.satisfied = true;
  for (std::size_t b = 0; b < events.size(); ++b) {
    BigRational sum = 0;
    for_each_orderable_set(
        b, events,
        [&](const std::vector<std::size_t>& y) {
          BigRational term = 1;
          for (auto a : y) term *= mu[a];
          sum += term;
        },
        options);
    BigRational rhs = probability[b] * sum;
    if (mu[b] < rhs) {
      report.satisfied = false;
      report.witness = b;
      report.lhs = mu[b].get_str();
      report.rhs = rhs.get_str();
      return report;
    }
  }
  return report;
}

}  // namespace lllsep
