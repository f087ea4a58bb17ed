#include <gtest/gtest.h>

#include "lllsep/error.hpp"
#include "lllsep/hj_family.hpp"
#include "lllsep/shearer.hpp"
#include "support/oracles.hpp"

using namespace lllsep;

namespace {

ProbabilityVector at_p(const HGraph& h) {
  return ProbabilityVector(h.graph.vertex_count(), inverse_power_of_two(h.k));
}

bool encloses(const Interval& x, const BigRational& q) {
  auto point = Interval::from_rational(q, x.precision());
  return x.lo() <= point.lo() && point.hi() <= x.hi();
}

}  // namespace

TEST(BuildH, FirstLevelIsCompleteBipartite) {
  for (std::size_t L = 2; L <= 5; ++L) {
    auto h = build_H(1, 3, L);
    EXPECT_EQ(h.graph.vertex_count(), 2 * (L - 1));
    EXPECT_EQ(h.graph.edge_count(), (L - 1) * (L - 1));
    for (auto u : h.root_left())
      for (auto v : h.root_right()) {
        EXPECT_TRUE(h.graph.has_edge(u, v));
      }
    for (auto u : h.root_left())
      for (auto v : h.root_left()) {
        if (u != v) {
          EXPECT_FALSE(h.graph.has_edge(u, v));
        }
      }
  }
}

TEST(BuildH, PrimeFirstLevelIsIsolatedVertex) {
  auto h = build_Hprime(1, 4, 3);
  EXPECT_EQ(h.graph.vertex_count(), 1U);
  EXPECT_EQ(h.graph.edge_count(), 0U);
  EXPECT_TRUE(h.prime);
  EXPECT_EQ(build_Hprime(0, 4, 3).graph.vertex_count(), 0U);
}

TEST(BuildH, Sizes) {
  EXPECT_EQ(build_H(0, 2, 2).graph.vertex_count(), 0U);
  EXPECT_EQ(build_H(2, 2, 2).graph.vertex_count(), 6U);
  for (std::size_t j = 0; j <= 3; ++j)
    for (std::size_t k = 2; k <= 3; ++k)
      for (std::size_t L = 2; L <= 3; ++L) {
        EXPECT_EQ(build_H(j, k, L).graph.vertex_count(), h_vertex_count(j, k, L));
        EXPECT_EQ(build_Hprime(j, k, L).graph.vertex_count(),
                  hprime_vertex_count(j, k, L));
      }
  // |H_{j+1}| = 2(L-1) + 2(L-1)(k-1)|H_j|
  EXPECT_EQ(h_vertex_count(3, 3, 3), 4U + 4 * 2 * (4 + 4 * 2 * 4));
}

TEST(BuildH, Guards) {
  EXPECT_THROW(build_H(1, 1, 2), InvalidArgument);
  EXPECT_THROW(build_H(1, 2, 1), InvalidArgument);
  EXPECT_THROW(build_H(30, 9, 22), GuardViolation);
  EXPECT_THROW(build_Hprime(5, 3, 3, 10), GuardViolation);
  EXPECT_EQ(h_vertex_count(200, 9, 22), SIZE_MAX);
}

TEST(Recurrence, InitialAndFirstValues) {
  auto st = recurrence_sr(1, 2, 2);
  EXPECT_EQ(st.s(-1), 1);
  EXPECT_EQ(st.s(0), 1);
  EXPECT_EQ(st.r(0), 1);
  EXPECT_EQ(st.r(1), BigRational(3, 4));
  EXPECT_EQ(st.s(1), BigRational(1, 2));
  EXPECT_THROW(st.s(2), InvalidArgument);
  EXPECT_THROW(st.r(-1), InvalidArgument);
}

TEST(Recurrence, FirstLevelMatchesBipartiteRoot) {
  for (std::size_t k = 2; k <= 6; ++k)
    for (std::size_t L = 2; L <= 5; ++L) {
      auto h = build_H(1, k, L);
      EXPECT_EQ(recurrence_sr(1, k, L).s(1),
                oracle::q_by_subsets(h.graph, 0, at_p(h)))
          << "k=" << k << " L=" << L;
    }
}

TEST(Recurrence, MatchesSubsetOracleOnSmallGraphs) {
  struct Case { std::size_t j, k, L; };
  for (auto c : {Case{3, 2, 2}, Case{2, 2, 3}, Case{2, 3, 2}, Case{1, 4, 3}}) {
    auto st = recurrence_sr(c.j, c.k, c.L);
    for (std::size_t t = 0; t <= c.j; ++t) {
      auto h = build_H(t, c.k, c.L);
      auto hp = build_Hprime(t, c.k, c.L);
      if (h.graph.vertex_count() > 20) continue;
      EXPECT_EQ(st.s(static_cast<long>(t)),
                oracle::q_by_subsets(h.graph, 0, at_p(h)));
      if (hp.graph.vertex_count() <= 20) {
        EXPECT_EQ(st.r(static_cast<long>(t)),
                  oracle::q_by_subsets(hp.graph, 0, at_p(hp)));
      }
    }
  }
}

TEST(Recurrence, KnownValuesWidthTwo) {
  // (k, L) = (2, 2): s = 1, 1, 1/2, 1/16, -1/1024 for t = -1..3.
  auto st = recurrence_sr(3, 2, 2);
  EXPECT_EQ(st.s(2), BigRational(1, 16));
  EXPECT_EQ(st.s(3), BigRational(-1, 1024));
  // (k, L) = (2, 3): s_1 = 1/8, r_2 = -1/64 and s_2 < 0.
  auto st3 = recurrence_sr(2, 2, 3);
  EXPECT_EQ(st3.s(1), BigRational(1, 8));
  EXPECT_EQ(st3.r(1), BigRational(3, 4));
  EXPECT_EQ(st3.r(2), BigRational(-1, 64));
  EXPECT_LT(st3.s(2), 0);
}

TEST(Recurrence, BitGuard) {
  EXPECT_THROW(recurrence_sr(40, 9, 22, 1 << 16), GuardViolation);
  auto e = recurrence_exponents(3, 4);
  EXPECT_EQ(e.e1, 6U);
  EXPECT_EQ(e.e2, 12U);
  EXPECT_EQ(e.e3, 12U);
}

TEST(ABSequence, RatiosMatchRecurrence) {
  auto st = recurrence_sr(3, 2, 2);
  auto terms = a_b_sequence(st);
  ASSERT_EQ(terms.size(), 4U);
  EXPECT_EQ(terms[1].a, BigRational(3, 4));
  const auto e3 = recurrence_exponents(2, 2).e3;
  for (std::size_t t = 0; t <= 3; ++t) {
    const auto& prev = st.s(static_cast<long>(t) - 1);
    EXPECT_EQ(terms[t].b, st.s(static_cast<long>(t)) / pow(prev, e3));
  }
  EXPECT_EQ(a_b_sequence(1, 2, 2).a, BigRational(3, 4));
}

TEST(ABSequence, BIdentity) {
  // b_j = 2 a_j^{L-1} - 1, from dividing the s-recurrence by s_{j-1}^{e3}.
  for (std::size_t k = 2; k <= 4; ++k)
    for (std::size_t L = 2; L <= 3; ++L) {
      auto terms = a_b_sequence(recurrence_sr(3, k, L));
      for (std::size_t t = 1; t < terms.size(); ++t)
        EXPECT_EQ(terms[t].b, 2 * pow(terms[t].a, L - 1) - 1);
    }
}

TEST(GFunction, ExactValues) {
  const auto p = inverse_power_of_two(5);
  EXPECT_EQ(g_function(BigRational(1), 5, 3, p), 1 - p);
  EXPECT_THROW(g_function(BigRational(0), 5, 3, p), DomainError);
  EXPECT_THROW(g_function(BigRational(1, 2), 5, 2, p), DomainError);
}

TEST(GFunction, ExactIterationMatchesRecurrenceAndInterval) {
  // a_j = g(a_{j-1}) as long as s stays positive.
  for (std::size_t k = 2; k <= 4; ++k)
    for (std::size_t L = 2; L <= 3; ++L) {
      const auto p = inverse_power_of_two(k);
      auto terms = a_b_sequence(recurrence_sr(3, k, L));
      BigRational a = 1;
      for (std::size_t t = 1; t < terms.size(); ++t) {
        if (terms[t - 1].b <= 0 || a <= 0) break;
        if (2 - 1 / pow(a, L - 1) <= 0) break;
        BigRational next = g_function(a, k, L, p);
        EXPECT_EQ(next, terms[t].a) << "k=" << k << " L=" << L << " t=" << t;
        auto enclosure =
            g_function(Interval::from_rational(a, 128), k, L, p);
        EXPECT_TRUE(encloses(enclosure, next));
        a = next;
      }
    }
}

TEST(FixedPoint, BoundaryAtNine) {
  auto violated = fixed_point_iteration(9, 22);
  EXPECT_EQ(violated.outcome, FixedPointOutcome::violated_at_step);
  EXPECT_GT(violated.step, 0U);
  EXPECT_TRUE(violated.trajectory.back().certainly_less_equal(violated.threshold));

  auto converged = fixed_point_iteration(9, 21);
  EXPECT_EQ(converged.outcome, FixedPointOutcome::converged);
  ASSERT_TRUE(converged.limit.has_value());
  EXPECT_TRUE(converged.threshold.certainly_less(*converged.limit));
  EXPECT_TRUE(converged.limit->certainly_less_equal(Interval::exact(1, 256)));
  EXPECT_FALSE(converged.note.empty());
}

TEST(FixedPoint, WidthTwoMatchesExplicitRecurrence) {
  auto report = fixed_point_iteration(2, 2);
  ASSERT_GE(report.trajectory.size(), 2U);
  EXPECT_TRUE(encloses(report.trajectory[1], BigRational(3, 4)));
  for (std::size_t t = 1; t < report.trajectory.size(); ++t)
    EXPECT_TRUE(report.trajectory[t].certainly_less(report.trajectory[t - 1]));
  EXPECT_EQ(report.outcome, FixedPointOutcome::violated_at_step);
  // First t with s_t <= 0 is 3 at (2, 2).
  EXPECT_EQ(report.step, 3U);
  EXPECT_EQ(fixed_point_iteration(2, 3).step, 2U);
}

TEST(FixedPoint, Options) {
  FixedPointOptions low;
  low.precision = 32;
  EXPECT_THROW(fixed_point_iteration(9, 21, low), InvalidArgument);
  FixedPointOptions few;
  few.max_iterations = 3;
  EXPECT_EQ(fixed_point_iteration(9, 21, few).outcome,
            FixedPointOutcome::inconclusive);
  EXPECT_STREQ(to_string(FixedPointOutcome::converged), "ConvergedTo");
}

TEST(ThresholdCurve, PointValues) {
  auto at_one = threshold_ell(BigRational(1), 9);
  EXPECT_TRUE(encloses(at_one, BigRational(1)));
  auto t0 = threshold_ell(BigRational(8, 9), 9);
  EXPECT_TRUE(Interval::exact(21, 256).certainly_less(t0));
  EXPECT_TRUE(t0.certainly_less(Interval::exact(22, 256)));
  EXPECT_NEAR(t0.mid().to_double(), 21.97187, 1e-4);
  EXPECT_THROW(threshold_ell(BigRational(1, 4), 9), DomainError);
  EXPECT_THROW(threshold_ell(BigRational(2), 9), DomainError);
}

TEST(ShearerBound, TableValues) {
  EXPECT_EQ(shearer_upper_bound(9).value, 21);
  EXPECT_EQ(shearer_upper_bound(12).value, 126);
  EXPECT_EQ(shearer_upper_bound(20).value, 19311);
  auto r = shearer_upper_bound(9);
  EXPECT_TRUE(r.doubling_verified);
  EXPECT_TRUE(r.max_lower <= r.max_upper);
  EXPECT_NEAR(r.max_lower.to_double(), 21.99778, 1e-4);
}

TEST(ShearerBound, Preconditions) {
  EXPECT_THROW(shearer_upper_bound(1), InvalidArgument);
  ShearerBoundOptions bad;
  bad.precision = 16;
  EXPECT_THROW(shearer_upper_bound(9, bad), InvalidArgument);
  EXPECT_EQ(shearer_upper_bound(2).value, 1);
}

TEST(Embedding, SmallCases) {
  auto e0 = embed_H_in_G(0, 3, 2);
  EXPECT_TRUE(e0.verified);
  EXPECT_TRUE(e0.vertex_to_clause.empty());

  auto e1 = embed_H_in_G(1, 3, 2);
  EXPECT_TRUE(e1.verified);
  EXPECT_EQ(e1.vertex_to_clause, (std::vector<std::size_t>{0, 1}));

  auto e2 = embed_H_in_G(2, 2, 3);
  EXPECT_TRUE(e2.verified);
  EXPECT_EQ(e2.h.graph.vertex_count(), 20U);
  EXPECT_THROW(embed_H_in_G(4, 3, 3, 1000), GuardViolation);
}

TEST(ShearerOnH, ExplicitRouteAgreesWithRecurrence) {
  auto h1 = build_H(1, 2, 3);
  auto h2 = build_H(2, 2, 3);
  EXPECT_EQ(shearer_check(h1.graph, at_p(h1)).status, ShearerStatus::satisfied);
  EXPECT_EQ(shearer_check(h2.graph, at_p(h2)).status, ShearerStatus::violated);
}
