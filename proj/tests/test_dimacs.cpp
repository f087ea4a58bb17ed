#include <gtest/gtest.h>

#include "lllsep/dimacs.hpp"
#include "lllsep/error.hpp"
#include "lllsep/sat_model.hpp"

using namespace lllsep;

TEST(Dimacs, ExportSingleStage) {
  auto ex = build_extremal_formula(3, 2, 1);
  EXPECT_EQ(dimacs_export(ex.formula), "p cnf 5 2\n1 2 3 0\n-1 4 5 0\n");
}

TEST(Dimacs, RoundTrip) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto f = random_bounded_formula(3 + seed % 3, 2, 10, 5, seed);
    EXPECT_EQ(dimacs_import(dimacs_export(f)), f) << "seed=" << seed;
  }
  auto ex = build_extremal_formula(2, 3, 4);
  EXPECT_EQ(dimacs_import(dimacs_export(ex.formula)), ex.formula);
}

TEST(Dimacs, EmptyFormulaNeedsWidth) {
  Formula empty(3, 2, {});
  auto text = dimacs_export(empty);
  EXPECT_EQ(text, "p cnf 2 0\n");
  EXPECT_THROW(dimacs_import(text), ParseError);
  EXPECT_EQ(dimacs_import(text, 3), empty);
}

TEST(Dimacs, CommentsAndMultiLineClauses) {
  auto f = dimacs_import("c hello\np cnf 3 1\n1\n-2 3 0\n");
  EXPECT_EQ(f.width(), 3U);
  EXPECT_EQ(f.clause(0).literals[1], (Literal{2, false}));
}

TEST(Dimacs, Errors) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      dimacs_import(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("p cnf 2 1\n1 x 0\n"), 2U);
  EXPECT_EQ(line_of("1 2 0\n"), 1U);
  EXPECT_EQ(line_of("p cnf 2 1\np cnf 2 1\n"), 2U);
  EXPECT_EQ(line_of("p dnf 2 1\n"), 1U);
  EXPECT_EQ(line_of("p cnf 2 1\n1 3 0\n"), 2U);
  EXPECT_EQ(line_of("p cnf 2 1\n1 1 0\n"), 2U);
  EXPECT_GT(line_of("p cnf 2 2\n1 2 0\n"), 0U);
  EXPECT_GT(line_of("p cnf 2 1\n1 2\n"), 0U);
  EXPECT_EQ(line_of("p cnf 3 2\n1 2 0\n1 2 3 0\n"), 3U);
  EXPECT_THROW(dimacs_import("p cnf 3 1\n1 2 0\n", 3), ParseError);
  EXPECT_THROW(dimacs_import("p cnf 3 1\n0\n"), ParseError);
}
