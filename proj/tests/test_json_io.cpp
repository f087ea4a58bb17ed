#include <gtest/gtest.h>

#include "lllsep/json_io.hpp"

using namespace lllsep;

TEST(JsonIo, GraphRoundTrip) {
  DepGraph g(3);
  g.add_edge(0, 2);
  auto j = edge_list_json(g);
  EXPECT_EQ(j.dump(), R"({"vertices":3,"edges":[[0,2]]})");
  EXPECT_EQ(graph_from_json(j), g);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"vertices":2})")),
               InvalidArgument);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"vertices":2,"edges":[[0]]})")),
               InvalidArgument);
}

TEST(JsonIo, ShearerVerdict) {
  DepGraph g(2);
  g.add_edge(0, 1);
  auto v = shearer_check(g, {BigRational(1, 2), BigRational(1, 2)});
  auto j = to_json(v);
  EXPECT_EQ(j["status"], "violated");
  EXPECT_EQ(j["witness"], Json::array());
  EXPECT_EQ(j["witness_value"], "0");
}

TEST(JsonIo, Reports) {
  auto gap = to_json(gap_inequality(9));
  EXPECT_EQ(gap["criterion"], "gap_inequality");
  EXPECT_EQ(gap["lhs"], "2");
  auto fp = to_json(fixed_point_iteration(2, 2), 2);
  EXPECT_EQ(fp["verdict"], "ViolatedAtStep");
  EXPECT_EQ(fp["step"], 3);
  EXPECT_EQ(fp["trajectory"].size(), 2U);
  EXPECT_EQ(fp["trajectory_length"], 4);
  auto alpha = to_json(mt_ksat_alpha(9, 22));
  EXPECT_TRUE(alpha["satisfied"].get<bool>());
  MtOptions opt;
  auto stats = to_json(run_mt(build_extremal_formula(3, 2, 1).formula, opt).stats);
  EXPECT_TRUE(stats["terminated"].get<bool>());
  EXPECT_EQ(stats["rule"], "first");
}
