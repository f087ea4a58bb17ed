#pragma once

// JSON renderings of reports and graphs. Exact values are strings
// ("p/q"); enclosures are {"lo", "hi"} decimal strings.

#include <json.hpp>

#include <string>

#include "lllsep/criteria.hpp"
#include "lllsep/events_graph.hpp"
#include "lllsep/hj_family.hpp"
#include "lllsep/moser_tardos.hpp"
#include "lllsep/shearer.hpp"

namespace lllsep {

using Json = nlohmann::ordered_json;

inline Json to_json(const Interval& x, int digits = 40) {
  return Json{{"lo", x.lo().to_string(digits)}, {"hi", x.hi().to_string(digits)}};
}

inline Json edge_list_json(const DepGraph& g) {
  Json edges = Json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  return Json{{"vertices", g.vertex_count()}, {"edges", edges}};
}

/// Reads {"vertices": n, "edges": [[u, v], ...]}.
inline DepGraph graph_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw InvalidArgument("graph JSON needs 'vertices' and 'edges'");
  const auto n = j.at("vertices").get<std::size_t>();
  DepGraph g(n);
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2)
      throw InvalidArgument("each edge must be a pair of vertex indices");
    g.add_edge(e[0].get<std::size_t>(), e[1].get<std::size_t>());
  }
  return g;
}

inline Json vertex_set_json(const std::vector<DepGraph::Vertex>& s) {
  Json out = Json::array();
  for (auto v : s) out.push_back(v);
  return out;
}

inline Json to_json(const ShearerVerdict& v) {
  Json out{{"status", v.status == ShearerStatus::satisfied ? "satisfied"
                                                           : "violated"},
           {"sets_checked", v.sets_checked}};
  if (v.witness) out["witness"] = vertex_set_json(*v.witness);
  if (v.witness_value) out["witness_value"] = v.witness_value->get_str();
  return out;
}

inline Json to_json(const CriterionReport& r) {
  Json params = Json::object();
  for (const auto& [key, value] : r.parameters) params[key] = value;
  Json out{{"criterion", r.criterion},
           {"satisfied", r.satisfied},
           {"parameters", params}};
  if (r.witness) out["witness"] = *r.witness;
  if (!r.lhs.empty()) out["lhs"] = r.lhs;
  if (!r.rhs.empty()) out["rhs"] = r.rhs;
  return out;
}

inline Json to_json(const AlphaReport& r) {
  return Json{{"criterion", "mt_ksat_alpha"},
              {"k", r.k},
              {"L", r.L},
              {"alpha", to_json(r.alpha)},
              {"margin", to_json(r.margin)},
              {"satisfied", r.satisfied}};
}

/// `max_points` caps the trajectory: the first and last max_points / 2
/// entries are kept when it is longer.
inline Json to_json(const FixedPointReport& r, std::size_t max_points = 64) {
  Json traj = Json::array();
  const auto n = r.trajectory.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (n > max_points && i >= max_points / 2 && i < n - max_points / 2)
      continue;
    Json point = to_json(r.trajectory[i]);
    point["j"] = i;
    traj.push_back(point);
  }
  Json out{{"parameters",
            {{"k", r.k},
             {"L", r.L},
             {"precision_bits", r.options.precision},
             {"tolerance_log2", r.options.tolerance_log2},
             {"max_iterations", r.options.max_iterations}}},
           {"verdict", to_string(r.outcome)},
           {"step", r.step},
           {"threshold", to_json(r.threshold)},
           {"trajectory_length", n},
           {"trajectory", traj},
           {"note", r.note}};
  if (r.limit) out["limit"] = to_json(*r.limit);
  return out;
}

inline Json to_json(const ShearerBoundReport& r) {
  return Json{{"k", r.k},
              {"value", r.value.get_str()},
              {"argmax", r.argmax.to_string(30)},
              {"certification",
               {{"max_lower", r.max_lower.to_string(30)},
                {"max_upper", r.max_upper.to_string(30)},
                {"precision_bits", r.precision},
                {"grid", r.grid},
                {"boxes", r.boxes},
                {"doubling_verified", r.doubling_verified}}}};
}

inline Json to_json(const RunStats& s) {
  return Json{{"terminated", s.terminated},
              {"total_resamples", s.total_resamples},
              {"per_event", s.per_event},
              {"seed", s.seed},
              {"rule", to_string(s.rule)},
              {"max_steps", s.max_steps}};
}

}  // namespace lllsep
