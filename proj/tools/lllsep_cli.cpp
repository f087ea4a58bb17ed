// lllsep: command-line front end.
//
// Exit codes: 0 ok, 2 usage, 3 parse, 4 guard, 5 domain, 6 certification,
// 7 recurrence/brute-force disagreement, 8 Moser-Tardos step limit reached,
// 1 anything else.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lllsep/dimacs.hpp"
#include "lllsep/json_io.hpp"
#include "lllsep/lllsep.hpp"

using namespace lllsep;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDisagree = 7;
constexpr int kExitNotTerminated = 8;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return kExitUsage;
    case ErrorKind::parse: return 3;
    case ErrorKind::guard: return 4;
    case ErrorKind::domain: return 5;
    case ErrorKind::certification: return 6;
  }
  return 1;
}

struct Config {
  long precision = kDefaultPrecision;
  std::size_t guard_vertices = kDefaultVertexGuard;
  std::size_t guard_clauses = 1 << 16;
  std::string format = "tsv";
  std::string out;
  unsigned jobs = std::max(1U, std::thread::hardware_concurrency());

  bool json() const { return format == "json"; }
  mpfr_prec_t prec() const { return static_cast<mpfr_prec_t>(precision); }
};

/// Writes to --out when given, otherwise stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InvalidArgument("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string set_text(const std::vector<DepGraph::Vertex>& s) {
  if (s.empty()) return "∅";
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i)
    out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

Formula read_cnf(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return dimacs_import(in);
}

// ---------------------------------------------------------------------------

struct TableCell {
  std::optional<BigInt> value;
  std::string error;
};

struct TableRow {
  std::size_t k = 0;
  TableCell lll, shearer, mt;
};

template <typename F>
TableCell compute_cell(F&& f) {
  TableCell cell;
  try {
    cell.value = f();
  } catch (const Error& e) {
    cell.error = e.what();
  }
  return cell;
}

int cmd_table(const Config& cfg, std::size_t kmin, std::size_t kmax,
              bool header) {
  if (kmin < 2 || kmin > kmax)
    throw InvalidArgument("need 2 <= kmin <= kmax");
  const auto prec = cfg.prec();
  auto row_for = [prec](std::size_t k) {
    TableRow row;
    row.k = k;
    row.lll = compute_cell([&] { return f_lll(k, prec); });
    row.shearer = compute_cell([&] {
      ShearerBoundOptions opt;
      opt.precision = prec;
      return shearer_upper_bound(k, opt).value;
    });
    row.mt = compute_cell([&] { return f_mt(k); });
    return row;
  };

  // Rows are independent; batches of cfg.jobs run concurrently and are
  // emitted in k order.
  std::vector<TableRow> rows;
  for (std::size_t start = kmin; start <= kmax; start += cfg.jobs) {
    std::vector<std::future<TableRow>> batch;
    for (std::size_t k = start; k <= kmax && k < start + cfg.jobs; ++k)
      batch.push_back(std::async(std::launch::async, row_for, k));
    for (auto& f : batch) rows.push_back(f.get());
  }

  Output out(cfg.out);
  bool failed = false;
  auto cell_text = [](const TableCell& c) {
    return c.value ? c.value->get_str() : std::string("ERR");
  };
  for (const auto& row : rows)
    for (auto [name, cell] : {std::pair{"F_LLL", &row.lll},
                              std::pair{"F_Shearer", &row.shearer},
                              std::pair{"F_MT", &row.mt}})
      if (!cell->value) {
        failed = true;
        std::cerr << "certification failure at (k=" << row.k << ", " << name
                  << "): " << cell->error << '\n';
      }

  if (cfg.json()) {
    Json arr = Json::array();
    for (const auto& row : rows) {
      Json j{{"k", row.k}};
      j["F_LLL"] = row.lll.value ? Json(row.lll.value->get_str()) : Json(nullptr);
      j["F_Shearer"] =
          row.shearer.value ? Json(row.shearer.value->get_str()) : Json(nullptr);
      j["F_MT"] = row.mt.value ? Json(row.mt.value->get_str()) : Json(nullptr);
      arr.push_back(j);
    }
    out.stream() << Json{{"table", arr}}.dump(2) << '\n';
  } else {
    if (header) out.stream() << "k\tF_LLL\tF_Shearer\tF_MT\n";
    for (const auto& row : rows)
      out.stream() << row.k << '\t' << cell_text(row.lll) << '\t'
                   << cell_text(row.shearer) << '\t' << cell_text(row.mt)
                   << '\n';
  }
  return failed ? exit_code(ErrorKind::certification) : 0;
}

int cmd_construct(const Config& cfg, std::size_t k, std::size_t L,
                  std::size_t r) {
  auto ex = build_extremal_formula(k, L, r, cfg.guard_clauses);
  const bool valid = validate_occurrences(ex.formula, ex.tree, L);
  Output out(cfg.out);
  if (cfg.json()) {
    Json clauses = Json::array();
    for (const auto& c : ex.formula.clauses()) {
      Json lits = Json::array();
      for (const auto& l : c.literals) lits.push_back(l.to_dimacs());
      clauses.push_back(lits);
    }
    out.stream() << Json{{"parameters", {{"k", k}, {"L", L}, {"r", r}}},
                         {"variables", ex.formula.variable_count()},
                         {"clauses", clauses},
                         {"occurrence_bounds_hold", valid}}
                        .dump(2)
                 << '\n';
  } else {
    dimacs_export(ex.formula, out.stream());
  }
  if (!cfg.out.empty())
    std::cerr << "wrote " << ex.formula.clause_count() << " clauses over "
              << ex.formula.variable_count() << " variables to " << cfg.out
              << '\n';
  if (!valid) throw CertificationFailure("occurrence bounds violated");
  return 0;
}

int cmd_check_shearer(const Config& cfg, const std::string& graph_path,
                      const std::string& cnf_path, const std::string& p_text) {
  DepGraph g;
  ProbabilityVector p;
  if (!graph_path.empty() == !cnf_path.empty())
    throw InvalidArgument("give exactly one of --graph and --cnf");
  if (!graph_path.empty()) {
    std::ifstream in(graph_path);
    if (!in) throw InvalidArgument("cannot open '" + graph_path + "'");
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw ParseError(0, e.what());
    }
    g = graph_from_json(j);
    if (j.contains("p")) {
      for (const auto& x : j.at("p")) p.push_back(parse_rational(x.get<std::string>()));
    } else {
      if (p_text.empty())
        throw InvalidArgument("graph input needs --p or a \"p\" array");
      p.assign(g.vertex_count(), parse_rational(p_text));
    }
  } else {
    auto f = read_cnf(cnf_path);
    auto events = events_from_formula(f);
    g = lopsidependency_graph(events);
    if (p_text.empty()) {
      for (const auto& e : events) p.push_back(e.uniform_probability());
    } else {
      p.assign(g.vertex_count(), parse_rational(p_text));
    }
  }
  ShearerOptions opt;
  opt.vertex_guard = cfg.guard_vertices;
  auto verdict = shearer_check(g, p, opt);
  Output out(cfg.out);
  if (cfg.json()) {
    out.stream() << to_json(verdict).dump(2) << '\n';
  } else if (verdict.status == ShearerStatus::satisfied) {
    out.stream() << "SATISFIED sets_checked=" << verdict.sets_checked << '\n';
  } else {
    out.stream() << "VIOLATED witness=" << set_text(*verdict.witness)
                 << " Q=" << verdict.witness_value->get_str() << '\n';
  }
  return 0;
}

int cmd_hj(const Config& cfg, std::size_t j, std::size_t k, std::size_t L) {
  auto st = recurrence_sr(j, k, L);
  const auto p = inverse_power_of_two(k);
  bool all_agree = true;
  Json rows = Json::array();
  std::ostringstream text;
  for (std::size_t t = 0; t <= j; ++t) {
    for (bool prime : {false, true}) {
      const char* name = prime ? "r" : "s";
      const auto& rec =
          prime ? st.r(static_cast<long>(t)) : st.s(static_cast<long>(t));
      const std::size_t n =
          prime ? hprime_vertex_count(t, k, L) : h_vertex_count(t, k, L);
      Json row{{"quantity", name}, {"t", t}, {"vertices", n},
               {"recurrence", rec.get_str()}};
      text << name << '_' << t << " = " << rec.get_str() << " (recurrence)";
      if (n <= cfg.guard_vertices) {
        auto h = prime ? build_Hprime(t, k, L) : build_H(t, k, L);
        auto brute = independence_polynomial(
            h.graph, ProbabilityVector(n, p), cfg.guard_vertices);
        const bool agree = brute == rec;
        all_agree = all_agree && agree;
        row["brute_force"] = brute.get_str();
        row["agree"] = agree;
        text << (agree ? " = " : " != ") << brute.get_str()
             << " (brute force), " << (agree ? "AGREE" : "DISAGREE");
      } else {
        row["brute_force"] = nullptr;
        text << ", brute force skipped (" << n << " vertices above guard)";
      }
      text << '\n';
      rows.push_back(row);
    }
  }
  Output out(cfg.out);
  if (cfg.json())
    out.stream() << Json{{"parameters", {{"j", j}, {"k", k}, {"L", L}}},
                         {"p", p.get_str()},
                         {"values", rows},
                         {"all_agree", all_agree}}
                        .dump(2)
                 << '\n';
  else
    out.stream() << text.str();
  return all_agree ? 0 : kExitDisagree;
}

int cmd_fixedpoint(const Config& cfg, std::size_t k, std::size_t L,
                   std::size_t max_iter, long tol) {
  FixedPointOptions opt;
  opt.precision = cfg.prec();
  opt.max_iterations = max_iter;
  opt.tolerance_log2 = tol;
  auto r = fixed_point_iteration(k, L, opt);
  Output out(cfg.out);
  if (cfg.json()) {
    out.stream() << to_json(r).dump(2) << '\n';
  } else {
    auto& os = out.stream();
    os << "k=" << k << " L=" << L << " precision=" << opt.precision << '\n';
    os << "threshold 2^(-1/(L-1)) in " << r.threshold.to_string(25) << '\n';
    os << "verdict: " << to_string(r.outcome) << " at step " << r.step << '\n';
    if (r.limit) os << "limit in " << r.limit->to_string(25) << '\n';
    os << "last a_j in " << r.trajectory.back().to_string(25) << '\n';
    os << "note: " << r.note << '\n';
  }
  return r.outcome == FixedPointOutcome::inconclusive
             ? exit_code(ErrorKind::certification)
             : 0;
}

int cmd_mt(const Config& cfg, const std::string& cnf, std::uint64_t seed,
           const std::string& rule, std::uint64_t max_steps) {
  auto f = read_cnf(cnf);
  MtOptions opt;
  opt.seed = seed;
  opt.rule = parse_selection_rule(rule);
  opt.max_steps = max_steps;
  auto r = run_mt(f, opt);
  const bool verified = r.stats.terminated && r.assignment.satisfies(f);
  Output out(cfg.out);
  if (cfg.json()) {
    Json j = to_json(r.stats);
    j["verified"] = verified;
    if (r.stats.terminated) j["assignment"] = r.assignment.to_string();
    out.stream() << j.dump(2) << '\n';
  } else {
    auto& os = out.stream();
    os << (r.stats.terminated ? "TERMINATED" : "STEP LIMIT REACHED")
       << " resamples=" << r.stats.total_resamples << " seed=" << seed
       << " rule=" << to_string(opt.rule) << '\n';
    if (r.stats.terminated)
      os << "assignment: " << r.assignment.to_string() << '\n'
         << "verified: " << (verified ? "yes" : "no") << '\n';
  }
  if (r.stats.terminated && !verified)
    throw CertificationFailure("returned assignment does not satisfy the formula");
  return r.stats.terminated ? 0 : kExitNotTerminated;
}

int cmd_bounds(const Config& cfg, std::size_t k) {
  ShearerBoundOptions sopt;
  sopt.precision = cfg.prec();
  const auto lll = f_lll(k, cfg.prec());
  const auto shearer = shearer_upper_bound(k, sopt);
  const auto mt = f_mt(k);
  const auto gap = gap_inequality(k, cfg.prec());
  std::optional<AlphaReport> alpha;
  if (mt >= 1) alpha = mt_ksat_alpha(k, mt.get_ui(), cfg.prec());
  Output out(cfg.out);
  if (cfg.json()) {
    Json j{{"k", k},
           {"F_LLL", lll.get_str()},
           {"F_Shearer", to_json(shearer)},
           {"F_MT", mt.get_str()},
           {"gap_inequality", to_json(gap)}};
    if (alpha) j["alpha_at_F_MT"] = to_json(*alpha);
    out.stream() << j.dump(2) << '\n';
  } else {
    auto& os = out.stream();
    os << "k=" << k << '\n'
       << "F_LLL\t" << lll.get_str() << '\n'
       << "F_Shearer\t" << shearer.value.get_str() << "\t(max l(t) in ["
       << shearer.max_lower.to_string(20) << ", "
       << shearer.max_upper.to_string(20) << "] at t ~ "
       << shearer.argmax.to_string(12) << ")\n"
       << "F_MT\t" << mt.get_str() << '\n'
       << "gap\t" << gap.lhs << " >= " << gap.rhs << '\t'
       << (gap.satisfied ? "true" : "false") << '\n';
    if (alpha)
      os << "alpha(L=F_MT)\t" << alpha->alpha.mid().to_string(20) << '\t'
         << (alpha->satisfied ? "satisfied" : "not satisfied") << '\n';
  }
  return 0;
}

int cmd_graph(const Config& cfg, const std::string& cnf, std::size_t k,
              std::size_t L, std::size_t r, const std::string& kind) {
  Formula f = cnf.empty()
                  ? build_extremal_formula(k, L, r, cfg.guard_clauses).formula
                  : read_cnf(cnf);
  auto events = events_from_formula(f);
  DepGraph g;
  if (kind == "lopsided")
    g = lopsidependency_graph(events);
  else if (kind == "dependency")
    g = dependency_graph(events);
  else
    throw InvalidArgument("--kind must be lopsided or dependency");
  Output out(cfg.out);
  if (cfg.json())
    out.stream() << edge_list_json(g).dump() << '\n';
  else
    out.stream() << to_adjacency_text(g);
  return 0;
}

int cmd_embed(const Config& cfg, std::size_t j, std::size_t k, std::size_t L) {
  auto e = embed_H_in_G(j, k, L, cfg.guard_clauses);
  Output out(cfg.out);
  if (cfg.json()) {
    out.stream() << Json{{"parameters", {{"j", j}, {"k", k}, {"L", L}}},
                         {"stages", e.stages},
                         {"clauses", e.instance.formula.clause_count()},
                         {"vertex_to_clause", e.vertex_to_clause},
                         {"verified", e.verified}}
                        .dump(2)
                 << '\n';
  } else {
    out.stream() << "H_" << j << " (" << e.h.graph.vertex_count()
                 << " vertices) into " << e.instance.formula.clause_count()
                 << " clauses after " << e.stages << " stages: "
                 << (e.verified ? "VERIFIED" : "NOT AN INDUCED EMBEDDING")
                 << '\n';
  }
  if (!e.verified) throw CertificationFailure("embedding check failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact LLL criteria for bounded-occurrence k-SAT"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--precision", cfg.precision, "MPFR precision in bits")
      ->envname("LLLSEP_PRECISION")
      ->check(CLI::Range(64L, 1L << 20))
      ->capture_default_str();
  app.add_option("--guard-vertices", cfg.guard_vertices,
                 "largest graph handled by exact polynomial evaluation")
      ->envname("LLLSEP_GUARD_VERTICES")
      ->check(CLI::Range(std::size_t{1}, std::size_t{64}))
      ->capture_default_str();
  app.add_option("--guard-clauses", cfg.guard_clauses,
                 "largest formula the constructions may build")
      ->envname("LLLSEP_GUARD_CLAUSES")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"tsv", "json"}))
      ->capture_default_str();
  app.add_option("--out", cfg.out, "write output to this file");
  app.add_option("--jobs", cfg.jobs, "parallel rows for the table")
      ->check(CLI::Range(1U, 1024U));

  std::size_t k = 0, L = 0, r = 0, j = 0, kmin = 9, kmax = 20;
  std::uint64_t seed = 0, max_steps = 1000000;
  std::size_t max_iter = 100000;
  long tol = -80;
  bool header = false;
  std::string rule = "first", cnf, graph, p_text, kind = "lopsided";
  std::function<int()> action;

  auto* table = app.add_subcommand("table", "F_LLL, F~_Shearer and F_MT per k");
  table->add_option("--kmin", kmin)->capture_default_str();
  table->add_option("--kmax", kmax)->capture_default_str();
  table->add_option("--k", k, "single row (overrides --kmin/--kmax)");
  table->add_flag("--header", header, "print a column header");
  table->callback([&] {
    if (k != 0) kmin = kmax = k;
    action = [&] { return cmd_table(cfg, kmin, kmax, header); };
  });

  auto* construct = app.add_subcommand("construct", "expanded formula as DIMACS");
  construct->add_option("--k", k)->required();
  construct->add_option("--L", L)->required();
  construct->add_option("--r", r, "expansion stages")->required();
  construct->callback([&] { action = [&] { return cmd_construct(cfg, k, L, r); }; });

  auto* check = app.add_subcommand("check-shearer", "Shearer's criterion");
  check->add_option("--graph", graph, "graph JSON {vertices, edges[, p]}");
  check->add_option("--cnf", cnf, "DIMACS formula; uses its lopsidependency graph");
  check->add_option("--p", p_text, "uniform probability, e.g. 1/4");
  check->callback([&] {
    action = [&] { return cmd_check_shearer(cfg, graph, cnf, p_text); };
  });

  auto* hj = app.add_subcommand("hj", "s_t, r_t by recurrence and brute force");
  hj->add_option("--j", j)->required();
  hj->add_option("--k", k)->required();
  hj->add_option("--L", L)->required();
  hj->callback([&] { action = [&] { return cmd_hj(cfg, j, k, L); }; });

  auto* fixedpoint = app.add_subcommand("fixedpoint", "iterate a_j = g(a_{j-1})");
  fixedpoint->add_option("--k", k)->required();
  fixedpoint->add_option("--L", L)->required();
  fixedpoint->add_option("--max-iter", max_iter)->capture_default_str();
  fixedpoint->add_option("--tolerance-log2", tol)->capture_default_str();
  fixedpoint->callback([&] {
    action = [&] { return cmd_fixedpoint(cfg, k, L, max_iter, tol); };
  });

  auto* mt = app.add_subcommand("mt", "run the resampling algorithm");
  mt->add_option("cnf", cnf, "DIMACS formula")->required();
  mt->add_option("--seed", seed)->capture_default_str();
  mt->add_option("--rule", rule, "first | random | lowest-probability")
      ->capture_default_str();
  mt->add_option("--max-steps", max_steps)->capture_default_str();
  mt->callback([&] {
    action = [&] { return cmd_mt(cfg, cnf, seed, rule, max_steps); };
  });

  auto* bounds = app.add_subcommand("bounds", "all bounds for one k");
  bounds->add_option("--k", k)->required();
  bounds->callback([&] { action = [&] { return cmd_bounds(cfg, k); }; });

  auto* graph_cmd = app.add_subcommand("graph", "export a dependency graph");
  graph_cmd->add_option("--cnf", cnf, "DIMACS formula");
  graph_cmd->add_option("--k", k);
  graph_cmd->add_option("--L", L);
  graph_cmd->add_option("--r", r);
  graph_cmd->add_option("--kind", kind, "lopsided | dependency")
      ->capture_default_str();
  graph_cmd->callback([&] {
    action = [&] { return cmd_graph(cfg, cnf, k, L, r, kind); };
  });

  auto* embed = app.add_subcommand("embed", "embed H_j into the expanded formula");
  embed->add_option("--j", j)->required();
  embed->add_option("--k", k)->required();
  embed->add_option("--L", L)->required();
  embed->callback([&] { action = [&] { return cmd_embed(cfg, j, k, L); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    return action();
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
