#pragma once

#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"
#include "stqp/convexity.hpp"
#include "stqp/dnn.hpp"
#include "stqp/exact_solver.hpp"
#include "stqp/families.hpp"
#include "stqp/generators.hpp"
#include "stqp/graph.hpp"
#include "stqp/matrix_io.hpp"

namespace stqp {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline void dump_value(std::ostringstream& out, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v)) {
        out << format_double(v);
      } else {
        out << "null";
      }
      break;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        break;
      }
      out << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ',' << nl;
        first = false;
        out << pad << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
        dump_value(out, it.value(), indent, depth + 1);
      }
      out << nl << close << '}';
      break;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        break;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& v : j) flat = flat && !v.is_structured();
      if (flat) {
        out << '[';
        for (std::size_t k = 0; k < j.size(); ++k) {
          if (k) out << (indent > 0 ? ", " : ",");
          dump_value(out, j[k], indent, depth + 1);
        }
        out << ']';
        break;
      }
      out << '[' << nl;
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) out << ',' << nl;
        out << pad;
        dump_value(out, j[k], indent, depth + 1);
      }
      out << nl << close << ']';
      break;
    }
    default:
      out << j.dump();
  }
}

}  // namespace detail

/// Serializes with every floating value at 17 significant digits.
inline std::string dump_json(const Json& j, int indent = 2) {
  std::ostringstream out;
  detail::dump_value(out, j, indent, 0);
  out << '\n';
  return out.str();
}

inline Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

inline Json to_json(const SymMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.n(); ++i) {
    Json r = Json::array();
    for (std::size_t j = 0; j < m.n(); ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline Json to_json_one_based(const IndexSet& s) {
  Json a = Json::array();
  for (auto v : s) a.push_back(v + 1);
  return a;
}

inline Json to_json(const Graph& g) {
  Json edges = Json::array();
  for (const auto& [i, j] : g.edges()) edges.push_back(Json::array({i + 1, j + 1}));
  return Json{{"n", g.n()}, {"edges", edges}};
}

inline Graph graph_from_json(const Json& j) {
  try {
    const auto n = j.at("n").get<long long>();
    if (n <= 0) throw ParseError("graph: n must be positive");
    Graph g(static_cast<std::size_t>(n));
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ParseError("graph: each edge must be a pair");
      const auto a = e[0].get<long long>(), b = e[1].get<long long>();
      if (a < 1 || b < 1 || a > n || b > n) throw ParseError("graph: vertex out of range");
      if (a == b) throw ParseError("graph: loop edge");
      g.add_edge(static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1));
    }
    return g;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("graph: ") + e.what());
  }
}

inline Graph parse_graph(const std::string& text) {
  try {
    return graph_from_json(Json::parse(text));
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("graph: ") + e.what());
  }
}

inline std::string format_graph(const Graph& g) { return dump_json(to_json(g)); }

inline Json solve_json(const SymMatrix& q, const SolveResult& r) {
  Json mins = Json::array();
  for (std::size_t k = 0; k < r.minimizers.size(); ++k) {
    const auto& x = r.minimizers[k];
    const auto cert = check_kkt(q, x);
    mins.push_back(Json{{"x", to_json(x.x())},
                        {"support", to_json_one_based(x.support())},
                        {"s", to_json(r.multipliers[k])},
                        {"kkt", cert.has_value()}});
  }
  return Json{{"schema", kSchemaVersion}, {"command", "solve"}, {"n", q.n()}, {"nu", r.nu}, {"minimizers", mins}};
}

inline Json relax_json(const SymMatrix& q, const RelaxResult& r) {
  return Json{{"schema", kSchemaVersion},
              {"command", "relax"},
              {"n", q.n()},
              {"ell", r.ell},
              {"status", to_string(r.solver_status)},
              {"iterations", r.iterations},
              {"relative_gap", r.relative_gap},
              {"primal_objective", r.primal_objective},
              {"X", to_json(r.primal_X)},
              {"sigma", r.dual_sigma},
              {"P", to_json(r.P)},
              {"N", to_json(r.N)}};
}

inline Json exactness_json(const ExactnessReport& r) {
  Json j{{"n", r.Q.n()},
         {"nu", r.nu},
         {"ell", r.ell},
         {"gap", r.gap},
         {"verdict", to_string(r.verdict)}};
  j["witness_x"] = r.witness_x ? to_json(r.witness_x->x()) : Json(nullptr);
  j["lambda"] = r.lambda;
  j["P"] = to_json(r.P);
  j["N"] = to_json(r.N);
  j["margins"] = Json{{"spn_margin", r.gap_certificate.margin},
                      {"spn_verdict", to_string(r.gap_certificate.verdict)},
                      {"min_N_entry", r.N.min_entry()},
                      {"min_P_eigenvalue", r.P.min_eigenvalue()}};
  j["solver_stats"] = Json{{"status", to_string(r.relax.solver_status)},
                           {"iterations", r.relax.iterations},
                           {"relative_gap", r.relax.relative_gap}};
  return j;
}

inline Json families_json(const FamilyVerdict& f) {
  Json q3{{"member", f.q3.member}, {"step", f.q3.step}, {"kappa", f.q3.kappa}};
  if (f.q3.w.size()) q3["w"] = to_json(f.q3.w);
  q3["graph"] = to_json(f.q3.G);
  if (!f.q3.hole.empty()) q3["hole"] = to_json_one_based(f.q3.hole);
  return Json{{"in_Q1", f.q1.member},
              {"in_Q2", f.q2.member},
              {"in_Q3", f.q3.member},
              {"in_concave", f.concave},
              {"evidence",
               Json{{"Q1", Json{{"diag_index", f.q1.diag_index + 1}, {"min_entry", f.q1.min_entry}, {"min_diag", f.q1.min_diag}}},
                    {"Q2", Json{{"min_eigenvalue", f.q2.min_eigenvalue},
                                {"direction", to_json(f.q2.direction)},
                                {"curvature", f.q2.curvature}}},
                    {"Q3", q3}}}};
}

inline Json clique_bounds_json(const CliqueBounds& b) {
  Json table = Json::array();
  for (const auto& c : b.cliques)
    table.push_back(Json{{"clique", to_json_one_based(c.clique)}, {"ell", c.ell}, {"nu", c.nu}, {"status", to_string(c.status)}});
  return Json{{"ell_full", b.ell_full},
              {"ell_min_clique", b.ell_min_clique},
              {"nu_min_clique", b.nu_min_clique},
              {"nu_full", b.nu_full},
              {"first_tight", b.first_tight},
              {"second_tight", b.second_tight},
              {"cliques", table}};
}

// Recipe files.

inline Vector vector_from_json(const Json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = j[k].get<double>();
  return v;
}

inline Dense dense_from_json(const Json& j) {
  const auto r = static_cast<Eigen::Index>(j.size());
  const auto c = r ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Dense d(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(i)].size()) != c) throw ParseError("recipe: ragged matrix");
    for (Eigen::Index k = 0; k < c; ++k) d(i, k) = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].get<double>();
  }
  return d;
}

/// Recipe file: {"kind": "exact" | "gap" | "Mgw", "n": ..., "seed": ...} plus
/// optional fixed parts (x, K, N_pattern, lambda, B, C, perm, d, graph, w).
/// Parts left out are drawn at random from the seed.
struct RecipeSpec {
  RecipeKind kind = RecipeKind::exact;
  std::size_t n = 5;
  Json fixed;
};

inline RecipeSpec recipe_from_json(const Json& j) {
  try {
    RecipeSpec r;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "exact") {
      r.kind = RecipeKind::exact;
    } else if (kind == "gap") {
      r.kind = RecipeKind::gap;
    } else if (kind == "Mgw" || kind == "mgw") {
      r.kind = RecipeKind::mgw;
    } else {
      throw ParseError("recipe: unknown kind '" + kind + "'");
    }
    if (j.contains("n")) r.n = j.at("n").get<std::size_t>();
    if (j.contains("graph")) r.n = j.at("graph").at("n").get<std::size_t>();
    if (r.n == 0) throw ParseError("recipe: n must be positive");
    r.fixed = j;
    return r;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("recipe: ") + e.what());
  }
}

struct GeneratedInstance {
  SymMatrix Q;
  RecipeKind kind = RecipeKind::exact;
  double promised_nu = 0.0;
  std::optional<Exactness> promised_verdict;  // empty when the recipe promises none
  Json recipe;                                // fully resolved recipe
};

inline SymMatrix sym_from_json(const Json& j) { return SymMatrix::from_dense(dense_from_json(j)); }

/// Resolves a recipe spec into one instance, drawing missing parts from rng.
inline GeneratedInstance build_instance(const RecipeSpec& spec, std::mt19937_64& rng) {
  const Json& f = spec.fixed;
  GeneratedInstance out;
  out.kind = spec.kind;
  const std::size_t n = spec.n;
  try {
    switch (spec.kind) {
      case RecipeKind::exact: {
        auto r = random_exact_recipe(rng, n, f.value("density", 0.6), f.value("support_size", std::size_t{0}));
        if (f.contains("x")) r.x = SimplexPoint::project(vector_from_json(f.at("x")));
        if (f.contains("K")) r.K = sym_from_json(f.at("K"));
        if (f.contains("N_pattern")) r.N_pattern = sym_from_json(f.at("N_pattern"));
        if (f.contains("lambda")) r.lambda = f.at("lambda").get<double>();
        out.Q = gen_exact(r);
        out.promised_nu = r.lambda;
        out.promised_verdict = Exactness::exact;
        out.recipe = Json{{"kind", "exact"}, {"x", to_json(r.x.x())}, {"K", to_json(r.K)},
                          {"N_pattern", to_json(r.N_pattern)}, {"lambda", r.lambda}};
        break;
      }
      case RecipeKind::gap: {
        auto r = random_gap_recipe(rng, n);
        if (!f.value("randomize", false)) {
          std::iota(r.perm.begin(), r.perm.end(), std::size_t{0});
          r.d = Vector::Ones(static_cast<Eigen::Index>(n));
        }
        if (f.contains("B")) r.B = sym_from_json(f.at("B"));
        if (f.contains("C")) r.C = dense_from_json(f.at("C"));
        if (f.contains("perm")) {
          r.perm.clear();
          for (const auto& v : f.at("perm")) r.perm.push_back(v.get<std::size_t>() - 1);
        }
        if (f.contains("d")) r.d = vector_from_json(f.at("d"));
        if (f.contains("lambda")) r.lambda = f.at("lambda").get<double>();
        out.Q = gen_gap(r);
        out.promised_nu = r.lambda;
        out.promised_verdict = Exactness::positive_gap;
        Json perm = Json::array();
        for (auto v : r.perm) perm.push_back(v + 1);
        out.recipe = Json{{"kind", "gap"}, {"n", n}, {"perm", perm}, {"d", to_json(r.d)}, {"lambda", r.lambda}};
        if (n > 5) {
          out.recipe["B"] = to_json(r.B);
          Json c = Json::array();
          for (Eigen::Index i = 0; i < r.C.rows(); ++i) c.push_back(to_json(Vector(r.C.row(i).transpose())));
          out.recipe["C"] = c;
        }
        break;
      }
      case RecipeKind::mgw: {
        MgwRecipe r;
        r.G = f.contains("graph") ? graph_from_json(f.at("graph")) : random_graph(rng, n, f.value("density", 0.5));
        if (f.contains("w")) {
          r.w = vector_from_json(f.at("w"));
        } else {
          r.w = f.value("randomize", false) ? random_weights(rng, r.G.n()) : Vector::Ones(static_cast<Eigen::Index>(r.G.n()));
        }
        r.slacks = f.contains("slacks") ? sym_from_json(f.at("slacks")) : SymMatrix(r.G.n());
        out.Q = gen_Mgw(r);
        out.promised_nu = 1.0 / max_weight_clique(r.G, r.w).second;
        if (is_perfect(r.G).perfect) out.promised_verdict = Exactness::exact;
        out.recipe = Json{{"kind", "Mgw"}, {"graph", to_json(r.G)}, {"w", to_json(r.w)}};
        break;
      }
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("recipe: ") + e.what());
  }
  return out;
}

}  // namespace stqp
