// Command-line front end: solve, relax, classify, generate, theta, analyze-graph.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "stqp/stqp.hpp"

namespace fs = std::filesystem;
using namespace stqp;

namespace {

enum Exit { kOk = 0, kFailure = 1, kParse = 2, kCap = 3 };

struct RunConfig {
  std::string input;
  std::string json_out;
  std::string out_dir = ".";
  std::string weights;
  double tol = 1e-5;
  std::uint64_t seed = 1;
  std::size_t cap_n = kDefaultExactCap;
  std::size_t count = 1;
  bool verbose = false;
  bool timestamp = false;
  bool dot = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void emit(const RunConfig& cfg, Json j) {
  if (cfg.timestamp)
    j["generated_at"] = std::chrono::duration_cast<std::chrono::seconds>(
                            std::chrono::system_clock::now().time_since_epoch())
                            .count();
  const auto text = dump_json(j);
  if (cfg.json_out.empty()) {
    std::cout << text;
  } else {
    write_text_atomic(cfg.json_out, text);
  }
}

SolveOptions solve_options(const RunConfig& cfg) {
  if (cfg.cap_n > kMaxExactCap) throw CapExceeded("--cap-n above the supported maximum " + std::to_string(kMaxExactCap));
  SolveOptions o;
  o.cap_n = cfg.cap_n;
  return o;
}

ConicOptions conic_options(const RunConfig& cfg) {
  ConicOptions o;
  if (cfg.verbose) o.trace = &std::cerr;
  return o;
}

Vector read_weights(const RunConfig& cfg, std::size_t n) {
  if (cfg.weights.empty()) return Vector::Ones(static_cast<Eigen::Index>(n));
  std::string text = cfg.weights;
  if (fs::exists(text)) text = read_file(text);
  Json j;
  try {
    j = Json::parse(text.find('[') == std::string::npos ? "[" + text + "]" : text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("weights: ") + e.what());
  }
  if (!j.is_array() || j.size() != n) throw ParseError("weights: expected " + std::to_string(n) + " numbers");
  Vector w(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    if (!j[k].is_number()) throw ParseError("weights: non-numeric entry");
    w(static_cast<Eigen::Index>(k)) = j[k].get<double>();
  }
  return w;
}

int cmd_solve(const RunConfig& cfg) {
  const auto q = read_matrix(cfg.input);
  emit(cfg, solve_json(q, solve_stqp(q, solve_options(cfg))));
  return kOk;
}

int cmd_relax(const RunConfig& cfg) {
  const auto q = read_matrix(cfg.input);
  const auto r = ell(q, conic_options(cfg));
  emit(cfg, relax_json(q, r));
  return r.converged() ? kOk : kFailure;
}

Json classify_json(const SymMatrix& q, const RunConfig& cfg) {
  ClassifyOptions opt;
  opt.solve = solve_options(cfg);
  opt.conic = conic_options(cfg);
  opt.exact_tol = cfg.tol;
  const auto rep = classify_exactness(q, opt);
  Json j{{"schema", kSchemaVersion}, {"command", "classify"}};
  j["exactness"] = exactness_json(rep);
  const auto witness = search_exact_witness(q, rep.relax);
  j["exactness"]["dual_witness"] = witness ? to_json(witness->x()) : Json(nullptr);
  if (rep.witness_x) {
    if (auto special = special_support_exactness(q, *rep.witness_x, opt.solve))
      j["exactness"]["support_rule"] = to_string(*special);
  }
  j["families"] = families_json(family_verdict(q));
  const auto g = convexity_graph(q);
  Json graph{{"convexity_graph", to_json(g)}};
  Json cliques = Json::array();
  for (const auto& c : maximal_cliques(g)) cliques.push_back(to_json_one_based(c));
  graph["maximal_cliques"] = cliques;
  graph["clique_bounds"] = clique_bounds_json(clique_bounds(q, opt.solve, opt.conic));
  const auto comp = is_spn_completable(g);
  graph["spn_completable"] = comp.completable;
  if (!comp.completable) graph["odd_cycle"] = to_json_one_based(comp.cycle);
  graph["completion_verdict"] = to_string(spn_completable_exactness(q, opt.solve, opt.conic));
  j["graph"] = graph;
  return j;
}

int cmd_classify(const RunConfig& cfg) {
  const auto q = read_matrix(cfg.input);
  emit(cfg, classify_json(q, cfg));
  return kOk;
}

int cmd_generate(const RunConfig& cfg) {
  Json spec_json;
  try {
    spec_json = Json::parse(read_file(cfg.input));
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("recipe: ") + e.what());
  }
  const auto spec = recipe_from_json(spec_json);
  const std::uint64_t seed = spec_json.contains("seed") ? spec_json.at("seed").get<std::uint64_t>() : cfg.seed;
  std::mt19937_64 rng(seed);
  fs::create_directories(cfg.out_dir);
  ClassifyOptions copt;
  copt.solve = solve_options(cfg);
  copt.conic = conic_options(cfg);
  copt.exact_tol = cfg.tol;

  Json items = Json::array();
  std::vector<std::string> offenders;
  for (std::size_t k = 0; k < cfg.count; ++k) {
    const auto inst = build_instance(spec, rng);
    char name[32];
    std::snprintf(name, sizeof name, "instance_%03zu.txt", k);
    write_matrix(fs::path(cfg.out_dir) / name, inst.Q);
    const auto rep = classify_exactness(inst.Q, copt);
    const bool nu_ok = std::abs(rep.nu - inst.promised_nu) <= 1e-9 * std::max(1.0, std::abs(inst.promised_nu));
    const bool verdict_ok = !inst.promised_verdict || rep.verdict == *inst.promised_verdict;
    const bool pass = nu_ok && verdict_ok;
    if (!pass) offenders.push_back(name);
    Json item{{"file", name},
              {"recipe", inst.recipe},
              {"promised_nu", inst.promised_nu},
              {"promised_verdict", inst.promised_verdict ? Json(to_string(*inst.promised_verdict)) : Json(nullptr)},
              {"nu", rep.nu},
              {"ell", rep.ell},
              {"verdict", to_string(rep.verdict)},
              {"pass", pass}};
    items.push_back(std::move(item));
  }
  Json manifest{{"schema", kSchemaVersion},
                {"command", "generate"},
                {"kind", to_string(spec.kind)},
                {"seed", seed},
                {"count", cfg.count},
                {"instances", items},
                {"all_pass", offenders.empty()}};
  write_text_atomic(fs::path(cfg.out_dir) / "manifest.json", dump_json(manifest));
  emit(cfg, manifest);
  if (!offenders.empty()) {
    std::cerr << "verification failed:";
    for (const auto& o : offenders) std::cerr << ' ' << o;
    std::cerr << '\n';
    return kFailure;
  }
  return kOk;
}

int cmd_theta(const RunConfig& cfg) {
  const auto g = parse_graph(read_file(cfg.input));
  if (g.n() > 50) throw CapExceeded("theta: graph above the SDP size cap");
  const auto w = read_weights(cfg, g.n());
  const auto copt = conic_options(cfg);
  const auto [clique, omega] = max_weight_clique(g, w);
  const double th = theta(g.complement(), w, copt);
  const double thp = theta_prime(g.complement(), w, copt);
  emit(cfg, Json{{"schema", kSchemaVersion},
                 {"command", "theta"},
                 {"n", g.n()},
                 {"omega", omega},
                 {"clique", to_json_one_based(clique)},
                 {"theta", th},
                 {"theta_prime", thp},
                 {"sandwich_holds", omega <= thp + 1e-6 && thp <= th + 1e-6}});
  return kOk;
}

int cmd_analyze_graph(const RunConfig& cfg) {
  const auto g = parse_graph(read_file(cfg.input));
  if (cfg.dot) {
    std::cout << to_dot(g);
    return kOk;
  }
  Json cliques = Json::array();
  for (const auto& c : maximal_cliques(g)) cliques.push_back(to_json_one_based(c));
  Json j{{"schema", kSchemaVersion}, {"command", "analyze-graph"}, {"graph", to_json(g)}, {"maximal_cliques", cliques}};
  const auto perf = is_perfect(g);
  j["perfect"] = perf.perfect;
  if (!perf.perfect) j["odd_hole"] = Json{{"vertices", to_json_one_based(perf.hole)}, {"in_complement", perf.in_complement}};
  const auto comp = is_spn_completable(g);
  j["spn_completable"] = comp.completable;
  if (!comp.completable) j["odd_cycle"] = to_json_one_based(comp.cycle);
  emit(cfg, j);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Standard quadratic programs: exact solutions, DNN relaxations and exactness certificates"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--tol", cfg.tol, "Relative tolerance for the exact/gap verdict")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed for random generation");
  app.add_option("--cap-n", cfg.cap_n, "Dimension cap of the exact solver");
  app.add_option("--json-out", cfg.json_out, "Write the JSON report to this file");
  app.add_flag("--verbose", cfg.verbose, "Trace solver iterations on stderr");
  app.add_flag("--timestamp", cfg.timestamp, "Add a generation timestamp to reports");

  auto* solve = app.add_subcommand("solve", "Exact global minimum over the simplex");
  solve->add_option("matrix", cfg.input)->required();
  auto* relax = app.add_subcommand("relax", "Doubly nonnegative relaxation bound");
  relax->add_option("matrix", cfg.input)->required();
  auto* classify = app.add_subcommand("classify", "Exactness verdict, family tests and graph analysis");
  classify->add_option("matrix", cfg.input)->required();
  auto* generate = app.add_subcommand("generate", "Generate verified instances from a recipe");
  generate->add_option("recipe", cfg.input)->required();
  generate->add_option("--count", cfg.count, "Number of instances")->check(CLI::PositiveNumber);
  generate->add_option("--out-dir", cfg.out_dir, "Directory for matrices and manifest");
  auto* th = app.add_subcommand("theta", "Clique number and theta bounds of a graph");
  th->add_option("graph", cfg.input)->required();
  th->add_option("--weights", cfg.weights, "Weights as a JSON array, comma list, or file");
  auto* ag = app.add_subcommand("analyze-graph", "Cliques, perfection and SPN completability of a graph");
  ag->add_option("graph", cfg.input)->required();
  ag->add_flag("--dot", cfg.dot, "Print the graph in DOT format");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (*solve) return cmd_solve(cfg);
    if (*relax) return cmd_relax(cfg);
    if (*classify) return cmd_classify(cfg);
    if (*generate) return cmd_generate(cfg);
    if (*th) return cmd_theta(cfg);
    if (*ag) return cmd_analyze_graph(cfg);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
