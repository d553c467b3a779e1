#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "stqp/report.hpp"

namespace fs = std::filesystem;
using namespace stqp;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

fs::path scratch() {
  auto d = fs::temp_directory_path() / ("stqp_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Run run(const std::string& args) {
  const auto out = scratch() / "stdout.txt";
  const std::string cmd = std::string(STQP_CLI) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return Run{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

std::string fixture_path(const std::string& name) { return std::string(STQP_FIXTURE_DIR) + "/" + name + ".txt"; }

fs::path write(const std::string& name, const std::string& text) {
  const auto p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST(Report, DoublesKeepSeventeenDigits) {
  const double v = 0.1 + 0.2;
  const auto text = dump_json(Json{{"v", v}});
  EXPECT_EQ(Json::parse(text).at("v").get<double>(), v);
  EXPECT_NE(text.find("0.30000000000000004"), std::string::npos);
}

TEST(Report, GraphRoundTrip) {
  const auto g = Graph::cycle(6);
  EXPECT_EQ(parse_graph(format_graph(g)), g);
}

TEST(Report, GraphRejectsBadInput) {
  EXPECT_THROW(parse_graph("{\"n\": 3, \"edges\": [[1, 4]]}"), ParseError);
  EXPECT_THROW(parse_graph("{\"n\": 3, \"edges\": [[2, 2]]}"), ParseError);
  EXPECT_THROW(parse_graph("{\"edges\": []}"), ParseError);
  EXPECT_THROW(parse_graph("not json"), ParseError);
}

TEST(Cli, SolveReportsNu) {
  const auto r = run("solve " + fixture_path("ex2"));
  ASSERT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j.at("schema"), 1);
  EXPECT_NEAR(j.at("nu").get<double>(), 0.4, 1e-12);
}

TEST(Cli, ClassifyHorn) {
  const auto r = run("classify " + fixture_path("horn"));
  ASSERT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j.at("exactness").at("verdict"), "positive-gap");
  EXPECT_NEAR(j.at("exactness").at("ell").get<double>(), -0.1056, 1e-3);
}

TEST(Cli, RelaxWritesJsonFile) {
  const auto out = scratch() / "relax.json";
  const auto r = run("--json-out " + out.string() + " relax " + fixture_path("ex3"));
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NEAR(Json::parse(slurp(out)).at("ell").get<double>(), 0.5, 1e-6);
}

TEST(Cli, ThetaFiveCycle) {
  const auto g = write("c5.json", "{\"n\": 5, \"edges\": [[1,2],[2,3],[3,4],[4,5],[5,1]]}");
  const auto r = run("theta " + g.string());
  ASSERT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j.at("omega").get<double>(), 2.0);
  EXPECT_NEAR(j.at("theta").get<double>(), 2.2360, 1e-4);
  EXPECT_TRUE(j.at("sandwich_holds").get<bool>());
}

TEST(Cli, ThetaCompleteGraph) {
  const auto g = write("k5.json", format_graph(Graph::complete(5)));
  const auto j = Json::parse(run("theta " + g.string()).out);
  EXPECT_EQ(j.at("omega").get<double>(), 5.0);
  EXPECT_NEAR(j.at("theta").get<double>(), 5.0, 1e-6);
  EXPECT_NEAR(j.at("theta_prime").get<double>(), 5.0, 1e-6);
}

TEST(Cli, AnalyzeGraph) {
  const auto g = write("c5b.json", format_graph(Graph::cycle(5)));
  const auto j = Json::parse(run("analyze-graph " + g.string()).out);
  EXPECT_FALSE(j.at("perfect").get<bool>());
  EXPECT_FALSE(j.at("spn_completable").get<bool>());
  EXPECT_EQ(j.at("maximal_cliques").size(), 5u);
}

TEST(Cli, GenerateIsDeterministicAndVerified) {
  const auto recipe = write("gap.json", "{\"kind\": \"gap\", \"n\": 6}");
  const auto a = scratch() / "gen_a", b = scratch() / "gen_b";
  ASSERT_EQ(run("--seed 5 generate " + recipe.string() + " --count 3 --out-dir " + a.string()).code, 0);
  ASSERT_EQ(run("--seed 5 generate " + recipe.string() + " --count 3 --out-dir " + b.string()).code, 0);
  EXPECT_EQ(slurp(a / "manifest.json"), slurp(b / "manifest.json"));
  EXPECT_EQ(slurp(a / "instance_002.txt"), slurp(b / "instance_002.txt"));
  const auto m = Json::parse(slurp(a / "manifest.json"));
  EXPECT_TRUE(m.at("all_pass").get<bool>());
  for (const auto& item : m.at("instances")) EXPECT_EQ(item.at("verdict"), "positive-gap");
}

TEST(Cli, GapDefaultsReproduceHorn) {
  const auto recipe = write("horn.json", "{\"kind\": \"gap\", \"n\": 5}");
  const auto dir = scratch() / "gen_horn";
  ASSERT_EQ(run("generate " + recipe.string() + " --out-dir " + dir.string()).code, 0);
  const auto q = read_matrix(dir / "instance_000.txt");
  const double lambda = Json::parse(slurp(dir / "manifest.json")).at("instances")[0].at("promised_nu").get<double>();
  EXPECT_LE((shift(q, -lambda) - read_matrix(fixture_path("horn"))).max_abs(), 1e-12);
}

TEST(Cli, MgwCompleteGraphIsIdentity) {
  const auto recipe = write("k4.json", "{\"kind\": \"Mgw\", \"graph\": " + format_graph(Graph::complete(4)) + "}");
  const auto dir = scratch() / "gen_k4";
  ASSERT_EQ(run("generate " + recipe.string() + " --out-dir " + dir.string()).code, 0);
  EXPECT_EQ(read_matrix(dir / "instance_000.txt"), SymMatrix::identity(4));
}

TEST(Cli, DeterministicClassify) {
  EXPECT_EQ(run("classify " + fixture_path("ex6")).out, run("classify " + fixture_path("ex6")).out);
}

TEST(Cli, TimestampOnlyBehindFlag) {
  EXPECT_EQ(run("solve " + fixture_path("ex1")).out.find("generated_at"), std::string::npos);
  EXPECT_NE(run("--timestamp solve " + fixture_path("ex1")).out.find("generated_at"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("solve /nonexistent/file.txt").code, 2);
  EXPECT_EQ(run("solve " + write("bad.txt", "2\n1 2\n3 4\n").string()).code, 2);
  EXPECT_EQ(run("--cap-n 30 solve " + fixture_path("ex1")).code, 3);
  EXPECT_EQ(run("--cap-n 4 solve " + fixture_path("ex1")).code, 3);
  EXPECT_EQ(run("theta " + write("big.json", format_graph(Graph(51))).string()).code, 3);
}
