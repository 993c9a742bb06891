#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "adaptdim/cli.hpp"
#include "adaptdim/dist.hpp"
#include "adaptdim/io.hpp"

using namespace adaptdim;
using cli::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("adaptdim_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "adaptdim");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::main_entry(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("digest is FNV-1a 64") {
  CHECK(io::digest("") == "cbf29ce484222325");
  CHECK(io::digest("a") == "af63dc4c8601ec8c");
}

TEST_CASE("spectrum and points CSV round trips") {
  const CovarianceSpectrum s({5, 2.5, 0.125});
  std::stringstream ss;
  io::write_spectrum_csv(ss, s);
  CHECK(ss.str().rfind("eigenvalue\n", 0) == 0);
  const auto back = io::read_spectrum_csv(ss);
  CHECK(std::vector<double>(back.eigenvalues().begin(), back.eigenvalues().end()) == std::vector<double>{5, 2.5, 0.125});

  std::stringstream bad("eigenvalue\n1\n2\n");
  CHECK_THROWS_AS(io::read_spectrum_csv(bad), ValidationError);

  const SampleMatrix x{{1.5, -2}, {0.1, 3e-7}};
  std::stringstream ps;
  io::write_points_csv(ps, x);
  CHECK(io::read_points_csv(ps).rows() == x.rows());
  std::stringstream hdr("x1,x2\n1,2\n3,4\n");
  CHECK(io::read_points_csv(hdr).m() == 2);
  std::stringstream ragged("1,2\n3\n");
  CHECK_THROWS_AS(io::read_points_csv(ragged), ValidationError);
}

TEST_CASE("distribution JSON round trip") {
  for (const auto& spec : {dist::spiky_example(5), dist::bernoulli_example(4), dist::gaussian_mixture_example(3, 2.0)}) {
    const json j = io::to_json(spec);
    const auto back = io::spec_from_json(j);
    CHECK(io::to_json(back) == j);
    CHECK(back.laws() == spec.laws());
    CHECK(back.variances() == spec.variances());
  }
  const json shorthand = {{"dimension", 3},
                          {"laws", {{"kind", "rademacher"}}},
                          {"variances", 2.0},
                          {"label_model", {{"kind", "coin"}, {"probability", 0.5}}}};
  const auto s = io::spec_from_json(shorthand);
  CHECK(s.dimension() == 3);
  CHECK(s.variances()[2] == 2.0);
  json typo = shorthand;
  typo["varainces"] = 1;
  CHECK_THROWS_AS(io::spec_from_json(typo), ValidationError);
}

TEST_CASE("configs round trip through JSON") {
  const std::vector<std::pair<std::string, json>> cases = {
      {"kgamma", {{"schema_version", 1}, {"spectrum", {4, 1, 1}}, {"gamma", 1.0}, {"alpha", 0.5}}},
      {"edge-check", {{"schema_version", 1}, {"distribution", {{"example", "bernoulli"}, {"d", 50}}}, {"beta", 0.5}}},
      {"learn-curve",
       {{"schema_version", 1},
        {"seed", 9},
        {"distribution", {{"example", "gaussian_mixture"}, {"d", 10}, {"v", 2}}},
        {"gamma", 1.0},
        {"m_grid", {2, 4}},
        {"learner", "generative"}}},
      {"sample-complexity",
       {{"schema_version", 1},
        {"distribution", io::to_json(dist::spiky_example(4))},
        {"gamma", 1.0},
        {"m_grid", {2}},
        {"epsilon", 0.2}}},
      {"reproduce-examples", {{"schema_version", 1}, {"budget_seconds", 30}}},
  };
  for (const auto& [command, j] : cases) {
    const auto cfg = cli::parse_config(command, j);
    const json once = cli::to_json(cfg);
    const auto again = cli::parse_config(command, once);
    CHECK(cli::to_json(again) == once);
  }
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(cli::parse_config("kgamma", json{{"spectrum", {1}}, {"gamma", 1}}), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config("kgamma", json{{"schema_version", 2}, {"spectrum", {1}}, {"gamma", 1}}),
                  cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config("kgamma", json{{"schema_version", 1}, {"spectrum", {1}}, {"gamma", 1}, {"gama", 1}}),
                  cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config("kgamma", json{{"schema_version", 1}, {"spectrum", {1, 2}}, {"gamma", 1}}),
                  cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config("kgamma", json{{"schema_version", 1}, {"command", "fat-dim"}, {"spectrum", {1}}, {"gamma", 1}}),
                  cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config("nope", json::object()), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config("learn-curve", json{{"schema_version", 1},
                                                        {"distribution", {{"example", "bernoulli"}, {"d", 4}}},
                                                        {"gamma", 1.0},
                                                        {"m_grid", {2}},
                                                        {"learner", "svm"}}),
                  cli::ConfigError);
}

TEST_CASE("command line runs and exit codes") {
  const fs::path dir = scratch("cli");
  SUBCASE("kgamma on the spiky spectrum file") {
    std::string csv = "eigenvalue\n1000\n";
    for (int i = 0; i < 1000; ++i) csv += "0.001\n";
    write_text(dir / "spiky.csv", csv);
    write_text(dir / "cfg.json", json{{"schema_version", 1}, {"spectrum_file", (dir / "spiky.csv").string()}, {"gamma", 1}}.dump());
    CHECK(invoke({"kgamma", "--config", (dir / "cfg.json").string(), "--out", (dir / "out").string()}) == 0);
    const json report = json::parse(read_text(dir / "out" / "report.json"));
    CHECK(report["summary"]["k"] == 1);
    CHECK(report["complete"] == true);
    const std::string csv_out = read_text(dir / "out" / "kgamma.csv");
    CHECK(csv_out.rfind("gamma,k,tail_sum\n1,1,", 0) == 0);
    CHECK(report["summary"]["tail_sum"].get<double>() == doctest::Approx(1.0));
  }
  SUBCASE("shatter-check on the scaled identity") {
    write_text(dir / "pts.csv", "1.4142135623730951,0\n0,1.4142135623730951\n");
    write_text(dir / "cfg.json",
               json{{"schema_version", 1}, {"points_file", (dir / "pts.csv").string()}, {"gamma", 1}, {"witnesses", true}}.dump());
    CHECK(invoke({"shatter-check", "--config", (dir / "cfg.json").string(), "--out", (dir / "out").string()}) == 0);
    const json cert = json::parse(read_text(dir / "out" / "certificate.json"));
    CHECK(cert["shattered"] == true);
    CHECK(cert["witnesses"].size() == 4);
  }
  SUBCASE("malformed JSON") {
    write_text(dir / "cfg.json", "{\"schema_version\": 1,");
    CHECK(invoke({"kgamma", "--config", (dir / "cfg.json").string(), "--out", (dir / "out").string()}) == 2);
    CHECK_FALSE(fs::exists(dir / "out"));
  }
  SUBCASE("missing config and bad flags") {
    CHECK(invoke({"kgamma", "--out", (dir / "out").string()}) == 2);
    CHECK(invoke({"kgamma", "--config", (dir / "absent.json").string()}) == 2);
    CHECK(invoke({"frobnicate"}) == 2);
    CHECK_FALSE(fs::exists(dir / "out"));
  }
  SUBCASE("runtime error") {
    write_text(dir / "pts.csv", "1,0\n0,1\n");
    write_text(dir / "cfg.json",
               json{{"schema_version", 1}, {"points_file", (dir / "pts.csv").string()}, {"gamma", 1}, {"cap", 1}}.dump());
    CHECK(invoke({"shatter-check", "--config", (dir / "cfg.json").string(), "--out", (dir / "out").string()}) == 3);
  }
  SUBCASE("overrides and determinism") {
    const json cfg{{"schema_version", 1},
                   {"distribution", {{"example", "bernoulli"}, {"d", 20}}},
                   {"gamma", 1.0},
                   {"m_grid", {2, 5, 9}},
                   {"trials", 30}};
    write_text(dir / "cfg.json", cfg.dump());
    CHECK(invoke({"eigen-prob", "--config", (dir / "cfg.json").string(), "--out", (dir / "a").string(), "--seed", "4"}) == 0);
    CHECK(invoke({"eigen-prob", "--config", (dir / "cfg.json").string(), "--out", (dir / "b").string(), "--seed", "4",
                  "--workers", "3"}) == 0);
    CHECK(read_text(dir / "a" / "eigen_prob.csv") == read_text(dir / "b" / "eigen_prob.csv"));
    const json report = json::parse(read_text(dir / "a" / "report.json"));
    CHECK(report["seed"] == 4);
    CHECK(report["inputs_digest"] == json::parse(read_text(dir / "b" / "report.json"))["inputs_digest"]);
  }
  fs::remove_all(dir);
}
