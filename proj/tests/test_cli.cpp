#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

using namespace cayley::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {
struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("cayley_cli_" + std::to_string(std::rand()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
  static inline int counter = 0;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int call(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int rc = run(args, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return rc;
}
}  // namespace

TEST_CASE("transform writes exact coefficients padded to nmax") {
  TempDir d;
  REQUIRE(call({"transform", "--kappa", "2", "--phi", "poly:0,1", "--nmax", "8", "--out", d.str()}) == kOk);
  const auto j = json::parse(slurp(d.path / "alpha.json"));
  CHECK(j["values"].size() == 9);
  CHECK(j["values"][0] == "0");
  CHECK(j["values"][1] == "1/3");
  CHECK(j["values"][8] == "0");
  const auto m = json::parse(slurp(d.path / "manifest.json"));
  CHECK(m["config_hash"] == j["config_hash"]);
  CHECK(m["version"] == kVersion);
  CHECK(m["artifacts"] == json::array({"alpha.json"}));
  CHECK(m["tolerances"].contains("quadrature_nodes"));
  CHECK(m.contains("created_at"));
}

TEST_CASE("norms reports the counterexample gap") {
  TempDir d;
  std::string out;
  REQUIRE(call({"norms", "--kappa", "1", "--alpha", "1,0,-0.5", "--radius", "1", "--out", d.str()}, &out) == kOk);
  const auto j = json::parse(slurp(d.path / "norms.json"));
  CHECK(j["radial_check"]["full_norm"].get<double>() == doctest::Approx(std::sqrt(2.5)));
  CHECK(j["radial_check"]["radial_norm"].get<double>() == doctest::Approx(std::sqrt(1.5)));
  CHECK(out.find("gap") != std::string::npos);
}

TEST_CASE("every command produces deterministic artifacts") {
  const std::vector<std::vector<std::string>> commands = {
      {"transform", "--kappa", "3", "--phi", "indicator:(0,c)", "--nmax", "6"},
      {"convolve", "--kappa", "2", "--alpha", "1,1/2", "--phi2", "poly:0,0,1"},
      {"convolve", "--kappa", "2", "--phi", "indicator:(0,c)", "--phi2", "indicator:(-c,0.2)", "--nmax", "10"},
      {"spectrum", "--kappa", "2", "--radius", "3", "--phi", "poly:0,1"},
      {"norms", "--kappa", "2", "--radius", "3", "--alpha", "0,1", "--radii", "1,2,3"},
      {"sample", "--kappa", "2", "--radius", "3", "--phi", "indicator:(0,c)", "--samples", "20", "--seed", "4"},
      {"sample", "--kappa", "1", "--radius", "5", "--phi", "step:a=0.5", "--samples", "20", "--sampler", "sequential"},
      {"rigidity", "--kappa", "1", "--radius", "6", "--phi", "step:a=0.5"},
  };
  for (auto args : commands) {
    CAPTURE(args[0]);
    TempDir a, b;
    auto args_a = args, args_b = args;
    args_a.insert(args_a.end(), {"--out", a.str()});
    args_b.insert(args_b.end(), {"--out", b.str()});
    REQUIRE(call(args_a) == kOk);
    REQUIRE(call(args_b) == kOk);
    const auto manifest = json::parse(slurp(a.path / "manifest.json"));
    const std::string hash = manifest["config_hash"];
    for (const auto& name : manifest["artifacts"]) {
      const std::string file = name;
      CAPTURE(file);
      const auto text = slurp(a.path / file);
      CHECK(text == slurp(b.path / file));
      CHECK(text.find(hash) != std::string::npos);
    }
  }
}

TEST_CASE("verify passes on the sine kernel") {
  TempDir d;
  std::string out;
  const int rc = call({"verify", "--kappa", "1", "--phi", "step:a=0.5", "--radius", "10", "--samples", "20000",
                       "--seed", "7", "--out", d.str()},
                      &out);
  CHECK(rc == kOk);
  CHECK(out.rfind("PASS", 0) == 0);
  const auto csv = slurp(d.path / "correlations.csv");
  CHECK(csv.rfind("# config_hash=", 0) == 0);
  CHECK(csv.find("FAIL") == std::string::npos);
  CHECK(call({"verify", "--kappa", "1", "--phi", "step:a=0.5", "--samples", "100", "--out", d.str()}) == kValidation);
}

TEST_CASE("exit codes") {
  TempDir d;
  std::string err;
  CHECK(call({"transform", "--kappa", "2", "--phi", "poly:1,q", "--out", d.str()}, nullptr, &err) == kValidation);
  CHECK(err.find("'q'") != std::string::npos);
  CHECK(call({"transform", "--kappa", "0", "--phi", "poly:1", "--out", d.str()}) == kValidation);
  CHECK(call({"bogus"}) == kValidation);
  CHECK(call({"transform", "--nope"}) == kValidation);
  CHECK(call({"spectrum", "--kappa", "2", "--radius", "20", "--phi", "poly:0,1", "--out", d.str()}) == kBudget);
  CHECK(call({"sample", "--kappa", "2", "--radius", "2", "--phi", "poly:0,2", "--out", d.str()}) == kNumeric);
  CHECK(call({"sample", "--kappa", "2", "--radius", "2", "--phi", "poly:1/2", "--sampler", "gibbs", "--out", d.str()}) ==
        kValidation);
}

TEST_CASE("vertex budget from the environment") {
  TempDir d;
  ::setenv("CAYLEY_VERTEX_BUDGET", "20", 1);
  CHECK(call({"spectrum", "--kappa", "2", "--radius", "3", "--phi", "poly:0,1", "--out", d.str()}) == kBudget);
  ::setenv("CAYLEY_VERTEX_BUDGET", "lots", 1);
  CHECK(call({"spectrum", "--kappa", "2", "--radius", "3", "--phi", "poly:0,1", "--out", d.str()}) == kValidation);
  ::unsetenv("CAYLEY_VERTEX_BUDGET");
  CHECK(call({"spectrum", "--kappa", "2", "--radius", "3", "--phi", "poly:0,1", "--out", d.str()}) == kOk);
}

TEST_CASE("config files, precedence and dry run") {
  TempDir d;
  const auto cfg = d.path / "run.json";
  std::ofstream(cfg) << R"({"command": "transform", "kappa": 3, "phi": "poly:0,1", "nmax": 4})";
  std::string out;
  REQUIRE(call({"transform", "--config", cfg.string(), "--kappa", "2", "--dry-run"}, &out) == kOk);
  const auto j = json::parse(out);
  CHECK(j["kappa"] == 2);
  CHECK(j["nmax"] == 4);
  CHECK(j["phi"] == "poly:0,1");

  std::ofstream(cfg) << R"({"kappa": 3, "colour": "red"})";
  std::string err;
  CHECK(call({"transform", "--config", cfg.string(), "--phi", "poly:1"}, nullptr, &err) == kValidation);
  CHECK(err.find("colour") != std::string::npos);
  std::ofstream(cfg) << R"({"kappa": "three"})";
  CHECK(call({"transform", "--config", cfg.string(), "--phi", "poly:1"}) == kValidation);
  std::ofstream(cfg) << "{not json";
  CHECK(call({"transform", "--config", cfg.string(), "--phi", "poly:1"}) == kValidation);
}

TEST_CASE("symbol files") {
  TempDir d;
  const auto f = d.path / "sym.json";
  std::ofstream(f) << R"({"phi": "poly:0,0,1"})";
  REQUIRE(call({"transform", "--kappa", "2", "--phi-file", f.string(), "--nmax", "2", "--out", d.str()}) == kOk);
  const auto j = json::parse(slurp(d.path / "alpha.json"));
  CHECK(j["values"] == json::array({"1/3", "0", "1/9"}));
  std::ofstream(f) << R"({"alpha": ["1", "0", "-1/2"]})";
  REQUIRE(call({"norms", "--kappa", "1", "--radius", "1", "--symbol-file", f.string(), "--out", d.str()}) == kOk);
}

TEST_CASE("config hash depends on the configuration only") {
  RunConfig a;
  a.command = "transform";
  a.phi = "poly:1";
  RunConfig b = a;
  b.out = "/elsewhere";
  CHECK(config_hash(a) == config_hash(b));
  b.kappa = 3;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a).size() == 16);
}
