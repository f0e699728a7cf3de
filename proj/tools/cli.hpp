#pragma once

// Command-line front end. Every command resolves a RunConfig (config file
// first, flags on top), validates it before computing anything, writes its
// artifacts to the output directory and records them in manifest.json.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace cayley::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int {
  kOk = 0,
  kFailed = 1,  // verification ran and did not pass, or an unexpected error
  kValidation = 2,
  kBudget = 3,
  kNumeric = 4,
};

struct RunConfig {
  std::string command;
  int kappa = 2;
  int radius = 4;
  std::string phi;        // symbol mini-grammar
  std::string alpha;      // exact radial values "a0,a1,..."
  std::string phi2;       // second operand for convolve
  std::string alpha2;
  std::string symbol_file;
  int nmax = 16;
  int quad_nodes = 256;
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  std::string sampler = "spectral";
  std::vector<int> radii;
  double sigma = 4.0;
  double tail_tol = 0.0;  // 0 disables the tail check
  std::size_t vertex_budget = 100000;
  std::string out = ".";

  /// Canonical JSON of everything that influences the artifacts.
  nlohmann::json to_json() const;
  /// Throws ValidationError on an out-of-range field.
  void validate() const;
};

/// Builds a RunConfig from a JSON object, rejecting unknown keys.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});

/// FNV-1a 64 of the canonical config JSON, as 16 hex digits.
std::string config_hash(const RunConfig& config);

/// Parses argv-style arguments (without the program name) and runs.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Runs an already-resolved config.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace cayley::cli
