#include "cli.hpp"

#include "cayley/dpp.hpp"
#include "cayley/error.hpp"
#include "cayley/polynomials.hpp"
#include "cayley/quadrature.hpp"
#include "cayley/toeplitz.hpp"
#include "cayley/transform.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace cayley::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kCommands = {"transform", "convolve", "spectrum", "norms", "sample", "verify", "rigidity"};

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ValidationError("bad integer in list: '" + tok + "'");
    }
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// A symbol given as phi, as exact alpha values, or through a JSON file.
struct Operand {
  std::optional<SymbolFunction> phi;
  std::optional<RadialSymbol> alpha;
};

Operand resolve_operand(const std::string& phi, const std::string& alpha, const std::string& file, int kappa) {
  if (!alpha.empty() && !phi.empty()) throw ValidationError("give either a phi or an alpha symbol, not both");
  if (!alpha.empty()) return {std::nullopt, parse_alpha_list(alpha, kappa)};
  if (!phi.empty()) return {parse_symbol_spec(phi, kappa), std::nullopt};
  if (!file.empty()) {
    json j;
    try {
      j = json::parse(read_file(file));
    } catch (const json::parse_error& e) {
      throw ValidationError("symbol file '" + file + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw ValidationError("symbol file must hold a JSON object");
    if (j.contains("phi")) return {parse_symbol_spec(j["phi"].get<std::string>(), kappa), std::nullopt};
    if (j.contains("alpha")) {
      const auto& a = j["alpha"];
      if (a.is_string()) return {std::nullopt, parse_alpha_list(a.get<std::string>(), kappa)};
      std::string joined;
      for (const auto& v : a) joined += (joined.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
      return {std::nullopt, parse_alpha_list(joined, kappa)};
    }
    if (j.contains("values")) {
      auto sym = radial_symbol_from_json(j);
      if (sym.kappa() != kappa) throw ValidationError("symbol file kappa does not match --kappa");
      return {std::nullopt, std::move(sym)};
    }
    throw ValidationError("symbol file needs a 'phi', 'alpha' or 'values' key");
  }
  throw ValidationError("no symbol given (use --phi, --alpha or --phi-file)");
}

RadialSymbol to_radial(const Operand& op, int kappa, int n_max, int quad_nodes) {
  if (op.alpha) return *op.alpha;
  return hat(*op.phi, kappa, n_max, make_quadrature(kappa, quad_nodes));
}

json radial_json(const RadialSymbol& alpha, int pad_to, const std::string& hash) {
  json j = to_json(alpha);
  if (alpha.is_exact()) {
    while (static_cast<int>(j["values"].size()) < pad_to) j["values"].push_back("0");
  }
  j["config_hash"] = hash;
  return j;
}

std::string csv_header(const std::string& hash) { return "# config_hash=" + hash + "\n"; }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Context {
  const RunConfig& config;
  std::string hash;
  fs::path dir;
  std::vector<std::string> artifacts;
  std::ostream& out;

  void emit(const std::string& name, const std::string& content) {
    write_file(dir / name, content);
    artifacts.push_back(name);
  }
};

int cmd_transform(Context& ctx) {
  const auto& c = ctx.config;
  const auto op = resolve_operand(c.phi, c.alpha, c.symbol_file, c.kappa);
  if (!op.phi) throw ValidationError("transform needs a phi symbol");
  const auto alpha = to_radial(op, c.kappa, c.nmax, c.quad_nodes);
  const auto j = radial_json(alpha, c.nmax + 1, ctx.hash);
  ctx.emit("alpha.json", j.dump(2) + "\n");
  ctx.out << "alpha(0.." << c.nmax << ") = " << j["values"].dump() << "\n";
  return kOk;
}

int cmd_convolve(Context& ctx) {
  const auto& c = ctx.config;
  const auto a = to_radial(resolve_operand(c.phi, c.alpha, c.symbol_file, c.kappa), c.kappa, c.nmax, c.quad_nodes);
  const auto b = to_radial(resolve_operand(c.phi2, c.alpha2, "", c.kappa), c.kappa, c.nmax, c.quad_nodes);
  ConvolveOptions opts;
  if (c.tail_tol > 0) opts.max_tail_bound = c.tail_tol;
  const auto r = convolve(a, b, opts);
  auto j = radial_json(r.symbol, 0, ctx.hash);
  j["tail_bound"] = r.tail_bound;
  ctx.emit("convolution.json", j.dump(2) + "\n");
  ctx.out << "(a * b) = " << j["values"].dump() << "\ntail bound " << r.tail_bound << "\n";
  return kOk;
}

int cmd_spectrum(Context& ctx) {
  const auto& c = ctx.config;
  const auto alpha = to_radial(resolve_operand(c.phi, c.alpha, c.symbol_file, c.kappa), c.kappa, 2 * c.radius, c.quad_nodes);
  const auto op = build_matrix(alpha, enumerate_ball(c.kappa, c.radius, c.vertex_budget));
  const auto eig = spectrum(op);
  std::string csv = csv_header(ctx.hash) + "index,eigenvalue\n";
  for (std::size_t i = 0; i < eig.size(); ++i) csv += std::to_string(i) + "," + fmt(eig[i]) + "\n";
  ctx.emit("matrix.csv", csv_header(ctx.hash) + matrix_to_csv(op.matrix()));
  ctx.emit("spectrum.csv", csv);
  auto meta = metadata_json(op);
  meta["config_hash"] = ctx.hash;
  meta["max_residual"] = op.eigen().max_residual;
  ctx.emit("operator.json", meta.dump(2) + "\n");
  ctx.out << "dimension " << op.dim() << ", eigenvalues in [" << fmt(eig.front()) << ", " << fmt(eig.back()) << "]\n";
  return kOk;
}

int cmd_norms(Context& ctx) {
  const auto& c = ctx.config;
  const auto alpha = to_radial(resolve_operand(c.phi, c.alpha, c.symbol_file, c.kappa), c.kappa, 2 * c.radius, c.quad_nodes);
  std::vector<int> radii = c.radii;
  if (radii.empty()) {
    for (int r = 0; r <= c.radius; ++r) radii.push_back(r);
  }
  const auto est = operator_norm_estimate(alpha, c.kappa, radii, c.vertex_budget);
  const auto check = radial_norm_check(alpha, c.kappa, c.radius, c.vertex_budget);
  json j;
  j["config_hash"] = ctx.hash;
  j["symbol"] = to_json(alpha);
  j["estimates"] = json::array();
  for (std::size_t i = 0; i < radii.size(); ++i) j["estimates"].push_back({{"radius", radii[i]}, {"norm", est[i]}});
  j["radial_check"] = {{"radius", c.radius},
                       {"full_norm", check.full_norm},
                       {"radial_norm", check.radial_norm},
                       {"gap", check.gap},
                       {"truncation_norm", check.truncation_norm},
                       {"tail_bound", check.tail_bound}};
  ctx.emit("norms.json", j.dump(2) + "\n");
  for (std::size_t i = 0; i < radii.size(); ++i) ctx.out << "||P_B T P_B|| at R=" << radii[i] << ": " << fmt(est[i]) << "\n";
  ctx.out << "R=" << c.radius << ": full norm " << fmt(check.full_norm) << ", radial norm " << fmt(check.radial_norm)
          << ", gap " << fmt(check.gap) << "\n";
  return kOk;
}

DppKernel kernel_for(const RunConfig& c) {
  const auto op = resolve_operand(c.phi, c.alpha, c.symbol_file, c.kappa);
  if (!op.phi) throw ValidationError("point-process commands need a phi symbol with 0 <= phi <= 1");
  return validate_kernel(*op.phi, c.kappa, c.radius, make_quadrature(c.kappa, c.quad_nodes), c.vertex_budget);
}

SamplerKind sampler_kind(const std::string& s) {
  return s == "sequential" ? SamplerKind::sequential : SamplerKind::spectral;
}

std::string samples_artifact(const std::vector<Configuration>& samples, const RunConfig& c, const std::string& hash) {
  json header = {{"config_hash", hash}, {"kappa", c.kappa}, {"radius", c.radius}, {"seed", c.seed},
                 {"samples", c.samples}, {"sampler", c.sampler}};
  return json{{"header", header}}.dump() + "\n" + samples_to_jsonl(samples);
}

int cmd_sample(Context& ctx) {
  const auto& c = ctx.config;
  const auto kernel = kernel_for(c);
  const auto samples = sample(kernel, {c.seed, c.samples, sampler_kind(c.sampler)});
  ctx.emit("samples.jsonl", samples_artifact(samples, c, ctx.hash));
  double mean = 0.0;
  for (const auto& s : samples) mean += static_cast<double>(s.size());
  mean /= std::max<std::size_t>(1, samples.size());
  ctx.out << samples.size() << " samples on " << kernel.size() << " vertices, mean size " << fmt(mean)
          << " (expected " << fmt(kernel.expected_count()) << ")\n";
  return kOk;
}

int cmd_verify(Context& ctx) {
  const auto& c = ctx.config;
  if (c.samples < 10000) throw ValidationError("verify needs --samples >= 10000");
  const auto kernel = kernel_for(c);
  const auto samples = sample(kernel, {c.seed, c.samples, sampler_kind(c.sampler)});
  const auto lambdas = singletons_and_pairs(kernel.ball(), 2);
  const auto report = verify_correlations(kernel, samples, lambdas, c.sigma);
  ctx.emit("samples.jsonl", samples_artifact(samples, c, ctx.hash));
  ctx.emit("correlations.csv", csv_header(ctx.hash) + report.to_csv());
  std::size_t failed = 0;
  for (const auto& r : report.rows) failed += r.pass ? 0 : 1;
  ctx.out << (report.pass ? "PASS" : "FAIL") << ": " << report.rows.size() - failed << "/" << report.rows.size()
          << " inclusion probabilities within " << c.sigma << " standard errors over " << samples.size() << " samples\n";
  return report.pass ? kOk : kFailed;
}

int cmd_rigidity(Context& ctx) {
  const auto& c = ctx.config;
  const auto op = resolve_operand(c.phi, c.alpha, c.symbol_file, c.kappa);
  if (!op.phi || !op.phi->is_step()) throw ValidationError("rigidity needs an indicator symbol, e.g. indicator:(0,c)");
  const auto& s = std::get<StepSymbol>(op.phi->variant());
  if (s.values.size() != 1 || s.values[0] != 1.0) throw ValidationError("rigidity needs a single-interval indicator");
  std::vector<int> radii = c.radii;
  if (radii.empty()) {
    for (int r = 2; r <= c.radius; ++r) radii.push_back(r);
  }
  const auto rows = rigidity_probe(c.kappa, s.breakpoints[0], s.breakpoints[1], radii,
                                   make_quadrature(c.kappa, c.quad_nodes), c.vertex_budget);
  std::string csv = csv_header(ctx.hash) + "radius,region_radius,region_size,mean,variance\n";
  for (const auto& r : rows) {
    csv += std::to_string(r.radius) + "," + std::to_string(r.region_radius) + "," + std::to_string(r.region_size) + "," +
           fmt(r.mean) + "," + fmt(r.variance) + "\n";
    ctx.out << "R=" << r.radius << " |B_" << r.region_radius << "|=" << r.region_size << " var=" << fmt(r.variance) << "\n";
  }
  ctx.emit("rigidity.csv", csv);
  return kOk;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

json RunConfig::to_json() const {
  return {{"command", command}, {"kappa", kappa},       {"radius", radius},       {"phi", phi},
          {"alpha", alpha},     {"phi2", phi2},         {"alpha2", alpha2},       {"symbol_file", symbol_file},
          {"nmax", nmax},       {"quad_nodes", quad_nodes}, {"seed", seed},       {"samples", samples},
          {"sampler", sampler}, {"radii", radii},       {"sigma", sigma},         {"tail_tol", tail_tol},
          {"vertex_budget", vertex_budget}};
}

void RunConfig::validate() const {
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
    throw ValidationError("unknown command '" + command + "'");
  }
  if (kappa < 1) throw ValidationError("kappa must be >= 1");
  if (radius < 0) throw ValidationError("radius must be >= 0");
  if (nmax < 0 || nmax > kDefaultDegreeCap) throw ValidationError("nmax must lie in [0, " + std::to_string(kDefaultDegreeCap) + "]");
  if (quad_nodes < 2) throw ValidationError("quad-nodes must be >= 2");
  if (sampler != "spectral" && sampler != "sequential") throw ValidationError("sampler must be 'spectral' or 'sequential'");
  if (!(sigma > 0)) throw ValidationError("sigma must be positive");
  if (tail_tol < 0) throw ValidationError("tail-tol must be >= 0");
  if (vertex_budget == 0) throw ValidationError("vertex budget must be positive");
  for (int r : radii) {
    if (r < 0) throw ValidationError("radii must be >= 0");
  }
}

RunConfig config_from_json(const json& j, RunConfig base) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "command") base.command = value.get<std::string>();
      else if (key == "kappa") base.kappa = value.get<int>();
      else if (key == "radius") base.radius = value.get<int>();
      else if (key == "phi") base.phi = value.get<std::string>();
      else if (key == "alpha") base.alpha = value.get<std::string>();
      else if (key == "phi2") base.phi2 = value.get<std::string>();
      else if (key == "alpha2") base.alpha2 = value.get<std::string>();
      else if (key == "symbol_file") base.symbol_file = value.get<std::string>();
      else if (key == "nmax") base.nmax = value.get<int>();
      else if (key == "quad_nodes") base.quad_nodes = value.get<int>();
      else if (key == "seed") base.seed = value.get<std::uint64_t>();
      else if (key == "samples") base.samples = value.get<std::size_t>();
      else if (key == "sampler") base.sampler = value.get<std::string>();
      else if (key == "radii") base.radii = value.get<std::vector<int>>();
      else if (key == "sigma") base.sigma = value.get<double>();
      else if (key == "tail_tol") base.tail_tol = value.get<double>();
      else if (key == "vertex_budget") base.vertex_budget = value.get<std::size_t>();
      else if (key == "out") base.out = value.get<std::string>();
      else throw ValidationError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad config value: ") + e.what());
  }
  return base;
}

std::string config_hash(const RunConfig& config) { return fnv1a_hex(config.to_json().dump()); }

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    Context ctx{config, config_hash(config), fs::path(config.out), {}, out};
    fs::create_directories(ctx.dir);
    int code = kOk;
    if (config.command == "transform") code = cmd_transform(ctx);
    else if (config.command == "convolve") code = cmd_convolve(ctx);
    else if (config.command == "spectrum") code = cmd_spectrum(ctx);
    else if (config.command == "norms") code = cmd_norms(ctx);
    else if (config.command == "sample") code = cmd_sample(ctx);
    else if (config.command == "verify") code = cmd_verify(ctx);
    else code = cmd_rigidity(ctx);

    const json manifest = {
        {"command", config.command},
        {"version", kVersion},
        {"config", config.to_json()},
        {"config_hash", ctx.hash},
        {"tolerances",
         {{"quadrature_nodes", config.quad_nodes},
          {"kernel_clamp", DppKernel::kTolerance},
          {"kernel_reject", DppKernel::kRejectTolerance},
          {"eigen_residual_relative", 1e-8},
          {"diagonal_floor", kDiagonalFloor},
          {"correlation_sigma", config.sigma},
          {"tail_tol", config.tail_tol}}},
        {"artifacts", ctx.artifacts},
        {"exit_code", code},
        {"created_at", utc_now()}};
    write_file(ctx.dir / "manifest.json", manifest.dump(2) + "\n");
    return code;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const NumericError& e) {
    err << "numeric certification failed: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailed;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial Toeplitz operators and invariant determinantal point processes on Cayley trees", "cayley"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  for (const auto& name : kCommands) app.add_subcommand(name)->fallthrough();

  json flags = json::object();
  std::string config_file;
  bool dry_run = false;
  int kappa = 0, radius = 0, nmax = 0, quad_nodes = 0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double sigma = 0, tail_tol = 0;
  std::string phi, alpha, phi2, alpha2, symbol_file, sampler, radii, out_dir;

  app.add_option("--config", config_file, "JSON file with config keys; flags override it");
  app.add_flag("--dry-run", dry_run, "Print the resolved config and exit");
  auto* o_kappa = app.add_option("--kappa", kappa, "Tree parameter: every vertex has kappa+1 neighbours");
  auto* o_radius = app.add_option("--radius", radius, "Ball radius R");
  auto* o_phi = app.add_option("--phi", phi, "Symbol: poly:c0,c1,... | step:(a,b)=v;... | indicator:(a,b) | step:a=x");
  auto* o_alpha = app.add_option("--alpha", alpha, "Exact radial symbol values a0,a1,...");
  auto* o_phi2 = app.add_option("--phi2", phi2, "Second symbol for convolve");
  auto* o_alpha2 = app.add_option("--alpha2", alpha2, "Second radial symbol for convolve");
  auto* o_file = app.add_option("--phi-file,--symbol-file", symbol_file, "JSON file with a 'phi', 'alpha' or 'values' key");
  auto* o_nmax = app.add_option("--nmax", nmax, "Highest transform coefficient");
  auto* o_quad = app.add_option("--quad-nodes", quad_nodes, "Quadrature nodes N");
  auto* o_seed = app.add_option("--seed", seed, "Random seed");
  auto* o_samples = app.add_option("--samples", samples, "Number of samples");
  auto* o_sampler = app.add_option("--sampler", sampler, "spectral | sequential");
  auto* o_radii = app.add_option("--radii", radii, "Comma-separated radii for norms/rigidity");
  auto* o_sigma = app.add_option("--sigma", sigma, "Acceptance width in standard errors");
  auto* o_tail = app.add_option("--tail-tol", tail_tol, "Reject numeric convolutions with a larger truncation bound");
  auto* o_out = app.add_option("--out", out_dir, "Output directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }

  try {
    RunConfig config;
    if (const char* budget = std::getenv("CAYLEY_VERTEX_BUDGET")) {
      try {
        config.vertex_budget = std::stoull(budget);
      } catch (const std::exception&) {
        throw ValidationError(std::string("CAYLEY_VERTEX_BUDGET is not a number: ") + budget);
      }
    }
    if (!config_file.empty()) {
      json file;
      try {
        file = json::parse(read_file(config_file));
      } catch (const json::parse_error& e) {
        throw ValidationError("config file is not valid JSON: " + std::string(e.what()));
      }
      config = config_from_json(file, config);
    }
    for (auto* sub : app.get_subcommands()) config.command = sub->get_name();
    if (o_kappa->count()) flags["kappa"] = kappa;
    if (o_radius->count()) flags["radius"] = radius;
    if (o_phi->count()) flags["phi"] = phi;
    if (o_alpha->count()) flags["alpha"] = alpha;
    if (o_phi2->count()) flags["phi2"] = phi2;
    if (o_alpha2->count()) flags["alpha2"] = alpha2;
    if (o_file->count()) flags["symbol_file"] = symbol_file;
    if (o_nmax->count()) flags["nmax"] = nmax;
    if (o_quad->count()) flags["quad_nodes"] = quad_nodes;
    if (o_seed->count()) flags["seed"] = seed;
    if (o_samples->count()) flags["samples"] = samples;
    if (o_sampler->count()) flags["sampler"] = sampler;
    if (o_radii->count()) flags["radii"] = parse_int_list(radii);
    if (o_sigma->count()) flags["sigma"] = sigma;
    if (o_tail->count()) flags["tail_tol"] = tail_tol;
    if (o_out->count()) flags["out"] = out_dir;
    config = config_from_json(flags, config);
    config.validate();
    if (dry_run) {
      json resolved = config.to_json();
      resolved["out"] = config.out;
      resolved["config_hash"] = config_hash(config);
      out << resolved.dump(2) << "\n";
      return kOk;
    }
    return run(config, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
}

}  // namespace cayley::cli
