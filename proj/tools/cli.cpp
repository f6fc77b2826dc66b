#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eot/error.hpp"
#include "eot/numeric_text.hpp"
#include "eot/price_path.hpp"
#include "eot/report_io.hpp"
#include "eot/simulator.hpp"

namespace eot::cli {

namespace {

double number_flag(const std::string& flag, const std::string& text) {
  const auto v = parse_double(text);
  if (!v) throw InputError(flag + ": '" + text + "' is not a number");
  return *v;
}

std::vector<double> number_list(const std::string& flag,
                                const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    values.push_back(number_flag(flag, text.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

std::vector<std::string> string_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) items.push_back(item);
  return items;
}

/// A single value broadcasts to `n` assets; otherwise the count must match.
std::vector<double> per_asset(const std::string& flag, const std::string& text,
                              std::size_t n) {
  auto values = number_list(flag, text);
  if (values.size() == 1 && n > 1) values.assign(n, values.front());
  if (values.size() != n) {
    throw InputError(flag + ": expected " + std::to_string(n) +
                     " values, got " + std::to_string(values.size()));
  }
  return values;
}

void write_file(const std::string& file, const std::string& content) {
  if (file == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + file + "'");
  out << content;
  if (!out) throw InputError("write failed for '" + file + "'");
}

std::string read_file(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InputError("cannot open '" + file + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct GenerateArgs {
  bool gbm = false;
  std::string deterministic;
  std::size_t assets = 2;
  std::size_t steps = 1000;
  std::string mu = "0";
  std::string sigma = "0";
  std::string initial = "1";
  std::string correlation;
  std::string dt = "1";
  std::string params;
  std::string labels;
  std::uint64_t seed = 0;
  std::string out;
};

struct SimulateArgs {
  std::string path;
  std::string weights;
  std::string policy = "full";
  std::string capital = "1";
  std::string out;
  std::string steps_csv;
  bool record_steps = false;
  bool no_settle = false;
  std::string tol_identity;
  std::string tol_entropy;
  std::string tol_equilibrium;
};

struct VerifyArgs {
  std::string report;
  bool per_step = false;
};

struct CompareArgs {
  std::string path;
  std::string weights;
  std::string policies;
  std::string capital = "1";
  std::string format = "text";
  std::string out = "-";
  bool no_settle = false;
};

int do_generate(const GenerateArgs& a, std::ostream& out) {
  if (a.gbm == !a.deterministic.empty()) {
    throw InputError("generate: pass exactly one of --gbm or --deterministic");
  }
  PathSpec spec;
  if (a.gbm) {
    GbmSpec g;
    g.steps = a.steps;
    g.seed = a.seed;
    g.mu = per_asset("--mu", a.mu, a.assets);
    g.sigma = per_asset("--sigma", a.sigma, a.assets);
    g.initial_prices = per_asset("--initial", a.initial, a.assets);
    g.dt = number_flag("--dt", a.dt);
    if (!a.correlation.empty()) {
      g.correlation = number_list("--correlation", a.correlation);
    }
    if (!a.labels.empty()) g.labels = string_list(a.labels);
    spec = g;
  } else {
    DeterministicSpec d;
    d.kind = parse_deterministic_kind(a.deterministic);
    d.steps = a.steps;
    if (!a.params.empty()) d.params = number_list("--params", a.params);
    spec = d;
  }
  const auto path = generate(spec);
  std::ostringstream csv;
  write_csv(path, csv);
  write_file(a.out, csv.str());
  if (a.out != "-") {
    out << "wrote " << path.size() << " rows x " << path.assets()
        << " assets to " << a.out << "\n";
  }
  return kExitOk;
}

SimulationConfig make_config(const std::string& weights,
                             const std::vector<std::string>& labels,
                             const std::string& policy,
                             const std::string& capital, bool no_settle) {
  SimulationConfig config{
      AssetWeights(number_list("--weights", weights), labels)};
  config.policy = RebalancePolicy::parse(policy);
  config.capital = number_flag("--capital", capital);
  config.settle_at_end = !no_settle;
  return config;
}

PricePath load_path(const std::string& file) { return load_csv_file(file); }

void check_columns(const PricePath& path, const std::string& weights) {
  const auto n = number_list("--weights", weights).size();
  if (n != path.assets()) {
    throw InputError("--weights: " + std::to_string(n) +
                     " weights for a path with " +
                     std::to_string(path.assets()) + " asset columns");
  }
}

int do_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto path = load_path(a.path);
  check_columns(path, a.weights);
  auto config =
      make_config(a.weights, path.labels(), a.policy, a.capital, a.no_settle);
  config.record_steps = a.record_steps || !a.steps_csv.empty();
  if (!a.tol_identity.empty()) {
    config.tolerances.identity = number_flag("--tol-identity", a.tol_identity);
  }
  if (!a.tol_entropy.empty()) {
    config.tolerances.entropy = number_flag("--tol-entropy", a.tol_entropy);
  }
  if (!a.tol_equilibrium.empty()) {
    config.tolerances.equilibrium =
        number_flag("--tol-equilibrium", a.tol_equilibrium);
  }
  const auto report = run(path, config);
  write_file(a.out, report_to_json(report));
  if (!a.steps_csv.empty()) {
    std::ostringstream csv;
    write_step_csv(report, csv);
    write_file(a.steps_csv, csv.str());
  }
  if (a.out != "-") {
    const auto& s = report.summary;
    out << "ln_T_ratio=" << format_double(s.ln_T_ratio)
        << " ln_P_ratio=" << format_double(s.ln_P_ratio)
        << " delta_S=" << format_double(s.delta_S)
        << " identity_residual=" << format_double(s.identity_residual) << "\n";
  }
  return kExitOk;
}

int do_verify(const VerifyArgs& a, std::ostream& out) {
  const auto report = report_from_json(read_file(a.report));
  const auto verdict = verify_report(report, a.per_step);
  for (const auto& [name, c] : verdict.checks) {
    out << (c.skipped ? "SKIP" : c.pass ? "PASS" : "FAIL") << "  " << name
        << "  slack=" << format_double(c.slack);
    if (!c.detail.empty()) out << "  " << c.detail;
    out << "\n";
  }
  return verdict.all_pass() ? kExitOk : kExitCheckFailed;
}

int do_compare(const CompareArgs& a) {
  if (a.format != "csv" && a.format != "text") {
    throw InputError("--format: expected csv or text, got '" + a.format + "'");
  }
  const auto path = load_path(a.path);
  check_columns(path, a.weights);
  std::vector<SimulationConfig> configs;
  for (const auto& policy : string_list(a.policies)) {
    configs.push_back(
        make_config(a.weights, path.labels(), policy, a.capital, a.no_settle));
  }
  if (configs.empty()) throw InputError("--policies: no policy given");
  const auto rows = compare_policies(path, configs);
  std::ostringstream table;
  if (a.format == "csv") {
    write_comparison_csv(rows, table);
  } else {
    write_comparison_text(rows, table);
  }
  write_file(a.out, table.str());
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Entropy-oriented trading simulator and verifier", "eot"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "Write a price path CSV");
  generate_cmd->add_flag("--gbm", gen.gbm, "Geometric Brownian motion path");
  generate_cmd->add_option("--deterministic", gen.deterministic,
                           "exp-ramp | sinusoid | reciprocal-pair");
  generate_cmd->add_option("--assets", gen.assets, "Number of GBM assets");
  generate_cmd->add_option("--steps", gen.steps, "Number of ticks after t=0");
  generate_cmd->add_option("--mu", gen.mu, "Per-asset drift per tick");
  generate_cmd->add_option("--sigma", gen.sigma, "Per-asset volatility");
  generate_cmd->add_option("--initial", gen.initial, "Initial prices");
  generate_cmd->add_option("--correlation", gen.correlation,
                           "Row-major correlation matrix");
  generate_cmd->add_option("--dt", gen.dt, "Tick length");
  generate_cmd->add_option("--params", gen.params,
                           "Deterministic path parameters");
  generate_cmd->add_option("--labels", gen.labels, "Asset labels");
  generate_cmd->add_option("--seed", gen.seed, "Generator seed");
  generate_cmd->add_option("--out", gen.out, "Output CSV ('-' for stdout)")
      ->required();

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run the tick loop");
  simulate_cmd->add_option("--path", sim.path, "Price path CSV")->required();
  simulate_cmd->add_option("--weights", sim.weights, "Comma-separated weights")
      ->required();
  simulate_cmd->add_option("--policy", sim.policy,
                           "full | buyhold | fractional:<a> | threshold:<b>");
  simulate_cmd->add_option("--capital", sim.capital, "Initial capital");
  simulate_cmd->add_option("--out", sim.out, "Report JSON ('-' for stdout)")
      ->required();
  simulate_cmd->add_option("--steps-csv", sim.steps_csv,
                           "Per-step CSV dump (implies --record-steps)");
  simulate_cmd->add_flag("--record-steps", sim.record_steps,
                         "Include per-step records in the report");
  simulate_cmd->add_flag("--no-settle", sim.no_settle,
                         "Skip the final settlement rebalance");
  simulate_cmd->add_option("--tol-identity", sim.tol_identity);
  simulate_cmd->add_option("--tol-entropy", sim.tol_entropy);
  simulate_cmd->add_option("--tol-equilibrium", sim.tol_equilibrium);

  VerifyArgs ver;
  auto* verify_cmd = app.add_subcommand("verify", "Re-check a report");
  verify_cmd->add_option("--report", ver.report, "Report JSON")->required();
  verify_cmd->add_flag("--per-step", ver.per_step,
                       "Require step records and check them");

  CompareArgs cmp;
  auto* compare_cmd = app.add_subcommand("compare", "Tabulate several policies");
  compare_cmd->add_option("--path", cmp.path, "Price path CSV")->required();
  compare_cmd->add_option("--weights", cmp.weights, "Comma-separated weights")
      ->required();
  compare_cmd->add_option("--policies", cmp.policies,
                          "Comma-separated policy list")
      ->required();
  compare_cmd->add_option("--capital", cmp.capital, "Initial capital");
  compare_cmd->add_option("--format", cmp.format, "csv | text");
  compare_cmd->add_option("--out", cmp.out, "Output file ('-' for stdout)");
  compare_cmd->add_flag("--no-settle", cmp.no_settle);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "eot: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (*generate_cmd) return do_generate(gen, out);
    if (*simulate_cmd) return do_simulate(sim, out);
    if (*verify_cmd) return do_verify(ver, out);
    if (*compare_cmd) return do_compare(cmp);
  } catch (const InputError& e) {
    err << "eot: " << e.what() << "\n";
    return kExitInputError;
  } catch (const InvariantBreach& e) {
    err << "eot: invariant breach: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitInputError;
}

}  // namespace eot::cli
