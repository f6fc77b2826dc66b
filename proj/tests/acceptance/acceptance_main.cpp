// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eot/entropy.hpp"
#include "eot/price_path.hpp"
#include "eot/simulator.hpp"
#include "eot/trade.hpp"
#include "oracle/naive_model.hpp"
#include "test_support.hpp"

namespace {

using namespace eot;
namespace fs = std::filesystem;

constexpr double kLn1_25 = 0.22314355131420976;

// Largest relative conservation error seen by any criterion 1-5 batch.
double g_max_conservation = 0.0;
std::size_t g_batches_checked = 0;

void note_conservation(const SimulationReport& r) {
  g_max_conservation = std::max(g_max_conservation, r.summary.max_conservation_error);
  for (const auto& s : r.steps) {
    if (s.trade_count > 0) ++g_batches_checked;
  }
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

SimulationConfig config(const std::vector<double>& w, RebalancePolicy policy) {
  SimulationConfig c{AssetWeights(w)};
  c.policy = policy;
  c.record_steps = true;
  return c;
}

std::vector<RebalancePolicy> criterion_policies() {
  return {RebalancePolicy::full(), RebalancePolicy::fractional(0.25),
          RebalancePolicy::threshold(0.05), RebalancePolicy::buy_and_hold()};
}

PricePath gbm_path(std::size_t assets, std::size_t steps, double sigma,
                   std::uint64_t seed) {
  GbmSpec g;
  g.mu.assign(assets, 0.0);
  g.sigma.assign(assets, sigma);
  g.initial_prices.assign(assets, 1.0);
  g.steps = steps;
  g.seed = seed;
  return generate(g);
}

Outcome ac1_worked_identity() {
  Outcome o;
  const PricePath path({0.0, 1.0},
                       {PriceVector({1.0, 1.0}), PriceVector({2.0, 0.5})},
                       {"A", "B"});
  const auto r = run(path, config({0.5, 0.5}, RebalancePolicy::full()));
  note_conservation(r);
  const auto& s = r.summary;
  o.require(std::fabs(s.ln_T_ratio - kLn1_25) <= 1e-12,
            "ln_T_ratio=" + num(s.ln_T_ratio));
  o.require(std::fabs(s.delta_S - kLn1_25) <= 1e-12, "delta_S=" + num(s.delta_S));
  o.require(std::fabs(s.ln_P_ratio) <= 1e-15, "ln_P_ratio=" + num(s.ln_P_ratio));
  o.detail = o.pass ? "ln_T_ratio=delta_S=" + num(s.delta_S) + ", ln_P_ratio=" +
                          num(s.ln_P_ratio)
                    : o.detail;
  return o;
}

Outcome ac2_step_identity() {
  Outcome o;
  const auto path = gbm_path(8, 10000, 0.02, 20240601);
  const std::vector<double> w(8, 0.125);
  double worst = 0.0;
  double slowest = 0.0;
  for (const auto& policy : criterion_policies()) {
    const auto start = std::chrono::steady_clock::now();
    const auto r = run(path, config(w, policy));
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    note_conservation(r);
    const auto v = verify_report(r, true);
    const double residual = v.find(kCheckStepIdentity)->slack;
    worst = std::max(worst, residual);
    slowest = std::max(slowest, seconds);
    o.require(residual <= 1e-9,
              policy.to_string() + " residual " + num(residual));
    o.require(seconds < 1.0, policy.to_string() + " took " + num(seconds) + " s");
  }
  if (o.pass) {
    o.detail = "max cumulative residual " + num(worst) + ", slowest run " +
               num(slowest) + " s";
  }
  return o;
}

Outcome ac3_second_law() {
  Outcome o;
  const std::vector<double> w(8, 0.125);
  double min_batch = INFINITY;
  double min_roi_slack = INFINITY;
  int runs = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto path = gbm_path(8, 1000, 0.02, 1000 + seed);
    for (const auto& policy : criterion_policies()) {
      const auto r = run(path, config(w, policy));
      ++runs;
      note_conservation(r);
      for (std::size_t k = 1; k < r.steps.size(); ++k) {
        const double d = r.steps[k].entropy - r.steps[k - 1].entropy;
        o.require(d >= -1e-12, "seed " + std::to_string(seed) + " " +
                                   policy.to_string() + " step " +
                                   std::to_string(k) + " dS=" + num(d));
      }
      min_batch = std::min(min_batch, r.summary.min_batch_entropy);
      o.require(r.summary.min_batch_entropy >= -1e-12,
                "batch entropy " + num(r.summary.min_batch_entropy));
      o.require(!r.verification.find(kCheckRoiBound)->skipped,
                "endpoint not in equilibrium");
      const double slack = r.summary.ln_T_ratio - r.summary.ln_P_ratio;
      min_roi_slack = std::min(min_roi_slack, slack);
      o.require(slack >= -1e-12, "ROI bound violated by " + num(-slack));
    }
  }
  if (o.pass) {
    o.detail = std::to_string(runs) + " runs; min batch entropy " +
               num(min_batch) + ", min ln(T_D/T_C)-ln(P_D/P_C) " +
               num(min_roi_slack);
  }
  return o;
}

Outcome ac4_reversible_limit() {
  Outcome o;
  // N ln cosh(1/N) from mpmath at 40 digits.
  const std::vector<std::pair<std::size_t, double>> expected{
      {64, 0.0078121821292557214},
      {128, 0.0039062102642168895},
      {256, 0.0019531200329664796},
      {512, 0.00097656187911891518}};
  std::vector<double> measured;
  for (const auto& [n, closed_form] : expected) {
    const auto path =
        generate(DeterministicSpec{DeterministicKind::kReciprocalPair, {}, n});
    const auto r = run(path, config({0.5, 0.5}, RebalancePolicy::full()));
    note_conservation(r);
    const double ds = r.summary.delta_S;
    measured.push_back(ds);
    o.require(std::fabs(ds - closed_form) <= 1e-10,
              "N=" + std::to_string(n) + " dS=" + num(ds));
    o.require(std::fabs(r.summary.ln_T_ratio - ds) <= 1e-10,
              "N=" + std::to_string(n) + " ln_T_ratio differs from dS");
    o.require(std::fabs(r.summary.ln_P_ratio) <= 1e-15, "ln_P_ratio nonzero");
  }
  std::string ratios;
  for (std::size_t i = 0; i + 1 < measured.size(); ++i) {
    const double ratio = measured[i] / measured[i + 1];
    o.require(ratio >= 1.8 && ratio <= 2.2, "ratio " + num(ratio));
    ratios += (i ? ", " : "") + num(ratio);
  }
  if (o.pass) o.detail = "dS(N)/dS(2N) = " + ratios;
  return o;
}

Outcome ac5_first_order_vs_exact() {
  Outcome o;
  const PortfolioState state(AssetWeights({0.5, 0.5}), PriceVector({2.0, 0.5}),
                             Holdings({0.5, 0.5}));
  auto exact_of = [&](double amount) {
    const auto post = apply_trade(state, PairwiseTrade(1, 0, amount));
    const double t_before = total_value(state);
    g_max_conservation = std::max(
        g_max_conservation, std::fabs(total_value(post) - t_before) / t_before);
    ++g_batches_checked;
    double s = 0.0;
    for (double d : trade_entropy_exact(state, post)) s += d;
    return s;
  };
  const double fo = pair_entropy_first_order(state, PairwiseTrade(1, 0, 0.375));
  const double ex = exact_of(0.375);
  o.require(std::fabs(fo - 0.5625) <= 1e-15, "first-order " + num(fo));
  o.require(std::fabs(ex - kLn1_25) <= 1e-12, "exact " + num(ex));

  const double a = 0.02;
  std::vector<double> gaps;
  for (double amount : {a, a / 2, a / 4}) {
    gaps.push_back(pair_entropy_first_order(state, PairwiseTrade(1, 0, amount)) -
                   exact_of(amount));
  }
  std::string ratios;
  for (std::size_t i = 0; i + 1 < gaps.size(); ++i) {
    const double ratio = gaps[i] / gaps[i + 1];
    o.require(ratio >= 3.2 && ratio <= 4.8, "gap ratio " + num(ratio));
    ratios += (i ? ", " : "") + num(ratio);
  }
  if (o.pass) {
    o.detail = "0.5625 vs " + num(ex) + "; gap ratios " + ratios;
  }
  return o;
}

Outcome ac6_legality() {
  Outcome o;
  const PortfolioState state(AssetWeights({0.5, 0.5}), PriceVector({2.0, 0.5}),
                             Holdings({0.5, 0.5}));
  const auto wrong_way = validate_trade(state, PairwiseTrade(0, 1, 0.1));
  o.require(!wrong_way.legal() &&
                *wrong_way.violation == Violation::kDirectionViolatesSecondLaw,
            "direction violation accepted");
  const auto overshoot = validate_trade(state, PairwiseTrade(1, 0, 0.6));
  o.require(!overshoot.legal() &&
                *overshoot.violation == Violation::kCrossingOvershoot,
            "crossing overshoot accepted");
  o.require(validate_trade(state, PairwiseTrade(1, 0, 0.375)).legal(),
            "touching trade rejected");

  const PortfolioState three(AssetWeights({0.5, 0.3, 0.2}),
                             PriceVector({1.0, 1.0, 1.0}),
                             Holdings({0.55, 0.27, 0.20}));
  const TradeBatch batch({PairwiseTrade(1, 0, 0.036), PairwiseTrade(2, 0, 0.02)});
  const auto r = apply_batch(three, batch);
  o.require(!r.applied() && r.failed_trade == 1u, "overshooting batch applied");
  o.require(r.state.holdings() == three.holdings(), "batch not all-or-nothing");
  bool threw = false;
  try {
    (void)apply_trade(state, PairwiseTrade(0, 1, 0.1));
  } catch (const std::logic_error&) {
    threw = true;
  }
  o.require(threw, "apply_trade accepted an illegal trade");
  if (o.pass) o.detail = "direction, crossing and batch abort enforced";
  return o;
}

Outcome ac7_conservation() {
  Outcome o;
  o.require(g_batches_checked > 0, "no batches observed");
  o.require(g_max_conservation <= 1e-12,
            "max relative drift " + num(g_max_conservation));
  if (o.pass) {
    o.detail = std::to_string(g_batches_checked) +
               " batches, max |T_after-T_before|/T " + num(g_max_conservation);
  }
  return o;
}

Outcome ac8_naive_oracle() {
  Outcome o;
  std::mt19937_64 rng(808);
  std::normal_distribution<double> z(0.0, 0.05);
  double worst = 0.0;
  int runs = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto w = eot::testing::random_weights(rng, 3);
    std::vector<std::vector<double>> rows;
    std::vector<double> p = eot::testing::random_prices(rng, 3);
    std::vector<double> times;
    std::vector<PriceVector> prices;
    for (int k = 0; k <= 10; ++k) {
      if (k > 0) {
        for (auto& x : p) x *= std::exp(z(rng));
      }
      rows.push_back(p);
      times.push_back(k);
      prices.emplace_back(p);
    }
    const PricePath path(times, prices, {"X", "Y", "Z"});
    const std::vector<std::pair<RebalancePolicy, naive::Policy>> pairs{
        {RebalancePolicy::full(), {naive::Policy::kFull, 0.0}},
        {RebalancePolicy::buy_and_hold(), {naive::Policy::kBuyAndHold, 0.0}},
        {RebalancePolicy::fractional(0.4), {naive::Policy::kFractional, 0.4}},
        {RebalancePolicy::threshold(0.03), {naive::Policy::kThreshold, 0.03}}};
    for (const auto& [policy, naive_policy] : pairs) {
      auto cfg = config(w, policy);
      cfg.capital = 2.5;
      const auto r = run(path, cfg);
      const auto ref = naive::simulate(w, rows, naive_policy, 2.5, true);
      ++runs;
      const double diffs[] = {
          std::fabs(r.summary.ln_T_ratio - ref.ln_T_ratio),
          std::fabs(r.summary.ln_P_ratio - ref.ln_P_ratio),
          std::fabs(r.summary.delta_S - ref.delta_S),
          std::fabs(r.summary.per_asset_entropy[0] - ref.per_asset_entropy[0]),
          std::fabs(r.summary.per_asset_entropy[1] - ref.per_asset_entropy[1]),
          std::fabs(r.summary.per_asset_entropy[2] - ref.per_asset_entropy[2])};
      for (double d : diffs) {
        worst = std::max(worst, d);
        o.require(d <= 1e-10, policy.to_string() + " trial " +
                                  std::to_string(trial) + " diff " + num(d));
      }
    }
  }
  if (o.pass) {
    o.detail = std::to_string(runs) + " runs, max summary difference " + num(worst);
  }
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome ac9_determinism() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "eot_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cli = EOT_CLI_PATH;
  auto sh = [&](const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  const auto d = [&](const char* name) { return (dir / name).string(); };
  for (const char* suffix : {"1", "2"}) {
    const std::string s(suffix);
    o.require(sh("generate --gbm --assets 3 --steps 1000 --mu 0,0.001,-0.001 "
                 "--sigma 0.02,0.03,0.01 --seed 42 --out " + d("p") + s + ".csv") == 0,
              "generate failed");
    o.require(sh("simulate --path " + d("p") + s + ".csv --weights 0.2,0.3,0.5 "
                 "--policy fractional:0.5 --record-steps --out " + d("r") + s +
                 ".json --steps-csv " + d("s") + s + ".csv") == 0,
              "simulate failed");
    o.require(sh("compare --path " + d("p") + s + ".csv --weights 0.2,0.3,0.5 "
                 "--policies full,buyhold,threshold:0.05 --format csv --out " +
                 d("c") + s + ".csv") == 0,
              "compare failed");
  }
  for (const char* stem : {"p", "r", "s", "c"}) {
    const auto ext = std::string(stem) == "r" ? ".json" : ".csv";
    const auto a = slurp(dir / (std::string(stem) + "1" + ext));
    const auto b = slurp(dir / (std::string(stem) + "2" + ext));
    o.require(!a.empty() && a == b, std::string(stem) + ext + " differs");
  }
  o.require(sh("verify --report " + d("r1") + ".json") == 0, "verify failed");
  fs::remove_all(dir);
  if (o.pass) o.detail = "generate/simulate/compare artifacts byte-identical";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 worked identity (two-tick, full)", ac1_worked_identity},
      {"AC2 per-step identity (8-asset GBM, 1e4 steps)", ac2_step_identity},
      {"AC3 second law and ROI bound (100 seeds x 4 policies)", ac3_second_law},
      {"AC4 reversible limit (reciprocal pair)", ac4_reversible_limit},
      {"AC5 first-order vs exact entropy", ac5_first_order_vs_exact},
      {"AC6 legality enforcement", ac6_legality},
      {"AC7 conservation across criteria 1-5", ac7_conservation},
      {"AC8 brute-force oracle equivalence", ac8_naive_oracle},
      {"AC9 CLI determinism", ac9_determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << " -- " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size()
            << " acceptance criteria passed" << std::endl;
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
