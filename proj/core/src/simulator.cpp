#include "eot/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

#include "eot/compensated_sum.hpp"
#include "eot/entropy.hpp"
#include "eot/error.hpp"
#include "eot/numeric_text.hpp"

namespace eot {

namespace {

StateSnapshot snapshot(double t, const PortfolioState& state) {
  const auto p = state.prices().values();
  const auto h = state.holdings().values();
  return {t, {p.begin(), p.end()}, {h.begin(), h.end()}, total_value(state)};
}

/// Mutable bookkeeping for one run. Owned by a single call to run().
class TickLoop {
 public:
  TickLoop(const PricePath& path, const SimulationConfig& config)
      : config_(config),
        state_(new_portfolio(config.weights, path.prices().front(),
                             config.capital)),
        ledger_(config.weights.size(),
                LedgerReference{path.times().front(),
                                {state_.prices().values().begin(),
                                 state_.prices().values().end()},
                                {state_.holdings().values().begin(),
                                 state_.holdings().values().end()}}) {
    prev_L_ = log_potential(state_);
    prev_lnP_ = log_price_index(state_.prices(), config_.weights);
    if (config_.record_steps) {
      StepRecord first;
      first.t = path.times().front();
      first.total_value = total_value(state_);
      first.log_potential = prev_L_;
      first.log_price_index = prev_lnP_;
      records_.push_back(first);
    }
  }

  [[nodiscard]] const PortfolioState& state() const { return state_; }

  void price_step(const PriceVector& prices) {
    state_ = state_.with_prices(prices);
  }

  void trade_step(double t, const RebalancePolicy& policy, bool settlement) {
    const auto batch = plan_rebalance(state_, policy);
    StepRecord record;
    record.t = t;
    record.settlement = settlement;
    record.trade_count = batch.size();
    record.traded_value = batch.gross_value();

    if (!batch.empty()) {
      const double before = total_value(state_);
      auto outcome = apply_batch(state_, batch);
      if (!outcome.applied()) {
        throw InvariantBreach(
            "planned trade " + std::to_string(*outcome.failed_trade) +
            " rejected at t=" + format_double(t) + ": " +
            std::string(to_string(*outcome.verdict.violation)));
      }
      const double after = total_value(outcome.state);
      record.conservation_error = std::fabs(after - before) / before;
      if (record.conservation_error > kConservationTolerance) {
        throw InvariantBreach("trade batch at t=" + format_double(t) +
                              " changed total value by relative " +
                              format_double(record.conservation_error));
      }
      const auto delta = trade_entropy_exact(
          config_.weights, outcome.sub_temperature_snapshots.front(),
          outcome.sub_temperature_snapshots.back());
      min_batch_entropy_ =
          std::min(min_batch_entropy_, compensated_sum(delta));
      ledger_ = accumulate(ledger_, delta, config_.tolerances.entropy);
      state_ = std::move(outcome.state);
      trade_count_ += batch.size();
      max_conservation_error_ =
          std::max(max_conservation_error_, record.conservation_error);
    }

    const double L = log_potential(state_);
    const double lnP = log_price_index(state_.prices(), config_.weights);
    const double S = ledger_.total();
    step_residual_ +=
        std::fabs((L - prev_L_) - (lnP - prev_lnP_) - (S - prev_S_));
    prev_L_ = L;
    prev_lnP_ = lnP;
    prev_S_ = S;

    if (config_.record_steps) {
      record.total_value = total_value(state_);
      record.log_potential = L;
      record.log_price_index = lnP;
      record.entropy = S;
      record.residual = step_residual_.value();
      records_.push_back(record);
    }
  }

  [[nodiscard]] const EntropyLedger& ledger() const { return ledger_; }
  [[nodiscard]] std::vector<StepRecord> take_records() {
    return std::move(records_);
  }
  [[nodiscard]] double step_residual() const { return step_residual_.value(); }
  [[nodiscard]] double min_batch_entropy() const {
    return std::isinf(min_batch_entropy_) ? 0.0 : min_batch_entropy_;
  }
  [[nodiscard]] double max_conservation_error() const {
    return max_conservation_error_;
  }
  [[nodiscard]] std::size_t trade_count() const { return trade_count_; }

 private:
  const SimulationConfig& config_;
  PortfolioState state_;
  EntropyLedger ledger_;
  double prev_L_ = 0.0;
  double prev_lnP_ = 0.0;
  double prev_S_ = 0.0;
  CompensatedSum step_residual_;
  double min_batch_entropy_ = std::numeric_limits<double>::infinity();
  double max_conservation_error_ = 0.0;
  std::size_t trade_count_ = 0;
  std::vector<StepRecord> records_;
};

bool endpoints_in_equilibrium(const SimulationReport& report) {
  const auto& w = report.config.weights;
  const double tol = report.config.tolerances.equilibrium;
  for (const auto* snap : {&report.initial_state, &report.final_state}) {
    if (snap->prices.size() != w.size() || snap->holdings.size() != w.size()) {
      return false;
    }
    const PortfolioState state(w, PriceVector(snap->prices),
                               Holdings(snap->holdings));
    if (equilibrium_residual(state) > tol) return false;
  }
  return true;
}

std::string describe_step(std::size_t k, const StepRecord& r) {
  return "step " + std::to_string(k) + " (t=" + format_double(r.t) +
         (r.settlement ? ", settlement" : "") + ")";
}

}  // namespace

void validate(const SimulationConfig& config) {
  if (!(config.capital > 0.0) || !std::isfinite(config.capital)) {
    throw InputError("capital must be positive");
  }
  const auto& tol = config.tolerances;
  if (!(tol.identity > 0.0) || !(tol.entropy > 0.0) ||
      !(tol.equilibrium > 0.0)) {
    throw InputError("tolerances must be positive");
  }
}

bool Verification::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const auto& c) { return c.second.pass; });
}

const CheckResult* Verification::find(std::string_view name) const {
  for (const auto& [key, result] : checks) {
    if (key == name) return &result;
  }
  return nullptr;
}

SimulationReport run(const PricePath& path, const SimulationConfig& config) {
  validate(config);
  if (path.assets() != config.weights.size()) {
    throw InputError("path has " + std::to_string(path.assets()) +
                     " assets but " + std::to_string(config.weights.size()) +
                     " weights were given");
  }

  TickLoop loop(path, config);
  SimulationReport report{config, path.provenance(), path.labels(), {}, {},
                          {},     {},                {}};
  report.initial_state = snapshot(path.times().front(), loop.state());

  for (std::size_t k = 1; k < path.size(); ++k) {
    loop.price_step(path.prices()[k]);
    loop.trade_step(path.times()[k], config.policy, false);
  }
  bool settled = false;
  if (config.settle_at_end &&
      equilibrium_residual(loop.state()) > config.tolerances.equilibrium) {
    loop.trade_step(path.times().back(), RebalancePolicy::full(), true);
    settled = true;
  }
  report.final_state = snapshot(path.times().back(), loop.state());

  const auto& weights = config.weights;
  auto& s = report.summary;
  s.ln_T_ratio =
      std::log(report.final_state.total_value / report.initial_state.total_value);
  s.ln_P_ratio =
      log_price_index(PriceVector(report.final_state.prices), weights) -
      log_price_index(PriceVector(report.initial_state.prices), weights);
  s.delta_S = loop.ledger().total();
  s.identity_residual = std::fabs(s.ln_T_ratio - s.ln_P_ratio - s.delta_S);
  s.per_asset_entropy = loop.ledger().per_asset();
  s.step_identity_residual = loop.step_residual();
  s.min_batch_entropy = loop.min_batch_entropy();
  s.max_conservation_error = loop.max_conservation_error();
  s.trade_count = loop.trade_count();
  s.settled = settled;
  report.steps = loop.take_records();
  report.verification = verify_report(report);
  return report;
}

Verification verify_report(const SimulationReport& report,
                           bool require_steps) {
  const auto& tol = report.config.tolerances;
  const auto& s = report.summary;
  const bool has_steps = !report.steps.empty();
  if (require_steps && !has_steps) {
    throw InputError("report has no step records; rerun with --record-steps");
  }
  Verification v;
  const bool equilibrium = endpoints_in_equilibrium(report);

  {
    CheckResult c;
    if (!equilibrium) {
      c.skipped = true;
      c.detail = "endpoints not in equilibrium";
    } else {
      c.slack = std::fabs(s.ln_T_ratio - s.ln_P_ratio - s.delta_S);
      c.pass = c.slack <= tol.identity;
      if (!c.pass) c.detail = "ln_T_ratio != ln_P_ratio + delta_S";
    }
    v.checks.emplace_back(kCheckEquilibriumIdentity, c);
  }

  {
    CheckResult c;
    if (has_steps) {
      CompensatedSum cumulative;
      for (std::size_t k = 1; k < report.steps.size(); ++k) {
        const auto& a = report.steps[k - 1];
        const auto& b = report.steps[k];
        cumulative += std::fabs((b.log_potential - a.log_potential) -
                                (b.log_price_index - a.log_price_index) -
                                (b.entropy - a.entropy));
        if (c.detail.empty() && cumulative.value() > tol.identity) {
          c.detail = "exceeded at " + describe_step(k, b);
        }
      }
      c.slack = cumulative.value();
    } else {
      c.slack = s.step_identity_residual;
    }
    c.pass = c.slack <= tol.identity;
    v.checks.emplace_back(kCheckStepIdentity, c);
  }

  {
    CheckResult c;
    if (has_steps) {
      double worst = 0.0;
      for (std::size_t k = 1; k < report.steps.size(); ++k) {
        const double d = report.steps[k].entropy - report.steps[k - 1].entropy;
        if (d < worst) {
          worst = d;
          if (d < -tol.entropy) {
            c.detail = "entropy decreased by " + format_double(-d) + " at " +
                       describe_step(k, report.steps[k]);
          }
        }
      }
      c.slack = worst;
    } else {
      c.slack = std::min(0.0, s.min_batch_entropy);
    }
    c.pass = c.slack >= -tol.entropy;
    v.checks.emplace_back(kCheckEntropyMonotone, c);
  }

  {
    CheckResult c;
    if (!equilibrium) {
      c.skipped = true;
      c.detail = "endpoints not in equilibrium";
    } else {
      c.slack = s.ln_T_ratio - s.ln_P_ratio;
      c.pass = c.slack >= -tol.entropy;
      if (!c.pass) c.detail = "log-return below price-index log change";
    }
    v.checks.emplace_back(kCheckRoiBound, c);
  }
  return v;
}

std::vector<ComparisonRow> compare_policies(
    const PricePath& path, const std::vector<SimulationConfig>& configs) {
  for (const auto& c : configs) {
    if (!(c.weights == configs.front().weights)) {
      throw InputError("compare: all configs must share the same weights");
    }
    if (c.capital != configs.front().capital) {
      throw InputError("compare: all configs must share the same capital");
    }
  }
  std::vector<std::future<SimulationReport>> jobs;
  jobs.reserve(configs.size());
  for (const auto& c : configs) {
    jobs.push_back(std::async(std::launch::async,
                              [&path, &c] { return run(path, c); }));
  }
  std::vector<ComparisonRow> rows;
  rows.reserve(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto report = jobs[i].get();
    const auto& s = report.summary;
    rows.push_back({configs[i].policy.to_string(), s.ln_T_ratio, s.ln_P_ratio,
                    s.delta_S, s.trade_count,
                    std::max(s.identity_residual, s.step_identity_residual),
                    report.verification.all_pass()});
  }
  return rows;
}

void write_comparison_csv(const std::vector<ComparisonRow>& rows,
                          std::ostream& out) {
  out << "policy,ln_T_ratio,ln_P_ratio,delta_S,trade_count,max_residual,"
         "verified\n";
  for (const auto& r : rows) {
    out << r.policy << ',' << format_double(r.ln_T_ratio) << ','
        << format_double(r.ln_P_ratio) << ',' << format_double(r.delta_S)
        << ',' << r.trade_count << ',' << format_double(r.max_residual) << ','
        << (r.verified ? "true" : "false") << '\n';
  }
}

void write_comparison_text(const std::vector<ComparisonRow>& rows,
                           std::ostream& out) {
  std::size_t policy_width = 6;
  for (const auto& r : rows) policy_width = std::max(policy_width, r.policy.size());
  const auto cell = [&out](const std::string& text, std::size_t width) {
    out << std::setw(static_cast<int>(width)) << text << "  ";
  };
  out << std::left;
  cell("policy", policy_width);
  out << std::right;
  cell("ln_T_ratio", 24);
  cell("ln_P_ratio", 24);
  cell("delta_S", 24);
  cell("trades", 8);
  cell("max_residual", 24);
  out << "verified\n";
  for (const auto& r : rows) {
    out << std::left;
    cell(r.policy, policy_width);
    out << std::right;
    cell(format_double(r.ln_T_ratio), 24);
    cell(format_double(r.ln_P_ratio), 24);
    cell(format_double(r.delta_S), 24);
    cell(std::to_string(r.trade_count), 8);
    cell(format_double(r.max_residual), 24);
    out << (r.verified ? "yes" : "NO") << '\n';
  }
}

void write_step_csv(const SimulationReport& report, std::ostream& out) {
  out << "t,T,L,lnP,S,residual\n";
  for (const auto& r : report.steps) {
    out << format_double(r.t) << ',' << format_double(r.total_value) << ','
        << format_double(r.log_potential) << ','
        << format_double(r.log_price_index) << ',' << format_double(r.entropy)
        << ',' << format_double(r.residual) << '\n';
  }
}

}  // namespace eot
