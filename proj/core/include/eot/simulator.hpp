#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "eot/price_path.hpp"
#include "eot/state.hpp"
#include "eot/trade.hpp"

namespace eot {

/// Relative drift of T allowed across one trade batch.
inline constexpr double kConservationTolerance = 1e-12;

struct Tolerances {
  double identity = 1e-9;
  double entropy = 1e-12;
  double equilibrium = 1e-12;
};

struct SimulationConfig {
  AssetWeights weights;
  double capital = 1.0;
  RebalancePolicy policy = RebalancePolicy::full();
  /// Append one full rebalance if the last tick leaves the portfolio out of
  /// equilibrium, so both endpoints are equilibrium states.
  bool settle_at_end = true;
  bool record_steps = false;
  Tolerances tolerances;
};

/// Throws InputError on non-positive capital or tolerances.
void validate(const SimulationConfig& config);

/// One tick (price move then trades), or the final settlement.
struct StepRecord {
  double t = 0.0;
  double total_value = 0.0;
  double log_potential = 0.0;
  double log_price_index = 0.0;
  double entropy = 0.0;
  std::size_t trade_count = 0;
  double traded_value = 0.0;
  /// Cumulative sum of |dL - d ln P - dS| up to and including this record.
  double residual = 0.0;
  /// |T_after - T_before| / T_before across this record's trades.
  double conservation_error = 0.0;
  bool settlement = false;
};

struct StateSnapshot {
  double t = 0.0;
  std::vector<double> prices;
  std::vector<double> holdings;
  double total_value = 0.0;
};

struct ReportSummary {
  double ln_T_ratio = 0.0;
  double ln_P_ratio = 0.0;
  double delta_S = 0.0;
  /// |ln(T_D/T_C) - ln(P_D/P_C) - (S_D - S_C)|.
  double identity_residual = 0.0;
  std::vector<double> per_asset_entropy;
  /// Final cumulative per-step residual (same as the last record's).
  double step_identity_residual = 0.0;
  /// Smallest batch entropy over the run; 0 when nothing traded.
  double min_batch_entropy = 0.0;
  double max_conservation_error = 0.0;
  std::size_t trade_count = 0;
  bool settled = false;
};

struct CheckResult {
  bool pass = true;
  /// The measured quantity the check bounds (residual, entropy step, excess
  /// log-return), not the margin to the bound.
  double slack = 0.0;
  bool skipped = false;
  std::string detail;
};

struct Verification {
  std::vector<std::pair<std::string, CheckResult>> checks;

  [[nodiscard]] bool all_pass() const;
  [[nodiscard]] const CheckResult* find(std::string_view name) const;
};

// Check names in the verification block.
inline constexpr const char* kCheckEquilibriumIdentity = "equilibrium_identity";
inline constexpr const char* kCheckStepIdentity = "step_identity";
inline constexpr const char* kCheckEntropyMonotone = "entropy_monotone";
inline constexpr const char* kCheckRoiBound = "roi_bound";

struct SimulationReport {
  SimulationConfig config;
  std::string path_provenance;
  std::vector<std::string> labels;
  StateSnapshot initial_state;
  StateSnapshot final_state;
  ReportSummary summary;
  std::vector<StepRecord> steps;
  Verification verification;
};

/// Runs the tick loop on `path` starting from the equilibrium portfolio at
/// the first tick's prices. Throws InputError on bad inputs and
/// InvariantBreach if conservation or entropy non-negativity fails.
[[nodiscard]] SimulationReport run(const PricePath& path,
                                   const SimulationConfig& config);

/// Re-checks a report. With step records, the per-step identity and entropy
/// monotonicity are recomputed from them; without, the summary values are
/// used unless `require_steps` is set, in which case InputError is thrown.
[[nodiscard]] Verification verify_report(const SimulationReport& report,
                                         bool require_steps = false);

struct ComparisonRow {
  std::string policy;
  double ln_T_ratio = 0.0;
  double ln_P_ratio = 0.0;
  double delta_S = 0.0;
  std::size_t trade_count = 0;
  double max_residual = 0.0;
  bool verified = false;
};

/// Runs each config on the same path, in parallel; rows keep input order.
/// Throws InputError if weights or capital differ between configs.
[[nodiscard]] std::vector<ComparisonRow> compare_policies(
    const PricePath& path, const std::vector<SimulationConfig>& configs);

void write_comparison_csv(const std::vector<ComparisonRow>& rows,
                          std::ostream& out);
void write_comparison_text(const std::vector<ComparisonRow>& rows,
                           std::ostream& out);

/// `t,T,L,lnP,S,residual` per record.
void write_step_csv(const SimulationReport& report, std::ostream& out);

}  // namespace eot
