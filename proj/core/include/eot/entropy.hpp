#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "eot/compensated_sum.hpp"
#include "eot/state.hpp"
#include "eot/trade.hpp"

namespace eot {

/// Largest negative total entropy delta accepted as rounding noise.
inline constexpr double kEntropyTolerance = 1e-12;

/// Where S = 0 was fixed: the reference equilibrium state O.
struct LedgerReference {
  double time = 0.0;
  std::vector<double> prices;
  std::vector<double> holdings;
};

/// Per-asset entropy S_i accumulated over the realized trades since the
/// reference state, and the total S = sum S_i.
class EntropyLedger {
 public:
  explicit EntropyLedger(std::size_t assets, LedgerReference reference = {});

  [[nodiscard]] std::size_t size() const { return per_asset_.size(); }
  [[nodiscard]] double per_asset(std::size_t i) const {
    return per_asset_[i].value();
  }
  [[nodiscard]] std::vector<double> per_asset() const;
  [[nodiscard]] double total() const { return total_; }
  [[nodiscard]] const LedgerReference& reference() const { return reference_; }

 private:
  friend EntropyLedger accumulate(const EntropyLedger& ledger,
                                  std::span<const double> delta,
                                  double tolerance);

  std::vector<CompensatedSum> per_asset_;
  double total_ = 0.0;
  LedgerReference reference_;
};

/// Exact entropy of a fixed-price transition: dQ_i = w_i dT_i integrates to
/// dS_i = w_i ln(T_i' / T_i). Throws ContractViolation when prices or
/// weights differ between the two states and std::domain_error on a zero T_i.
[[nodiscard]] std::vector<double> trade_entropy_exact(
    const PortfolioState& pre, const PortfolioState& post);

/// Same closed form from sub-temperature snapshots.
[[nodiscard]] std::vector<double> trade_entropy_exact(
    const AssetWeights& weights, std::span<const double> temps_before,
    std::span<const double> temps_after);

/// First-order pair entropy Q_bs / T_b + Q_sb / T_s = amount (1/T_b - 1/T_s)
/// at the pre-trade sub-temperatures. Overestimates the exact value for
/// finite trades; the gap is second order in the amount.
[[nodiscard]] double pair_entropy_first_order(const PortfolioState& state,
                                              const PairwiseTrade& trade);

/// Adds `delta` to the ledger. Throws InvariantBreach if sum(delta) is below
/// -tolerance (an illegal trade got past validation) and InputError on a
/// length mismatch.
[[nodiscard]] EntropyLedger accumulate(const EntropyLedger& ledger,
                                       std::span<const double> delta,
                                       double tolerance = kEntropyTolerance);

}  // namespace eot
