#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eot/state.hpp"

namespace eot {

/// Relative slack (times T) allowed when comparing sub-temperatures during
/// validation. Rounding in a trade that lands exactly on equality must not
/// read as a crossing.
inline constexpr double kLegalityTolerance = 1e-12;

/// Net flows smaller than this fraction of T are not traded.
inline constexpr double kDustFraction = 1e-15;

/// One transfer of value between two assets at fixed prices. The buyer gains
/// `amount` of value and the seller loses it, so Q(buyer, seller) = +amount
/// and Q(seller, buyer) = -amount; the pair always sums to zero.
class PairwiseTrade {
 public:
  /// Throws InputError if buyer == seller or amount is not positive.
  PairwiseTrade(AssetIndex buyer, AssetIndex seller, double amount);

  [[nodiscard]] AssetIndex buyer() const { return buyer_; }
  [[nodiscard]] AssetIndex seller() const { return seller_; }
  [[nodiscard]] double amount() const { return amount_; }

  /// Signed value Q_ij bought of asset i from asset j.
  [[nodiscard]] double flow(AssetIndex i, AssetIndex j) const;

  friend bool operator==(const PairwiseTrade&, const PairwiseTrade&) = default;

 private:
  AssetIndex buyer_;
  AssetIndex seller_;
  double amount_;
};

/// Ordered trades applied sequentially.
class TradeBatch {
 public:
  TradeBatch() = default;
  explicit TradeBatch(std::vector<PairwiseTrade> trades)
      : trades_(std::move(trades)) {}

  [[nodiscard]] const std::vector<PairwiseTrade>& trades() const {
    return trades_;
  }
  [[nodiscard]] bool empty() const { return trades_.empty(); }
  [[nodiscard]] std::size_t size() const { return trades_.size(); }

  /// Q_i = sum_j Q_ij for each of `n` assets.
  [[nodiscard]] std::vector<double> net_flows(std::size_t n) const;
  /// Sum of trade amounts.
  [[nodiscard]] double gross_value() const;

  friend bool operator==(const TradeBatch&, const TradeBatch&) = default;

 private:
  std::vector<PairwiseTrade> trades_;
};

struct BuyAndHold {
  friend bool operator==(const BuyAndHold&, const BuyAndHold&) = default;
};
struct FullRebalance {
  friend bool operator==(const FullRebalance&, const FullRebalance&) = default;
};
/// Move a fraction alpha of the way to equilibrium on every tick.
struct FractionalRebalance {
  double alpha;
  friend bool operator==(const FractionalRebalance&,
                         const FractionalRebalance&) = default;
};
/// Fully rebalance only when equilibrium_residual exceeds band.
struct ThresholdRebalance {
  double band;
  friend bool operator==(const ThresholdRebalance&,
                         const ThresholdRebalance&) = default;
};

class RebalancePolicy {
 public:
  using Variant = std::variant<BuyAndHold, FullRebalance, FractionalRebalance,
                               ThresholdRebalance>;

  static RebalancePolicy buy_and_hold() { return RebalancePolicy(BuyAndHold{}); }
  static RebalancePolicy full() { return RebalancePolicy(FullRebalance{}); }
  /// Throws InputError unless alpha is in (0, 1].
  static RebalancePolicy fractional(double alpha);
  /// Throws InputError unless band > 0.
  static RebalancePolicy threshold(double band);

  /// Grammar: `full`, `buyhold`, `fractional:<alpha>`, `threshold:<band>`.
  static RebalancePolicy parse(std::string_view text);

  [[nodiscard]] const Variant& kind() const { return kind_; }
  /// Inverse of parse; numbers use shortest round-trip formatting.
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const RebalancePolicy&,
                         const RebalancePolicy&) = default;

 private:
  explicit RebalancePolicy(Variant kind) : kind_(kind) {}
  Variant kind_;
};

enum class Violation {
  kDirectionViolatesSecondLaw,
  kCrossingOvershoot,
  kNegativeHolding,
  kConservationBroken,
  kDimensionMismatch,
};

[[nodiscard]] std::string_view to_string(Violation v);

struct TradeVerdict {
  std::optional<Violation> violation;

  [[nodiscard]] bool legal() const { return !violation.has_value(); }
  static TradeVerdict ok() { return {}; }
  static TradeVerdict reject(Violation v) { return {v}; }
};

/// Legal iff value flows from the hotter asset to the colder one
/// (T_seller >= T_buyer), the transfer does not push the seller below the
/// buyer afterwards, and no holding goes negative.
[[nodiscard]] TradeVerdict validate_trade(const PortfolioState& state,
                                          const PairwiseTrade& trade);

/// Moves `amount` of value at fixed prices. Throws ContractViolation if
/// validate_trade rejects the trade.
[[nodiscard]] PortfolioState apply_trade(const PortfolioState& state,
                                         const PairwiseTrade& trade);

/// Net flows Q_i = alpha (w_i T - U_i) decomposed greedily: sellers by
/// descending T_i, buyers by ascending T_i, ties broken by lower index.
[[nodiscard]] TradeBatch plan_rebalance(const PortfolioState& state,
                                        const RebalancePolicy& policy);

struct BatchResult {
  /// Final state, or the input state unchanged if a trade was rejected.
  PortfolioState state;
  /// Sub-temperatures before the first trade and after each applied trade.
  /// Empty on rejection.
  std::vector<std::vector<double>> sub_temperature_snapshots;
  TradeVerdict verdict;
  /// Position of the rejected trade in the batch.
  std::optional<std::size_t> failed_trade;

  [[nodiscard]] bool applied() const { return verdict.legal(); }
};

/// Applies trades in order, validating each against the state it meets.
/// All-or-nothing: the first rejected trade aborts the whole batch.
[[nodiscard]] BatchResult apply_batch(const PortfolioState& state,
                                      const TradeBatch& batch);

}  // namespace eot
