#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace eot {

using AssetIndex = std::size_t;

/// Tolerance on |sum(w) - 1|. Weights outside it are rejected, never
/// renormalized.
inline constexpr double kWeightSumTolerance = 1e-9;

/// Constant target weights w_i of the strategy, with one label per asset.
class AssetWeights {
 public:
  /// Throws InputError unless n >= 2, every w_i > 0 and finite, and the sum
  /// is within kWeightSumTolerance of one. Empty `labels` yields A0..A{n-1}.
  explicit AssetWeights(std::vector<double> weights,
                        std::vector<std::string> labels = {});

  [[nodiscard]] std::size_t size() const { return weights_.size(); }
  [[nodiscard]] double operator[](AssetIndex i) const { return weights_[i]; }
  [[nodiscard]] std::span<const double> values() const { return weights_; }
  [[nodiscard]] const std::vector<std::string>& labels() const {
    return labels_;
  }

  friend bool operator==(const AssetWeights&, const AssetWeights&) = default;

 private:
  std::vector<double> weights_;
  std::vector<std::string> labels_;
};

/// Strictly positive, finite prices p_i.
class PriceVector {
 public:
  explicit PriceVector(std::vector<double> prices);

  [[nodiscard]] std::size_t size() const { return prices_.size(); }
  [[nodiscard]] double operator[](AssetIndex i) const { return prices_[i]; }
  [[nodiscard]] std::span<const double> values() const { return prices_; }

  friend bool operator==(const PriceVector&, const PriceVector&) = default;

 private:
  std::vector<double> prices_;
};

/// Non-negative, finite held amounts h_i. Short positions are not modelled.
class Holdings {
 public:
  explicit Holdings(std::vector<double> amounts);

  [[nodiscard]] std::size_t size() const { return amounts_.size(); }
  [[nodiscard]] double operator[](AssetIndex i) const { return amounts_[i]; }
  [[nodiscard]] std::span<const double> values() const { return amounts_; }

  friend bool operator==(const Holdings&, const Holdings&) = default;

 private:
  std::vector<double> amounts_;
};

/// Weights, prices and holdings at one instant. Immutable; the weights are
/// shared between all states derived from one another.
class PortfolioState {
 public:
  PortfolioState(AssetWeights weights, PriceVector prices, Holdings holdings);
  PortfolioState(std::shared_ptr<const AssetWeights> weights,
                 PriceVector prices, Holdings holdings);

  [[nodiscard]] std::size_t size() const { return prices_.size(); }
  [[nodiscard]] const AssetWeights& weights() const { return *weights_; }
  [[nodiscard]] const std::shared_ptr<const AssetWeights>& shared_weights()
      const {
    return weights_;
  }
  [[nodiscard]] const PriceVector& prices() const { return prices_; }
  [[nodiscard]] const Holdings& holdings() const { return holdings_; }

  /// Same holdings and weights at new prices (the price half of a tick).
  [[nodiscard]] PortfolioState with_prices(PriceVector prices) const;
  /// Same prices and weights with new holdings (the trade half of a tick).
  [[nodiscard]] PortfolioState with_holdings(Holdings holdings) const;

 private:
  std::shared_ptr<const AssetWeights> weights_;
  PriceVector prices_;
  Holdings holdings_;
};

/// Equilibrium allocation U_i = w_i * capital, i.e. h_i = w_i * capital / p_i.
[[nodiscard]] PortfolioState new_portfolio(const AssetWeights& weights,
                                           const PriceVector& prices,
                                           double capital);

/// U_i = p_i h_i.
[[nodiscard]] double asset_value(const PortfolioState& state, AssetIndex i);

/// T = sum of U_i, compensated.
[[nodiscard]] double total_value(const PortfolioState& state);

/// T_i = U_i / w_i. At equilibrium every T_i equals T.
[[nodiscard]] double sub_temperature(const PortfolioState& state,
                                     AssetIndex i);
[[nodiscard]] std::vector<double> sub_temperatures(
    const PortfolioState& state);

/// ln P = sum w_i ln p_i.
[[nodiscard]] double log_price_index(const PriceVector& prices,
                                     const AssetWeights& weights);
/// Weighted geometric mean P = prod p_i^{w_i}, evaluated in log space.
[[nodiscard]] double price_index(const PriceVector& prices,
                                 const AssetWeights& weights);

/// max_i |T_i / T - 1|.
[[nodiscard]] double equilibrium_residual(const PortfolioState& state);

/// L = sum w_i ln T_i. Throws std::domain_error if any T_i is zero.
[[nodiscard]] double log_potential(const PortfolioState& state);

}  // namespace eot
