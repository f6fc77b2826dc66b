#include "eot/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "eot/compensated_sum.hpp"
#include "eot/error.hpp"

namespace eot {

namespace {

void check_index(const PortfolioState& state, AssetIndex i) {
  if (i >= state.size()) {
    throw std::out_of_range("asset index " + std::to_string(i) +
                            " out of range for " +
                            std::to_string(state.size()) + " assets");
  }
}

}  // namespace

AssetWeights::AssetWeights(std::vector<double> weights,
                           std::vector<std::string> labels)
    : weights_(std::move(weights)), labels_(std::move(labels)) {
  if (weights_.size() < 2) {
    throw InputError("at least two assets are required, got " +
                     std::to_string(weights_.size()));
  }
  CompensatedSum sum;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!std::isfinite(w) || w <= 0.0) {
      throw InputError("weight " + std::to_string(i) +
                       " must be positive and finite");
    }
    sum += w;
  }
  if (std::fabs(sum.value() - 1.0) > kWeightSumTolerance) {
    throw InputError("weights must sum to 1 within 1e-9");
  }
  if (labels_.empty()) {
    labels_.reserve(weights_.size());
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      labels_.push_back("A" + std::to_string(i));
    }
  } else if (labels_.size() != weights_.size()) {
    throw InputError("expected " + std::to_string(weights_.size()) +
                     " asset labels, got " + std::to_string(labels_.size()));
  }
}

PriceVector::PriceVector(std::vector<double> prices)
    : prices_(std::move(prices)) {
  for (std::size_t i = 0; i < prices_.size(); ++i) {
    if (!std::isfinite(prices_[i]) || prices_[i] <= 0.0) {
      throw InputError("price " + std::to_string(i) +
                       " must be positive and finite");
    }
  }
}

Holdings::Holdings(std::vector<double> amounts) : amounts_(std::move(amounts)) {
  for (std::size_t i = 0; i < amounts_.size(); ++i) {
    if (!std::isfinite(amounts_[i]) || amounts_[i] < 0.0) {
      throw InputError("holding " + std::to_string(i) +
                       " must be non-negative and finite");
    }
  }
}

PortfolioState::PortfolioState(AssetWeights weights, PriceVector prices,
                               Holdings holdings)
    : PortfolioState(std::make_shared<const AssetWeights>(std::move(weights)),
                     std::move(prices), std::move(holdings)) {}

PortfolioState::PortfolioState(std::shared_ptr<const AssetWeights> weights,
                               PriceVector prices, Holdings holdings)
    : weights_(std::move(weights)),
      prices_(std::move(prices)),
      holdings_(std::move(holdings)) {
  if (!weights_) throw InputError("portfolio state requires weights");
  if (prices_.size() != weights_->size() ||
      holdings_.size() != weights_->size()) {
    throw InputError("dimension mismatch: " + std::to_string(weights_->size()) +
                     " weights, " + std::to_string(prices_.size()) +
                     " prices, " + std::to_string(holdings_.size()) +
                     " holdings");
  }
  if (!(total_value(*this) > 0.0)) {
    throw InputError("portfolio total value must be positive");
  }
}

PortfolioState PortfolioState::with_prices(PriceVector prices) const {
  return PortfolioState(weights_, std::move(prices), holdings_);
}

PortfolioState PortfolioState::with_holdings(Holdings holdings) const {
  return PortfolioState(weights_, prices_, std::move(holdings));
}

PortfolioState new_portfolio(const AssetWeights& weights,
                             const PriceVector& prices, double capital) {
  if (!std::isfinite(capital) || capital <= 0.0) {
    throw InputError("capital must be positive and finite");
  }
  if (prices.size() != weights.size()) {
    throw InputError("dimension mismatch: " + std::to_string(weights.size()) +
                     " weights, " + std::to_string(prices.size()) + " prices");
  }
  std::vector<double> h(weights.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    h[i] = weights[i] * capital / prices[i];
  }
  return PortfolioState(weights, prices, Holdings(std::move(h)));
}

double asset_value(const PortfolioState& state, AssetIndex i) {
  check_index(state, i);
  return state.prices()[i] * state.holdings()[i];
}

double total_value(const PortfolioState& state) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < state.size(); ++i) {
    sum += state.prices()[i] * state.holdings()[i];
  }
  return sum.value();
}

double sub_temperature(const PortfolioState& state, AssetIndex i) {
  check_index(state, i);
  return state.prices()[i] * state.holdings()[i] / state.weights()[i];
}

std::vector<double> sub_temperatures(const PortfolioState& state) {
  std::vector<double> t(state.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = state.prices()[i] * state.holdings()[i] / state.weights()[i];
  }
  return t;
}

double log_price_index(const PriceVector& prices, const AssetWeights& weights) {
  if (prices.size() != weights.size()) {
    throw InputError("dimension mismatch: " + std::to_string(weights.size()) +
                     " weights, " + std::to_string(prices.size()) + " prices");
  }
  CompensatedSum sum;
  for (std::size_t i = 0; i < prices.size(); ++i) {
    sum += weights[i] * std::log(prices[i]);
  }
  return sum.value();
}

double price_index(const PriceVector& prices, const AssetWeights& weights) {
  return std::exp(log_price_index(prices, weights));
}

double equilibrium_residual(const PortfolioState& state) {
  const double total = total_value(state);
  double worst = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double ti =
        state.prices()[i] * state.holdings()[i] / state.weights()[i];
    worst = std::max(worst, std::fabs(ti / total - 1.0));
  }
  return worst;
}

double log_potential(const PortfolioState& state) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double ti =
        state.prices()[i] * state.holdings()[i] / state.weights()[i];
    if (!(ti > 0.0)) {
      throw std::domain_error("log potential undefined: asset " +
                              std::to_string(i) + " has zero holding");
    }
    sum += state.weights()[i] * std::log(ti);
  }
  return sum.value();
}

}  // namespace eot
