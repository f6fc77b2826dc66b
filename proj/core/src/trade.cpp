#include "eot/trade.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "eot/compensated_sum.hpp"
#include "eot/error.hpp"
#include "eot/numeric_text.hpp"

namespace eot {

PairwiseTrade::PairwiseTrade(AssetIndex buyer, AssetIndex seller, double amount)
    : buyer_(buyer), seller_(seller), amount_(amount) {
  if (buyer == seller) {
    throw InputError("trade buyer and seller must differ (asset " +
                     std::to_string(buyer) + ")");
  }
  if (!std::isfinite(amount) || amount <= 0.0) {
    throw InputError("trade amount must be positive and finite");
  }
}

double PairwiseTrade::flow(AssetIndex i, AssetIndex j) const {
  if (i == buyer_ && j == seller_) return amount_;
  if (i == seller_ && j == buyer_) return -amount_;
  return 0.0;
}

std::vector<double> TradeBatch::net_flows(std::size_t n) const {
  std::vector<CompensatedSum> acc(n);
  for (const auto& t : trades_) {
    if (t.buyer() >= n || t.seller() >= n) {
      throw InputError("trade references asset outside " + std::to_string(n) +
                       " assets");
    }
    acc[t.buyer()] += t.amount();
    acc[t.seller()] -= t.amount();
  }
  std::vector<double> q(n);
  std::transform(acc.begin(), acc.end(), q.begin(),
                 [](const CompensatedSum& s) { return s.value(); });
  return q;
}

double TradeBatch::gross_value() const {
  CompensatedSum sum;
  for (const auto& t : trades_) sum += t.amount();
  return sum.value();
}

RebalancePolicy RebalancePolicy::fractional(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InputError("alpha must be in (0,1]");
  }
  return RebalancePolicy(FractionalRebalance{alpha});
}

RebalancePolicy RebalancePolicy::threshold(double band) {
  if (!(band > 0.0) || !std::isfinite(band)) {
    throw InputError("band must be positive");
  }
  return RebalancePolicy(ThresholdRebalance{band});
}

RebalancePolicy RebalancePolicy::parse(std::string_view text) {
  if (text == "full") return full();
  if (text == "buyhold") return buy_and_hold();
  const auto colon = text.find(':');
  const auto name = text.substr(0, colon);
  if (colon != std::string_view::npos &&
      (name == "fractional" || name == "threshold")) {
    const auto value = parse_double(text.substr(colon + 1));
    if (!value) {
      throw InputError("policy parameter '" +
                       std::string(text.substr(colon + 1)) +
                       "' is not a number");
    }
    return name == "fractional" ? fractional(*value) : threshold(*value);
  }
  throw InputError("unknown policy '" + std::string(text) +
                   "' (expected full, buyhold, fractional:<alpha>, "
                   "threshold:<band>)");
}

std::string RebalancePolicy::to_string() const {
  struct Visitor {
    std::string operator()(BuyAndHold) const { return "buyhold"; }
    std::string operator()(FullRebalance) const { return "full"; }
    std::string operator()(FractionalRebalance f) const {
      return "fractional:" + format_double(f.alpha);
    }
    std::string operator()(ThresholdRebalance t) const {
      return "threshold:" + format_double(t.band);
    }
  };
  return std::visit(Visitor{}, kind_);
}

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::kDirectionViolatesSecondLaw:
      return "direction-violates-second-law";
    case Violation::kCrossingOvershoot:
      return "crossing-overshoot";
    case Violation::kNegativeHolding:
      return "negative-holding";
    case Violation::kConservationBroken:
      return "conservation-broken";
    case Violation::kDimensionMismatch:
      return "dimension-mismatch";
  }
  return "unknown";
}

TradeVerdict validate_trade(const PortfolioState& state,
                            const PairwiseTrade& trade) {
  const auto b = trade.buyer();
  const auto s = trade.seller();
  if (b >= state.size() || s >= state.size()) {
    return TradeVerdict::reject(Violation::kDimensionMismatch);
  }
  const auto& w = state.weights();
  const auto& p = state.prices();
  const auto& h = state.holdings();
  const double total = total_value(state);
  const double slack = kLegalityTolerance * total;

  const double t_buyer = p[b] * h[b] / w[b];
  const double t_seller = p[s] * h[s] / w[s];
  if (t_seller < t_buyer - slack) {
    return TradeVerdict::reject(Violation::kDirectionViolatesSecondLaw);
  }

  const double h_seller = h[s] - trade.amount() / p[s];
  const double h_buyer = h[b] + trade.amount() / p[b];
  if (h_seller < 0.0) {
    return TradeVerdict::reject(Violation::kNegativeHolding);
  }

  const double t_buyer_post = p[b] * h_buyer / w[b];
  const double t_seller_post = p[s] * h_seller / w[s];
  if (t_seller_post < t_buyer_post - slack) {
    return TradeVerdict::reject(Violation::kCrossingOvershoot);
  }

  const double before = p[b] * h[b] + p[s] * h[s];
  const double after = p[b] * h_buyer + p[s] * h_seller;
  if (std::fabs(after - before) > kLegalityTolerance * total) {
    return TradeVerdict::reject(Violation::kConservationBroken);
  }
  return TradeVerdict::ok();
}

PortfolioState apply_trade(const PortfolioState& state,
                           const PairwiseTrade& trade) {
  const auto verdict = validate_trade(state, trade);
  if (!verdict.legal()) {
    throw ContractViolation("illegal trade (buyer " +
                            std::to_string(trade.buyer()) + ", seller " +
                            std::to_string(trade.seller()) + "): " +
                            std::string(to_string(*verdict.violation)));
  }
  std::vector<double> h(state.holdings().values().begin(),
                        state.holdings().values().end());
  h[trade.seller()] -= trade.amount() / state.prices()[trade.seller()];
  h[trade.buyer()] += trade.amount() / state.prices()[trade.buyer()];
  return state.with_holdings(Holdings(std::move(h)));
}

namespace {

double rebalance_fraction(const PortfolioState& state,
                          const RebalancePolicy& policy) {
  struct Visitor {
    const PortfolioState& state;
    double operator()(BuyAndHold) const { return 0.0; }
    double operator()(FullRebalance) const { return 1.0; }
    double operator()(FractionalRebalance f) const { return f.alpha; }
    double operator()(ThresholdRebalance t) const {
      return equilibrium_residual(state) > t.band ? 1.0 : 0.0;
    }
  };
  return std::visit(Visitor{state}, policy.kind());
}

struct Leg {
  AssetIndex asset;
  double temperature;
  double remaining;
};

}  // namespace

TradeBatch plan_rebalance(const PortfolioState& state,
                          const RebalancePolicy& policy) {
  const double alpha = rebalance_fraction(state, policy);
  if (alpha == 0.0) return {};

  const double total = total_value(state);
  const double dust = kDustFraction * total;
  const auto temps = sub_temperatures(state);

  std::vector<Leg> sellers;
  std::vector<Leg> buyers;
  for (AssetIndex i = 0; i < state.size(); ++i) {
    const double target = state.weights()[i] * total;
    const double flow = alpha * (target - asset_value(state, i));
    if (std::fabs(flow) < dust) continue;
    if (flow < 0.0) {
      sellers.push_back({i, temps[i], -flow});
    } else {
      buyers.push_back({i, temps[i], flow});
    }
  }
  // stable_sort keeps index order among equal temperatures.
  std::stable_sort(sellers.begin(), sellers.end(),
                   [](const Leg& a, const Leg& b) {
                     return a.temperature > b.temperature;
                   });
  std::stable_sort(buyers.begin(), buyers.end(),
                   [](const Leg& a, const Leg& b) {
                     return a.temperature < b.temperature;
                   });

  std::vector<PairwiseTrade> trades;
  std::size_t si = 0;
  std::size_t bi = 0;
  while (si < sellers.size() && bi < buyers.size()) {
    auto& seller = sellers[si];
    auto& buyer = buyers[bi];
    const double amount = std::min(seller.remaining, buyer.remaining);
    if (amount >= dust && amount > 0.0) {
      trades.emplace_back(buyer.asset, seller.asset, amount);
    }
    seller.remaining -= amount;
    buyer.remaining -= amount;
    if (seller.remaining < dust) ++si;
    if (buyer.remaining < dust) ++bi;
  }
  return TradeBatch(std::move(trades));
}

BatchResult apply_batch(const PortfolioState& state, const TradeBatch& batch) {
  BatchResult result{state, {}, TradeVerdict::ok(), std::nullopt};
  if (batch.empty()) return result;

  std::vector<std::vector<double>> snapshots;
  snapshots.reserve(batch.size() + 1);
  snapshots.push_back(sub_temperatures(state));
  PortfolioState current = state;
  for (std::size_t k = 0; k < batch.size(); ++k) {
    const auto& trade = batch.trades()[k];
    const auto verdict = validate_trade(current, trade);
    if (!verdict.legal()) {
      result.verdict = verdict;
      result.failed_trade = k;
      return result;
    }
    current = apply_trade(current, trade);
    snapshots.push_back(sub_temperatures(current));
  }
  result.state = std::move(current);
  result.sub_temperature_snapshots = std::move(snapshots);
  return result;
}

}  // namespace eot
