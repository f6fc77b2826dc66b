#include "eot/entropy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "eot/error.hpp"
#include "eot/numeric_text.hpp"

namespace eot {

EntropyLedger::EntropyLedger(std::size_t assets, LedgerReference reference)
    : per_asset_(assets), reference_(std::move(reference)) {}

std::vector<double> EntropyLedger::per_asset() const {
  std::vector<double> s(per_asset_.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = per_asset_[i].value();
  return s;
}

std::vector<double> trade_entropy_exact(const AssetWeights& weights,
                                        std::span<const double> temps_before,
                                        std::span<const double> temps_after) {
  if (temps_before.size() != weights.size() ||
      temps_after.size() != weights.size()) {
    throw InputError("sub-temperature snapshot length mismatch");
  }
  std::vector<double> delta(weights.size());
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (!(temps_before[i] > 0.0) || !(temps_after[i] > 0.0)) {
      throw std::domain_error("entropy undefined: asset " + std::to_string(i) +
                              " has zero sub-temperature");
    }
    delta[i] = weights[i] * std::log(temps_after[i] / temps_before[i]);
  }
  return delta;
}

std::vector<double> trade_entropy_exact(const PortfolioState& pre,
                                        const PortfolioState& post) {
  if (!(pre.weights() == post.weights())) {
    throw ContractViolation("entropy delta across different weight vectors");
  }
  if (!(pre.prices() == post.prices())) {
    throw ContractViolation(
        "entropy delta across a price change: price motion carries no "
        "entropy, split the step into price and trade halves");
  }
  const auto before = sub_temperatures(pre);
  const auto after = sub_temperatures(post);
  return trade_entropy_exact(pre.weights(), before, after);
}

double pair_entropy_first_order(const PortfolioState& state,
                                const PairwiseTrade& trade) {
  const double t_buyer = sub_temperature(state, trade.buyer());
  const double t_seller = sub_temperature(state, trade.seller());
  if (!(t_buyer > 0.0) || !(t_seller > 0.0)) {
    throw std::domain_error("pair entropy undefined at zero sub-temperature");
  }
  const double q_bs = trade.flow(trade.buyer(), trade.seller());
  const double q_sb = trade.flow(trade.seller(), trade.buyer());
  return q_bs / t_buyer + q_sb / t_seller;
}

EntropyLedger accumulate(const EntropyLedger& ledger,
                         std::span<const double> delta, double tolerance) {
  if (delta.size() != ledger.size()) {
    throw InputError("entropy delta has " + std::to_string(delta.size()) +
                     " entries, ledger has " + std::to_string(ledger.size()));
  }
  const double batch = compensated_sum(delta);
  if (batch < -tolerance) {
    throw InvariantBreach("negative entropy production " +
                          format_double(batch) +
                          ": an illegal trade passed validation");
  }
  EntropyLedger next = ledger;
  CompensatedSum total;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    next.per_asset_[i] += delta[i];
    total += next.per_asset_[i].value();
  }
  next.total_ = total.value();
  return next;
}

}  // namespace eot
