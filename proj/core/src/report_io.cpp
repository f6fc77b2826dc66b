#include "eot/report_io.hpp"

#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "eot/error.hpp"

namespace eot {

namespace {

using Json = nlohmann::ordered_json;

Json snapshot_json(const StateSnapshot& s) {
  return Json{{"t", s.t},
              {"prices", s.prices},
              {"holdings", s.holdings},
              {"total_value", s.total_value}};
}

Json check_json(const CheckResult& c) {
  Json j{{"pass", c.pass}, {"slack", c.slack}, {"skipped", c.skipped}};
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

const Json& field(const Json& obj, const char* name, const std::string& where) {
  if (!obj.is_object() || !obj.contains(name)) {
    throw InputError("report: missing field '" + where + name + "'");
  }
  return obj.at(name);
}

template <typename T>
T get(const Json& obj, const char* name, const std::string& where) {
  const auto& v = field(obj, name, where);
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError("report: field '" + where + name + "' has the wrong type");
  }
}

StateSnapshot snapshot_from(const Json& j, const std::string& where) {
  StateSnapshot s;
  s.t = get<double>(j, "t", where);
  s.prices = get<std::vector<double>>(j, "prices", where);
  s.holdings = get<std::vector<double>>(j, "holdings", where);
  s.total_value = get<double>(j, "total_value", where);
  return s;
}

}  // namespace

std::string report_to_json(const SimulationReport& report) {
  const auto& cfg = report.config;
  Json config{
      {"weights",
       std::vector<double>(cfg.weights.values().begin(),
                           cfg.weights.values().end())},
      {"weight_labels", cfg.weights.labels()},
      {"capital", cfg.capital},
      {"policy", cfg.policy.to_string()},
      {"settle_at_end", cfg.settle_at_end},
      {"record_steps", cfg.record_steps},
      {"tolerances",
       {{"identity_tol", cfg.tolerances.identity},
        {"entropy_tol", cfg.tolerances.entropy},
        {"equilibrium_tol", cfg.tolerances.equilibrium}}}};

  const auto& s = report.summary;
  Json summary{{"ln_T_ratio", s.ln_T_ratio},
               {"ln_P_ratio", s.ln_P_ratio},
               {"delta_S", s.delta_S},
               {"identity_residual", s.identity_residual},
               {"per_asset_entropy", s.per_asset_entropy},
               {"step_identity_residual", s.step_identity_residual},
               {"min_batch_entropy", s.min_batch_entropy},
               {"max_conservation_error", s.max_conservation_error},
               {"trade_count", s.trade_count},
               {"settled", s.settled}};

  Json out{{"config", std::move(config)},
           {"path", {{"provenance", report.path_provenance},
                     {"labels", report.labels}}},
           {"initial_state", snapshot_json(report.initial_state)},
           {"final_state", snapshot_json(report.final_state)},
           {"summary", std::move(summary)}};

  if (!report.steps.empty()) {
    Json steps = Json::array();
    for (const auto& r : report.steps) {
      steps.push_back(Json{{"t", r.t},
                           {"T", r.total_value},
                           {"L", r.log_potential},
                           {"lnP", r.log_price_index},
                           {"S", r.entropy},
                           {"trades",
                            {{"count", r.trade_count},
                             {"gross_value", r.traded_value}}},
                           {"residual", r.residual},
                           {"conservation_error", r.conservation_error},
                           {"settlement", r.settlement}});
    }
    out["steps"] = std::move(steps);
  }

  Json verification = Json::object();
  for (const auto& [name, result] : report.verification.checks) {
    verification[name] = check_json(result);
  }
  out["verification"] = std::move(verification);
  return out.dump(2) + "\n";
}

SimulationReport report_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("report: invalid JSON: ") + e.what());
  }
  const auto& cfg = field(j, "config", "");
  const auto& tol = field(cfg, "tolerances", "config.");
  SimulationConfig config{
      AssetWeights(get<std::vector<double>>(cfg, "weights", "config."),
                   get<std::vector<std::string>>(cfg, "weight_labels",
                                                 "config.")),
      get<double>(cfg, "capital", "config."),
      RebalancePolicy::parse(get<std::string>(cfg, "policy", "config.")),
      get<bool>(cfg, "settle_at_end", "config."),
      get<bool>(cfg, "record_steps", "config."),
      Tolerances{get<double>(tol, "identity_tol", "config.tolerances."),
                 get<double>(tol, "entropy_tol", "config.tolerances."),
                 get<double>(tol, "equilibrium_tol", "config.tolerances.")}};

  SimulationReport report{std::move(config), {}, {}, {}, {}, {}, {}, {}};
  const auto& path = field(j, "path", "");
  report.path_provenance = get<std::string>(path, "provenance", "path.");
  report.labels = get<std::vector<std::string>>(path, "labels", "path.");
  report.initial_state = snapshot_from(field(j, "initial_state", ""),
                                       "initial_state.");
  report.final_state = snapshot_from(field(j, "final_state", ""),
                                     "final_state.");

  const auto& sj = field(j, "summary", "");
  auto& s = report.summary;
  s.ln_T_ratio = get<double>(sj, "ln_T_ratio", "summary.");
  s.ln_P_ratio = get<double>(sj, "ln_P_ratio", "summary.");
  s.delta_S = get<double>(sj, "delta_S", "summary.");
  s.identity_residual = get<double>(sj, "identity_residual", "summary.");
  s.per_asset_entropy =
      get<std::vector<double>>(sj, "per_asset_entropy", "summary.");
  s.step_identity_residual =
      get<double>(sj, "step_identity_residual", "summary.");
  s.min_batch_entropy = get<double>(sj, "min_batch_entropy", "summary.");
  s.max_conservation_error =
      get<double>(sj, "max_conservation_error", "summary.");
  s.trade_count = get<std::size_t>(sj, "trade_count", "summary.");
  s.settled = get<bool>(sj, "settled", "summary.");

  if (j.contains("steps")) {
    const auto& steps = j.at("steps");
    if (!steps.is_array()) throw InputError("report: 'steps' must be an array");
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const auto& r = steps[k];
      const std::string where = "steps[" + std::to_string(k) + "].";
      StepRecord rec;
      rec.t = get<double>(r, "t", where);
      rec.total_value = get<double>(r, "T", where);
      rec.log_potential = get<double>(r, "L", where);
      rec.log_price_index = get<double>(r, "lnP", where);
      rec.entropy = get<double>(r, "S", where);
      const auto& trades = field(r, "trades", where);
      rec.trade_count = get<std::size_t>(trades, "count", where + "trades.");
      rec.traded_value = get<double>(trades, "gross_value", where + "trades.");
      rec.residual = get<double>(r, "residual", where);
      rec.conservation_error = get<double>(r, "conservation_error", where);
      rec.settlement = get<bool>(r, "settlement", where);
      report.steps.push_back(rec);
    }
  }

  if (j.contains("verification")) {
    for (const auto& [name, c] : j.at("verification").items()) {
      const std::string where = "verification." + name + ".";
      CheckResult result;
      result.pass = get<bool>(c, "pass", where);
      result.slack = get<double>(c, "slack", where);
      result.skipped = c.value("skipped", false);
      result.detail = c.value("detail", std::string{});
      report.verification.checks.emplace_back(name, std::move(result));
    }
  }
  return report;
}

}  // namespace eot
