#include "eot/price_path.hpp"

#include <openssl/evp.h>

#include <boost/random/normal_distribution.hpp>
#include <boost/version.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>

#include "eot/error.hpp"
#include "eot/numeric_text.hpp"

namespace eot {

const char* const kGeneratorId =
    "mt19937_64+boost.random.normal_distribution/" BOOST_LIB_VERSION "/v1";

namespace {

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back("A" + std::to_string(i));
  return labels;
}

std::string join_numbers(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

PricePath generate_gbm(const GbmSpec& spec) {
  const std::size_t n = spec.initial_prices.size();
  if (n == 0) throw InputError("gbm: at least one asset is required");
  if (spec.mu.size() != n || spec.sigma.size() != n) {
    throw InputError("gbm: mu and sigma need " + std::to_string(n) +
                     " entries each");
  }
  if (spec.steps < 1) throw InputError("gbm: steps must be >= 1");
  if (!(spec.dt > 0.0) || !std::isfinite(spec.dt)) {
    throw InputError("gbm: dt must be positive");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(spec.mu[i])) throw InputError("gbm: mu must be finite");
    if (!(spec.sigma[i] >= 0.0) || !std::isfinite(spec.sigma[i])) {
      throw InputError("gbm: sigma must be non-negative");
    }
    if (!(spec.initial_prices[i] > 0.0) ||
        !std::isfinite(spec.initial_prices[i])) {
      throw InputError("gbm: initial prices must be positive");
    }
  }
  std::vector<double> factor;
  if (spec.correlation) {
    const auto& c = *spec.correlation;
    if (c.size() != n * n) {
      throw InputError("gbm: correlation must be " + std::to_string(n) + "x" +
                       std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (std::fabs(c[i * n + i] - 1.0) > 1e-12) {
        throw InputError("gbm: correlation diagonal must be 1");
      }
    }
    factor = lower_cholesky(c, n);
  }

  std::vector<std::string> labels =
      spec.labels.empty() ? default_labels(n) : spec.labels;
  if (labels.size() != n) throw InputError("gbm: label count mismatch");

  std::mt19937_64 engine(spec.seed);
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  const double sqrt_dt = std::sqrt(spec.dt);

  std::vector<double> drift(n);
  for (std::size_t i = 0; i < n; ++i) {
    drift[i] = (spec.mu[i] - 0.5 * spec.sigma[i] * spec.sigma[i]) * spec.dt;
  }

  std::vector<double> times;
  std::vector<PriceVector> rows;
  times.reserve(spec.steps + 1);
  rows.reserve(spec.steps + 1);
  times.push_back(0.0);
  rows.emplace_back(spec.initial_prices);

  std::vector<double> current = spec.initial_prices;
  std::vector<double> eps(n);
  std::vector<double> z(n);
  for (std::size_t k = 1; k <= spec.steps; ++k) {
    for (auto& e : eps) e = normal(engine);
    if (factor.empty()) {
      z = eps;
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= i; ++j) acc += factor[i * n + j] * eps[j];
        z[i] = acc;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      current[i] *= std::exp(drift[i] + spec.sigma[i] * sqrt_dt * z[i]);
    }
    times.push_back(static_cast<double>(k) * spec.dt);
    rows.emplace_back(current);
  }

  std::string provenance = "gbm;generator=" + std::string(kGeneratorId) +
                           ";seed=" + std::to_string(spec.seed) +
                           ";steps=" + std::to_string(spec.steps) +
                           ";dt=" + format_double(spec.dt) +
                           ";mu=" + join_numbers(spec.mu) +
                           ";sigma=" + join_numbers(spec.sigma) +
                           ";initial=" + join_numbers(spec.initial_prices);
  if (spec.correlation) {
    provenance += ";correlation=" + join_numbers(*spec.correlation);
  }
  return PricePath(std::move(times), std::move(rows), std::move(labels),
                   std::move(provenance));
}

PricePath generate_deterministic(const DeterministicSpec& spec) {
  if (spec.steps < 1) throw InputError("deterministic: steps must be >= 1");
  const double steps = static_cast<double>(spec.steps);
  std::size_t n = spec.params.size();
  std::string kind_name;
  switch (spec.kind) {
    case DeterministicKind::kReciprocalPair:
      n = 2;
      kind_name = "reciprocal-pair";
      break;
    case DeterministicKind::kExpRamp:
      kind_name = "exp-ramp";
      break;
    case DeterministicKind::kSinusoid:
      kind_name = "sinusoid";
      for (double a : spec.params) {
        if (!(std::fabs(a) < 1.0)) {
          throw InputError("sinusoid: amplitudes must satisfy |a| < 1");
        }
      }
      break;
  }
  if (n == 0) {
    throw InputError(kind_name + ": one parameter per asset is required");
  }

  std::vector<double> times;
  std::vector<PriceVector> rows;
  for (std::size_t k = 0; k <= spec.steps; ++k) {
    const double t = static_cast<double>(k);
    std::vector<double> p(n);
    switch (spec.kind) {
      case DeterministicKind::kReciprocalPair:
        p[0] = std::exp(t / steps);
        p[1] = std::exp(-t / steps);
        break;
      case DeterministicKind::kExpRamp:
        for (std::size_t i = 0; i < n; ++i) {
          p[i] = std::exp(spec.params[i] * t / steps);
        }
        break;
      case DeterministicKind::kSinusoid:
        for (std::size_t i = 0; i < n; ++i) {
          const double phase = 2.0 * std::numbers::pi *
                               (t / steps + static_cast<double>(i) /
                                                static_cast<double>(n));
          p[i] = 1.0 + spec.params[i] * std::sin(phase);
        }
        break;
    }
    times.push_back(t);
    rows.emplace_back(std::move(p));
  }
  std::string provenance = "deterministic;kind=" + kind_name +
                           ";steps=" + std::to_string(spec.steps);
  if (!spec.params.empty()) provenance += ";params=" + join_numbers(spec.params);
  return PricePath(std::move(times), std::move(rows), default_labels(n),
                   std::move(provenance));
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return std::string(s);
}

}  // namespace

PricePath::PricePath(std::vector<double> times, std::vector<PriceVector> prices,
                     std::vector<std::string> labels, std::string provenance)
    : times_(std::move(times)),
      prices_(std::move(prices)),
      labels_(std::move(labels)),
      provenance_(std::move(provenance)) {
  if (times_.size() < 2) {
    throw InputError("price path needs at least 2 time points");
  }
  if (prices_.size() != times_.size()) {
    throw InputError("price path has " + std::to_string(times_.size()) +
                     " times but " + std::to_string(prices_.size()) +
                     " price rows");
  }
  if (labels_.empty()) throw InputError("price path needs at least one asset");
  for (std::size_t k = 0; k < times_.size(); ++k) {
    if (!std::isfinite(times_[k])) {
      throw InputError("time at index " + std::to_string(k) + " is not finite");
    }
    if (k > 0 && !(times_[k] > times_[k - 1])) {
      throw InputError("times must be strictly increasing (index " +
                       std::to_string(k) + ")");
    }
    if (prices_[k].size() != labels_.size()) {
      throw InputError("price row " + std::to_string(k) + " has " +
                       std::to_string(prices_[k].size()) + " prices, expected " +
                       std::to_string(labels_.size()));
    }
  }
}

DeterministicKind parse_deterministic_kind(std::string_view name) {
  if (name == "exp-ramp") return DeterministicKind::kExpRamp;
  if (name == "sinusoid") return DeterministicKind::kSinusoid;
  if (name == "reciprocal-pair") return DeterministicKind::kReciprocalPair;
  throw InputError("unknown deterministic path kind '" + std::string(name) +
                   "' (expected exp-ramp, sinusoid, reciprocal-pair)");
}

PricePath generate(const PathSpec& spec) {
  struct Visitor {
    PricePath operator()(const GbmSpec& s) const { return generate_gbm(s); }
    PricePath operator()(const DeterministicSpec& s) const {
      return generate_deterministic(s);
    }
    PricePath operator()(const CsvFileSpec& s) const {
      return load_csv_file(s.path);
    }
  };
  return std::visit(Visitor{}, spec);
}

std::vector<double> lower_cholesky(const std::vector<double>& matrix,
                                   std::size_t n) {
  constexpr double kSymmetryTol = 1e-12;
  constexpr double kPivotTol = 1e-12;
  if (matrix.size() != n * n) throw InputError("matrix is not n x n");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::fabs(matrix[i * n + j] - matrix[j * n + i]) > kSymmetryTol) {
        throw InputError("correlation matrix is not symmetric");
      }
    }
  }
  std::vector<double> l(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double d = matrix[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
    if (d < -kPivotTol) {
      throw InputError("correlation matrix is not positive semidefinite");
    }
    const bool degenerate = d <= kPivotTol;
    const double pivot = degenerate ? 0.0 : std::sqrt(d);
    l[j * n + j] = pivot;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = matrix[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      if (degenerate) {
        // A zero pivot needs a zero column below it, or the matrix is not PSD.
        if (std::fabs(s) > 1e-10) {
          throw InputError("correlation matrix is not positive semidefinite");
        }
        l[i * n + j] = 0.0;
      } else {
        l[i * n + j] = s / pivot;
      }
    }
  }
  return l;
}

PricePath load_csv(std::istream& in, const std::string& source_name) {
  const std::string content((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  std::string_view rest = content;
  if (rest.starts_with("\xEF\xBB\xBF")) rest.remove_prefix(3);

  std::vector<std::string> labels;
  std::vector<double> times;
  std::vector<PriceVector> rows;
  std::size_t row = 0;
  auto fail = [&](const std::string& what) -> InputError {
    return InputError(source_name + ": row " + std::to_string(row) + ": " + what);
  };

  while (!rest.empty()) {
    const auto nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    ++row;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (rest.empty()) break;
      throw fail("empty line");
    }
    const auto fields = split_fields(line);
    if (row == 1) {
      if (trim(fields[0]) != "time") throw fail("header must start with 'time'");
      if (fields.size() < 2) throw fail("header names no assets");
      for (std::size_t i = 1; i < fields.size(); ++i) {
        auto label = trim(fields[i]);
        if (label.empty()) throw fail("empty asset label in column " + std::to_string(i + 1));
        labels.push_back(std::move(label));
      }
      continue;
    }
    if (fields.size() != labels.size() + 1) {
      throw fail("expected " + std::to_string(labels.size() + 1) +
                 " fields, got " + std::to_string(fields.size()));
    }
    const auto t = parse_double(fields[0]);
    if (!t || !std::isfinite(*t)) {
      throw fail("time '" + trim(fields[0]) + "' is not a number");
    }
    if (!times.empty() && !(*t > times.back())) {
      throw fail("time " + trim(fields[0]) + " does not increase");
    }
    std::vector<double> p(labels.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      const auto v = parse_double(fields[i + 1]);
      if (!v) {
        throw fail("value '" + trim(fields[i + 1]) + "' for " + labels[i] +
                   " is not a number");
      }
      if (!(*v > 0.0) || !std::isfinite(*v)) {
        throw fail("price for " + labels[i] + " must be positive, got " +
                   trim(fields[i + 1]));
      }
      p[i] = *v;
    }
    times.push_back(*t);
    rows.emplace_back(std::move(p));
  }
  if (labels.empty()) throw InputError(source_name + ": missing header");
  if (times.size() < 2) {
    throw InputError(source_name + ": need at least 2 data rows, got " +
                     std::to_string(times.size()));
  }
  return PricePath(std::move(times), std::move(rows), std::move(labels),
                   "csv;sha256=" + sha256_hex(content));
}

PricePath load_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return load_csv(in, path.string());
}

void write_csv(const PricePath& path, std::ostream& out) {
  std::string buffer = "time";
  for (const auto& label : path.labels()) {
    buffer += ',';
    buffer += label;
  }
  buffer += '\n';
  for (std::size_t k = 0; k < path.size(); ++k) {
    buffer += format_double(path.times()[k]);
    for (double p : path.prices()[k].values()) {
      buffer += ',';
      buffer += format_double(p);
    }
    buffer += '\n';
  }
  out << buffer;
}

void write_csv_file(const PricePath& path, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + file.string() + "'");
  write_csv(path, out);
  if (!out) throw InputError("write failed for '" + file.string() + "'");
}

std::vector<double> index_series(const PricePath& path,
                                 const AssetWeights& weights) {
  if (path.assets() != weights.size()) {
    throw InputError("dimension mismatch: path has " +
                     std::to_string(path.assets()) + " assets, weights have " +
                     std::to_string(weights.size()));
  }
  std::vector<double> series;
  series.reserve(path.size());
  for (const auto& prices : path.prices()) {
    series.push_back(price_index(prices, weights));
  }
  return series;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("sha256 digest failed");
  }
  std::ostringstream hex;
  hex << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < length; ++i) {
    hex << std::setw(2) << static_cast<int>(digest[i]);
  }
  return hex.str();
}

}  // namespace eot
