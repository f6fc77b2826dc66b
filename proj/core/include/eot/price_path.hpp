#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eot/state.hpp"

namespace eot {

/// Identifier of the pseudorandom stream behind GBM paths. Changing the
/// engine, the normal sampler or the draw order must bump the version.
extern const char* const kGeneratorId;

/// Time-indexed price vectors with asset labels. Times strictly increase,
/// there are at least two points, and every row has one price per label.
class PricePath {
 public:
  PricePath(std::vector<double> times, std::vector<PriceVector> prices,
            std::vector<std::string> labels, std::string provenance = {});

  [[nodiscard]] std::size_t size() const { return times_.size(); }
  [[nodiscard]] std::size_t assets() const { return labels_.size(); }
  [[nodiscard]] const std::vector<double>& times() const { return times_; }
  [[nodiscard]] const std::vector<PriceVector>& prices() const {
    return prices_;
  }
  [[nodiscard]] const std::vector<std::string>& labels() const {
    return labels_;
  }
  /// How the path was obtained: generator spec or file digest.
  [[nodiscard]] const std::string& provenance() const { return provenance_; }

 private:
  std::vector<double> times_;
  std::vector<PriceVector> prices_;
  std::vector<std::string> labels_;
  std::string provenance_;
};

/// Geometric Brownian motion, per asset:
///   p(t+dt) = p(t) exp((mu - sigma^2/2) dt + sigma sqrt(dt) z)
/// with z = L eps, L the lower Cholesky factor of `correlation`.
struct GbmSpec {
  std::vector<double> mu;
  std::vector<double> sigma;
  /// Row-major n x n correlation matrix; identity when absent.
  std::optional<std::vector<double>> correlation;
  std::size_t steps = 1;
  std::vector<double> initial_prices;
  std::uint64_t seed = 0;
  double dt = 1.0;
  std::vector<std::string> labels;
};

enum class DeterministicKind { kExpRamp, kSinusoid, kReciprocalPair };

/// Closed-form paths on times 0..steps:
///   exp-ramp        p_i(t) = exp(params_i t / steps)
///   sinusoid        p_i(t) = 1 + params_i sin(2 pi t / steps + 2 pi i / n)
///   reciprocal-pair p_0(t) = exp(t / steps), p_1(t) = exp(-t / steps)
struct DeterministicSpec {
  DeterministicKind kind = DeterministicKind::kReciprocalPair;
  std::vector<double> params;
  std::size_t steps = 1;
};

struct CsvFileSpec {
  std::filesystem::path path;
};

using PathSpec = std::variant<GbmSpec, DeterministicSpec, CsvFileSpec>;

[[nodiscard]] DeterministicKind parse_deterministic_kind(std::string_view name);

/// Pure function of the spec: the same spec gives a bit-identical path.
[[nodiscard]] PricePath generate(const PathSpec& spec);

/// Lower-triangular L with L L^T = matrix for a symmetric positive
/// semidefinite n x n row-major matrix. Throws InputError otherwise.
[[nodiscard]] std::vector<double> lower_cholesky(const std::vector<double>& matrix,
                                                 std::size_t n);

/// Parses `time,<label0>,...` CSV. Errors name the offending row, counting
/// the header as row 1.
[[nodiscard]] PricePath load_csv(std::istream& in,
                                 const std::string& source_name = "<stream>");
[[nodiscard]] PricePath load_csv_file(const std::filesystem::path& path);

/// Writes round-trip-exact decimals with LF line endings.
void write_csv(const PricePath& path, std::ostream& out);
void write_csv_file(const PricePath& path, const std::filesystem::path& file);

/// P(t) = price_index(prices(t), weights) for every tick.
[[nodiscard]] std::vector<double> index_series(const PricePath& path,
                                               const AssetWeights& weights);

/// Hex SHA-256 of a byte string.
[[nodiscard]] std::string sha256_hex(std::string_view bytes);

}  // namespace eot
