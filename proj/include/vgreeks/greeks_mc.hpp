#pragma once
/**
 * @file greeks_mc.hpp
 * @brief Monte-Carlo price and Greeks with Malliavin weights.
 *
 * Each path contributes one sample X_p; the estimate is the sample mean and
 * the standard error is sd / sqrt(n). Samples are written to per-path slots
 * and reduced in path-index order, so results do not depend on the number of
 * worker threads.
 */

#include <vgreeks/models.hpp>
#include <vgreeks/paths.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace vgreeks {

/// Every path was discarded; no estimate exists.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class PayoffKind { call, put, digital_call };

struct OptionSpec {
  double K = 100.0;
  double T = 1.0;
  PayoffKind payoff = PayoffKind::call;

  void validate() const;
};

enum class GreekKind { price, delta, gamma, rho, vega, hsens };

/**
 * Gamma and Rho exist in two forms. `derived` follows from differentiating
 * the price SDE and applying integration by parts twice; `literal` keeps an
 * e^{-2rT} prefactor on the first Gamma term and an rT prefactor on Rho. Black-Scholes oracles decide between them.
 */
enum class FormulaVariant { derived, literal };

[[nodiscard]] std::string_view to_string(GreekKind kind) noexcept;
[[nodiscard]] std::string_view to_string(PayoffKind kind) noexcept;
[[nodiscard]] std::string_view to_string(FormulaVariant v) noexcept;
[[nodiscard]] std::optional<GreekKind> parse_greek_kind(std::string_view s) noexcept;
[[nodiscard]] std::optional<PayoffKind> parse_payoff_kind(std::string_view s) noexcept;

struct GreekEstimate {
  GreekKind kind = GreekKind::price;
  FormulaVariant variant = FormulaVariant::derived;
  double value = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double confidence = 0.99;
  std::size_t n_paths = 0;      ///< paths simulated
  std::size_t n_discarded = 0;  ///< paths dropped for a degenerate weight
};

struct EstimatorOptions {
  ConvolutionScheme scheme = ConvolutionScheme::left_point;
  FormulaVariant variant = FormulaVariant::derived;
  unsigned workers = 0;  ///< 0: VOLTERRA_GREEKS_WORKERS, else hardware concurrency
};

/// Worker count after applying the environment override.
[[nodiscard]] unsigned resolve_workers(unsigned configured);

/// Runs body(p) for p in [0, n) over `workers` threads in contiguous blocks.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

[[nodiscard]] double payoff(const OptionSpec& opt, double sT);

/// Whether the Malliavin estimator exists for (kind, model).
[[nodiscard]] bool supports(GreekKind kind, const ModelSpec& model) noexcept;

/// Per-path samples (NaN marks a discarded path). Throws UnsupportedError.
[[nodiscard]] std::vector<double> malliavin_samples(GreekKind kind, const ModelSpec& model, const MarketSpec& market,
                                                    const OptionSpec& opt, const TimeGrid& grid, std::size_t n_paths,
                                                    std::uint64_t seed, const EstimatorOptions& options = {});

/// Summary of the first `count` samples (NaNs skipped and counted).
[[nodiscard]] GreekEstimate summarize_samples(GreekKind kind, std::span<const double> samples, double confidence,
                                              FormulaVariant variant = FormulaVariant::derived);

[[nodiscard]] GreekEstimate estimate(GreekKind kind, const ModelSpec& model, const MarketSpec& market,
                                     const OptionSpec& opt, const TimeGrid& grid, std::size_t n_paths,
                                     std::uint64_t seed, double confidence = 0.99,
                                     const EstimatorOptions& options = {});

/// Nested convergence trace: entry k summarizes the first ns_schedule[k] paths.
[[nodiscard]] std::vector<GreekEstimate> converge(GreekKind kind, const ModelSpec& model, const MarketSpec& market,
                                                  const OptionSpec& opt, const TimeGrid& grid,
                                                  const std::vector<std::size_t>& ns_schedule, std::uint64_t seed,
                                                  double confidence = 0.99, const EstimatorOptions& options = {});

}  // namespace vgreeks
