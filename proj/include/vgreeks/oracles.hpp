#pragma once
/**
 * @file oracles.hpp
 * @brief Independent references for the Malliavin estimators: Black-Scholes
 *        closed forms and central finite differences with common random
 *        numbers.
 */

#include <vgreeks/greeks_mc.hpp>

#include <cstdint>
#include <optional>

namespace vgreeks {

struct BsValues {
  double price = 0.0;
  double delta = 0.0;
  double gamma = 0.0;
  double rho = 0.0;
  double vega = 0.0;
};

/// Closed-form Black-Scholes values for call, put and digital call (pays 1 if S_T > K).
[[nodiscard]] BsValues bs_price_greeks(const MarketSpec& market, const OptionSpec& opt, double sigma);

/// Closed-form value of `kind`, or nullopt where Black-Scholes has no such Greek (hsens).
[[nodiscard]] std::optional<double> bs_value(const BsValues& v, GreekKind kind) noexcept;

/// Constant volatility of a model whose vol-of-vol is zero (BS itself, or xi = 0), else nullopt.
[[nodiscard]] std::optional<double> constant_volatility(const ModelSpec& model) noexcept;

enum class BumpParameter { S0, r, V0, H };

/// The parameter a Greek differentiates in.
[[nodiscard]] BumpParameter bump_parameter(GreekKind kind);

/// `size` is relative for S0 and V0, absolute for r and H.
struct BumpSpec {
  BumpParameter parameter = BumpParameter::S0;
  double size = 1e-2;
};

/// Relative 1e-2 for S0/V0, absolute 1e-3 for r/H.
[[nodiscard]] BumpSpec default_bump(GreekKind kind);

struct FdOptions {
  EstimatorOptions estimator{};
  /// Up and down runs share increments; off draws the down run from a different seed.
  bool common_random_numbers = true;
};

/**
 * Central finite-difference estimate. Per-path differences are formed before
 * averaging. Gamma uses the three-point second difference in S0; price is
 * rejected.
 */
[[nodiscard]] GreekEstimate fd_greek(GreekKind kind, const ModelSpec& model, const MarketSpec& market,
                                     const OptionSpec& opt, const TimeGrid& grid, std::size_t n_paths,
                                     std::uint64_t seed, const BumpSpec& bump, double confidence = 0.99,
                                     const FdOptions& options = {});

}  // namespace vgreeks
