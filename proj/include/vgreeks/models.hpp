#pragma once
/**
 * @file models.hpp
 * @brief Volatility models, price paths and Malliavin derivatives of the
 *        volatility with respect to the price-driving Brownian motion W.
 *
 * Every model is simulated on the grid of paths.hpp. Derivatives are those of
 * the discretized scheme with respect to the Gaussian increments dW_j, so
 * D[j][i] = dV_i/d(dW_j) vanishes for j >= i (the volatility at t_i only
 * sees increments strictly before t_i).
 *
 * Volatility maps sigma(.):
 *   - AlphaRFSV, MixedAlphaRFSV, RoughSteinStein, SteinStein, BlackScholes: sigma(x) = x
 *   - AlphaSV: sigma(x) = sqrt(x), V is a variance
 */

#include <vgreeks/kernel.hpp>
#include <vgreeks/paths.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vgreeks {

/// Requested (kind, model) pair has no implementation.
class UnsupportedError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// alpha = 1 is rough Bergomi, alpha = 0 the non-stationary RFSV model.
struct AlphaRFSV {
  double V0 = 0.2;
  double xi = 0.0;
  double alpha = 1.0;
  double rho = 0.0;
  KernelSpec kernel{};
};

/// Average of two AlphaRFSV factors (H < 1/2 and H' > 1/2) sharing V0, alpha and dZ.
struct MixedAlphaRFSV {
  double V0 = 0.2;
  double xiH = 0.0;
  double xiHp = 0.0;
  double alpha = 1.0;
  double rho = 0.0;
  KernelSpec kernelH{};
  KernelSpec kernelHp{};
};

/// V_t = V0 + int kappa (theta - V_u) du + nu int K_H(t,u) dZ_u.
struct RoughSteinStein {
  double V0 = 0.2;
  double kappa = 1.0;
  double theta = 0.2;
  double nu = 0.1;
  double rho = 0.0;
  KernelSpec kernel{};
};

/// Non-fractional exponential model; V is the variance.
struct AlphaSV {
  double V0 = 0.04;
  double xi = 0.0;
  double alpha = 1.0;
  double rho = 0.0;
};

/// Ornstein-Uhlenbeck volatility.
struct SteinStein {
  double V0 = 0.2;
  double kappa = 1.0;
  double theta = 0.2;
  double nu = 0.1;
  double rho = 0.0;
};

struct BlackScholes {
  double sigma = 0.2;
};

using ModelSpec = std::variant<AlphaRFSV, MixedAlphaRFSV, RoughSteinStein, AlphaSV, SteinStein, BlackScholes>;

struct MarketSpec {
  double S0 = 100.0;
  double r = 0.0;

  void validate() const;
};

[[nodiscard]] std::string_view model_name(const ModelSpec& model) noexcept;

/// Full parameter-domain check, including the H < 1/2 < H' ordering of the mixed model.
void validate(const ModelSpec& model);

/// Correlation between dW and dZ (zero for Black-Scholes).
[[nodiscard]] double correlation(const ModelSpec& model) noexcept;

/// True when V is a variance and sigma(x) = sqrt(x).
[[nodiscard]] bool uses_sqrt_sigma(const ModelSpec& model) noexcept;

/// sigma(x) and its first three derivatives for the model's volatility map.
struct SigmaDerivs {
  double s0, s1, s2, s3;
};
[[nodiscard]] SigmaDerivs sigma_derivs(const ModelSpec& model, double x);

/// One simulated scenario.
struct PathBundle {
  DriverIncrements inc;
  GridPath Y;     ///< Volterra path (first factor for the mixed model; Z for AlphaSV)
  GridPath Yp;    ///< second Volterra path (mixed model only)
  GridPath VH;    ///< factor volatility paths (mixed model only)
  GridPath VHp;
  GridPath V;     ///< volatility, or variance for AlphaSV
  GridPath S;     ///< price
  GridPath dYdH;  ///< dY/dH, filled when H-sensitivities are requested
};

/// Dense (n+1)x(n+1) grid with D[j][i] = D_{t_j} V_{t_i}.
class MalliavinGrid {
public:
  explicit MalliavinGrid(std::size_t steps) : dim_(steps + 1), data_(dim_ * dim_, 0.0) {}

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] double at(std::size_t j, std::size_t i) const { return data_[j * dim_ + i]; }
  double& at(std::size_t j, std::size_t i) { return data_[j * dim_ + i]; }

  /// sum_{j<i} D[j][i] dt
  [[nodiscard]] double column_integral(std::size_t i, double dt) const;

private:
  std::size_t dim_;
  std::vector<double> data_;
};

/// Iterated directional derivatives of V along the unit shift of W, i.e.
/// d1_i = sum_j D_j V_i dt, d2_i = sum_{j,k} D_j D_k V_i dt^2, d3 likewise.
struct DirectionalDerivatives {
  GridPath d1, d2, d3;
};

enum class SensitivityParam { V0, H };

/**
 * Precomputed simulation state for one (model, market, grid) triple.
 *
 * Holds the convolution weights so that simulating a path costs one O(n^2)
 * convolution per Volterra factor. Immutable after construction and safe to
 * share between worker threads.
 */
class ModelEngine {
public:
  ModelEngine(ModelSpec model, MarketSpec market, TimeGrid grid,
              ConvolutionScheme scheme = ConvolutionScheme::left_point, bool with_dH = false);

  [[nodiscard]] const ModelSpec& model() const noexcept { return model_; }
  [[nodiscard]] const MarketSpec& market() const noexcept { return market_; }
  [[nodiscard]] const TimeGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] ConvolutionScheme scheme() const noexcept { return scheme_; }
  [[nodiscard]] double rho() const noexcept { return correlation(model_); }

  /// Convolution weights of the (first) factor, or nullptr for non-fractional models.
  [[nodiscard]] const VolterraWeights* weights() const noexcept { return weights_ ? &*weights_ : nullptr; }
  [[nodiscard]] const VolterraWeights* weights_second() const noexcept { return weights2_ ? &*weights2_ : nullptr; }
  [[nodiscard]] const VolterraWeights* weights_dH() const noexcept { return weights_dH_ ? &*weights_dH_ : nullptr; }

  [[nodiscard]] DriverIncrements increments(std::uint64_t seed, std::uint64_t path) const;
  [[nodiscard]] PathBundle simulate(const DriverIncrements& inc) const;
  [[nodiscard]] PathBundle simulate(std::uint64_t seed, std::uint64_t path) const;

  /// Volatility path plus auxiliary Volterra paths written into `out`.
  void vol_path(PathBundle& out) const;
  void price_path(PathBundle& out) const;

  [[nodiscard]] MalliavinGrid malliavin_dV(const PathBundle& b) const;
  [[nodiscard]] GridPath malliavin_ddV(const PathBundle& b, std::size_t s, std::size_t t) const;
  [[nodiscard]] DirectionalDerivatives directional(const PathBundle& b) const;
  [[nodiscard]] GridPath dtheta_vol(const PathBundle& b, SensitivityParam which) const;

  /// Whether dtheta_vol supports `which` for this model.
  [[nodiscard]] bool supports_theta(SensitivityParam which) const noexcept;

private:
  ModelSpec model_;
  MarketSpec market_;
  TimeGrid grid_;
  ConvolutionScheme scheme_;
  std::optional<VolterraWeights> weights_;
  std::optional<VolterraWeights> weights2_;
  std::optional<VolterraWeights> weights_dH_;
  std::optional<MalliavinGrid> deterministic_dV_;  // Stein-Stein family
};

// Free-function surface; each call builds a throwaway engine.
[[nodiscard]] PathBundle vol_path(const ModelSpec& model, const TimeGrid& grid, const DriverIncrements& inc,
                                  ConvolutionScheme scheme = ConvolutionScheme::left_point);
[[nodiscard]] GridPath price_path(const MarketSpec& market, const ModelSpec& model, const TimeGrid& grid,
                                  std::span<const double> V, std::span<const double> dW);
[[nodiscard]] MalliavinGrid malliavin_dV(const ModelSpec& model, const TimeGrid& grid, const PathBundle& b);
[[nodiscard]] GridPath malliavin_ddV(const ModelSpec& model, const TimeGrid& grid, const PathBundle& b,
                                     std::size_t s, std::size_t t);
[[nodiscard]] GridPath dtheta_vol(const ModelSpec& model, const TimeGrid& grid, const PathBundle& b,
                                  SensitivityParam which);

}  // namespace vgreeks
