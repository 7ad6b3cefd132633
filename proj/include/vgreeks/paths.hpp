#pragma once
/**
 * @file paths.hpp
 * @brief Uniform time grid, correlated Brownian drivers and discretized
 *        Volterra paths.
 *
 * The Volterra process Y_t = int_0^t K(t,s) dZ_s is discretized on the grid
 * t_i = i dt by a lower-triangular convolution
 *
 *   Y_i = sum_{j<i} w_ij dZ_j,
 *
 * where dZ_j is the driver increment over [t_j, t_{j+1}]. The left-point
 * scheme uses w_ij = K(t_i, t_j) and never touches the diagonal t = s. The
 * cell-integrated scheme uses w_ij = sqrt(int_{t_j}^{t_{j+1}} K(t_i,s)^2 ds / dt),
 * which makes the per-cell variance exact.
 *
 * Random numbers come from per-path substreams keyed by (seed, path index)
 * so any path can be regenerated independently of the parallel schedule.
 */

#include <vgreeks/kernel.hpp>

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace vgreeks {

class TimeGrid {
public:
  TimeGrid(double horizon, std::size_t steps);

  [[nodiscard]] double horizon() const noexcept { return horizon_; }
  [[nodiscard]] std::size_t steps() const noexcept { return steps_; }
  [[nodiscard]] double dt() const noexcept { return dt_; }
  /// t_i = i dt; t_n is pinned to the horizon.
  [[nodiscard]] double time(std::size_t i) const noexcept {
    return i == steps_ ? horizon_ : static_cast<double>(i) * dt_;
  }

private:
  double horizon_;
  std::size_t steps_;
  double dt_;
};

/// Gaussian source for one simulated path.
class RandomStream {
public:
  RandomStream(std::uint64_t seed, std::uint64_t path_index);
  double normal() { return normal_(engine_); }

private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

struct DriverIncrements {
  std::vector<double> dW;   ///< price-driving Brownian increments
  std::vector<double> dWt;  ///< independent Brownian increments
  std::vector<double> dZ;   ///< rho dW + sqrt(1 - rho^2) dWt
  double rho = 0.0;

  [[nodiscard]] double terminal_W() const;
};

/// Values of a process at the grid times t_0..t_n.
using GridPath = std::vector<double>;

enum class ConvolutionScheme { left_point, cell_integrated };

[[nodiscard]] DriverIncrements gen_increments(const TimeGrid& grid, double rho, RandomStream& stream);

/// Assembles dZ from given dW, dWt (used when the Gaussians are supplied externally).
[[nodiscard]] DriverIncrements make_increments(std::vector<double> dW, std::vector<double> dWt, double rho);

/**
 * Precomputed lower-triangular convolution weights w_ij (j < i) for one
 * kernel on one grid. Row i holds w_i0..w_i,i-1. Building is O(n^2) and
 * should be done once per simulation run.
 */
class VolterraWeights {
public:
  /// Weights of the kernel itself.
  VolterraWeights(const KernelSpec& spec, const TimeGrid& grid,
                  ConvolutionScheme scheme = ConvolutionScheme::left_point);

  /// Weights of dK/dH under the same scheme.
  [[nodiscard]] static VolterraWeights dH(const KernelSpec& spec, const TimeGrid& grid,
                                          ConvolutionScheme scheme = ConvolutionScheme::left_point);

  [[nodiscard]] std::size_t steps() const noexcept { return steps_; }
  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * (i - 1) / 2, i};
  }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return row(i)[j]; }

  /// sum_{j<i} w_ij dt for each i = 0..n (the grid analogue of kappa(t_i)).
  [[nodiscard]] std::span<const double> discrete_kappa() const noexcept { return kappa_; }

  /// Y_i = sum_{j<i} w_ij dZ_j, Y_0 = 0.
  [[nodiscard]] GridPath convolve(std::span<const double> dZ) const;
  void convolve_into(std::span<const double> dZ, std::span<double> out) const;

private:
  VolterraWeights(std::size_t steps, double dt);
  void finish(double dt);

  std::size_t steps_;
  std::vector<double> data_;
  std::vector<double> kappa_;
};

[[nodiscard]] GridPath volterra_path(const KernelSpec& spec, const TimeGrid& grid, const DriverIncrements& inc,
                                     ConvolutionScheme scheme = ConvolutionScheme::left_point);

/// Path of dY/dH at fixed driver increments.
[[nodiscard]] GridPath volterra_dH_path(const KernelSpec& spec, const TimeGrid& grid, const DriverIncrements& inc,
                                        ConvolutionScheme scheme = ConvolutionScheme::left_point);

}  // namespace vgreeks
