#pragma once
/**
 * @file weights.hpp
 * @brief Malliavin weight ingredients and Greek weight assembly.
 *
 * With D_t S_T = S_T G(t,T), every weight is built from
 *
 *   intG    = int_0^T G(t,T) dt
 *   iintDsG = int_0^T int_0^T D_s G(t,T) dt ds
 *   W_T
 *
 * All stochastic integrals use the left-point (Ito) rule and all time
 * integrals left-point rectangles, over the same grid as the simulation.
 *
 * Three evaluation routes exist and are cross-checked in the tests:
 *   - generic:     literal quadrature of G(t,T) and D_s G(t,T) from the
 *                  Malliavin grid D_t V_s and a second-derivative provider
 *                  (O(n^2) for intG, O(n^3) for iintDsG);
 *   - alpharfsv:   closed forms for the AlphaRFSV model, O(n);
 *   - directional: the same sums contracted through the iterated derivatives
 *                  of V along the unit shift of W, O(n) given those
 *                  derivatives; also yields the third-order term needed by
 *                  Gamma.
 */

#include <vgreeks/models.hpp>

#include <cmath>
#include <functional>
#include <stdexcept>

namespace vgreeks {

/// |intG| below this makes the path's weight undefined; such paths are discarded.
inline constexpr double kDegenerateIntG = 1e-12;

class DegenerateWeightError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct WeightComponents {
  double intG = 0.0;
  double iintDsG = 0.0;
  double WT = 0.0;
  /// sum_j D_j(iintDsG) dt; only populated by the directional route (Gamma).
  double iiintDDsG = 0.0;
};

[[nodiscard]] inline bool is_degenerate(const WeightComponents& w) noexcept {
  return !(std::abs(w.intG) >= kDegenerateIntG);
}

[[nodiscard]] double compute_intG_generic(const ModelEngine& engine, const PathBundle& b, const MalliavinGrid& DV);
[[nodiscard]] double compute_intG_alpharfsv(const ModelEngine& engine, const PathBundle& b);
[[nodiscard]] double compute_iintDsG_alpharfsv(const ModelEngine& engine, const PathBundle& b);

/// Returns D_t D_s V_r over r for grid indices (s, t).
using SecondDerivativeProvider = std::function<GridPath(std::size_t s, std::size_t t)>;

[[nodiscard]] double compute_iintDsG_generic(const ModelEngine& engine, const PathBundle& b, const MalliavinGrid& DV,
                                             const SecondDerivativeProvider& ddV);

/// Convenience: generic route with the engine's own second derivative.
[[nodiscard]] double compute_iintDsG_generic(const ModelEngine& engine, const PathBundle& b, const MalliavinGrid& DV);

[[nodiscard]] WeightComponents compute_directional(const ModelEngine& engine, const PathBundle& b,
                                                   const DirectionalDerivatives& d);

/// Fastest available route for the engine's model.
[[nodiscard]] WeightComponents weight_components(const ModelEngine& engine, const PathBundle& b);

/// W_T / intG + iintDsG / intG^2. Throws DegenerateWeightError for |intG| < 1e-12.
[[nodiscard]] double assemble_delta_weight(const WeightComponents& w);

/// Numerator of a parameter sensitivity: dS_T/dtheta = S_T * N, and intDN = sum_j D_j N dt.
struct ThetaNumerator {
  double N = 0.0;
  double intDN = 0.0;
};

[[nodiscard]] ThetaNumerator assemble_vega_numerator(const ModelEngine& engine, const PathBundle& b,
                                                     const MalliavinGrid& DV, SensitivityParam which);
/// Same, with the directional derivative sum_j D_j V_i dt supplied directly.
[[nodiscard]] ThetaNumerator assemble_vega_numerator(const ModelEngine& engine, const PathBundle& b,
                                                     std::span<const double> dV_directional,
                                                     SensitivityParam which);

/// delta(N / intG) = (N W_T - intDN) / intG + N iintDsG / intG^2.
[[nodiscard]] double assemble_theta_weight(const ThetaNumerator& num, const WeightComponents& w);

/**
 * Second-order weight: Gamma = e^{-rT}/S0^2 E[f(S_T) * weight], with
 * weight = delta(pi / intG) - pi and pi the Delta weight. Needs iiintDDsG.
 */
[[nodiscard]] double assemble_gamma_weight(const WeightComponents& w, double horizon);

}  // namespace vgreeks
