#pragma once
/**
 * @file kernel.hpp
 * @brief Approximate Riemann-Liouville Volterra kernel
 *
 *   K_H(t,s) = sqrt(2H) (t - s + eps)^(H - 1/2),   0 <= s <= t,
 *
 * together with the closed-form quantities derived from it:
 *   kappa(t)    = int_0^t K_H(t,s) ds
 *   variance(t) = int_0^t K_H(t,s)^2 ds = (t + eps)^(2H) - eps^(2H)
 *   dK/dH       = K_H(t,s) (1/(2H) + ln(t - s + eps))
 *
 * For eps > 0 the process driven by this kernel is a semimartingale; eps = 0
 * recovers the simplified Riemann-Liouville kernel.
 */

namespace vgreeks {

/// Default regularization of the kernel singularity.
inline constexpr double kDefaultEpsilon = 1e-6;

struct KernelSpec {
  double H = 0.5;
  double eps = kDefaultEpsilon;

  /// Throws std::invalid_argument unless 0 < H < 1 and eps >= 0.
  void validate() const;

  /// H = 1/2 and eps = 0: the kernel is identically one (Brownian case).
  [[nodiscard]] bool is_brownian() const noexcept { return H == 0.5 && eps == 0.0; }
};

[[nodiscard]] double kernel_eval(const KernelSpec& spec, double t, double s);
[[nodiscard]] double kernel_kappa(const KernelSpec& spec, double t);
[[nodiscard]] double kernel_variance(const KernelSpec& spec, double t);
[[nodiscard]] double kernel_dH(const KernelSpec& spec, double t, double s);

/// d/dH of kernel_variance: 2 (t+eps)^(2H) ln(t+eps) - 2 eps^(2H) ln(eps).
/// The eps^(2H) ln(eps) term is taken as its limit 0 when eps = 0.
[[nodiscard]] double kernel_variance_dH(const KernelSpec& spec, double t);

/// Exact integral of K_H(t,s)^2 over s in [a, b] with a <= b <= t.
[[nodiscard]] double kernel_sq_integral(const KernelSpec& spec, double t, double a, double b);

/// d/dH of kernel_sq_integral.
[[nodiscard]] double kernel_sq_integral_dH(const KernelSpec& spec, double t, double a, double b);

}  // namespace vgreeks
