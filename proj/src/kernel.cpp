#include <vgreeks/kernel.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace vgreeks {

namespace {

void check_order(double t, double s) {
  if (!(s >= 0.0)) throw std::domain_error("kernel: s must be >= 0");
  if (s > t) throw std::domain_error("kernel: requires s <= t");
}

void check_lag(const KernelSpec& spec, double lag) {
  if (lag == 0.0 && spec.H < 0.5 && spec.eps == 0.0) {
    throw std::domain_error("kernel: K_H(t,t) diverges for H < 1/2 and eps = 0");
  }
}

// x^(2H) ln x with the x -> 0 limit.
double xlogx_pow(double x, double two_h) {
  if (x == 0.0) return 0.0;
  return std::pow(x, two_h) * std::log(x);
}

}  // namespace

void KernelSpec::validate() const {
  if (!(H > 0.0 && H < 1.0)) {
    throw std::invalid_argument("kernel: H must lie in (0,1), got " + std::to_string(H));
  }
  if (!(eps >= 0.0)) {
    throw std::invalid_argument("kernel: eps must be >= 0, got " + std::to_string(eps));
  }
}

double kernel_eval(const KernelSpec& spec, double t, double s) {
  check_order(t, s);
  if (spec.is_brownian()) return 1.0;
  const double lag = t - s + spec.eps;
  check_lag(spec, lag);
  return std::sqrt(2.0 * spec.H) * std::pow(lag, spec.H - 0.5);
}

double kernel_kappa(const KernelSpec& spec, double t) {
  if (!(t >= 0.0)) throw std::domain_error("kernel_kappa: t must be >= 0");
  if (spec.is_brownian()) return t;
  const double p = spec.H + 0.5;
  return std::sqrt(2.0 * spec.H) / p * (std::pow(t + spec.eps, p) - std::pow(spec.eps, p));
}

double kernel_variance(const KernelSpec& spec, double t) {
  if (!(t >= 0.0)) throw std::domain_error("kernel_variance: t must be >= 0");
  if (spec.is_brownian()) return t;
  const double p = 2.0 * spec.H;
  return std::pow(t + spec.eps, p) - std::pow(spec.eps, p);
}

double kernel_dH(const KernelSpec& spec, double t, double s) {
  check_order(t, s);
  const double lag = t - s + spec.eps;
  if (lag == 0.0) throw std::domain_error("kernel_dH: log singularity at t - s + eps = 0");
  return kernel_eval(spec, t, s) * (1.0 / (2.0 * spec.H) + std::log(lag));
}

double kernel_variance_dH(const KernelSpec& spec, double t) {
  if (!(t >= 0.0)) throw std::domain_error("kernel_variance_dH: t must be >= 0");
  const double p = 2.0 * spec.H;
  return 2.0 * (xlogx_pow(t + spec.eps, p) - xlogx_pow(spec.eps, p));
}

double kernel_sq_integral(const KernelSpec& spec, double t, double a, double b) {
  check_order(t, b);
  if (a > b) throw std::domain_error("kernel_sq_integral: requires a <= b");
  const double p = 2.0 * spec.H;
  return std::pow(t - a + spec.eps, p) - std::pow(t - b + spec.eps, p);
}

double kernel_sq_integral_dH(const KernelSpec& spec, double t, double a, double b) {
  check_order(t, b);
  if (a > b) throw std::domain_error("kernel_sq_integral_dH: requires a <= b");
  const double p = 2.0 * spec.H;
  return 2.0 * (xlogx_pow(t - a + spec.eps, p) - xlogx_pow(t - b + spec.eps, p));
}

}  // namespace vgreeks
