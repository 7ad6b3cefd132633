#include <vgreeks/paths.hpp>

#include <cmath>
#include <stdexcept>
#include <utility>

namespace vgreeks {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

TimeGrid::TimeGrid(double horizon, std::size_t steps)
    : horizon_(horizon), steps_(steps), dt_(0.0) {
  if (!(horizon > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be > 0");
  if (steps == 0) throw std::invalid_argument("TimeGrid: steps must be positive");
  dt_ = horizon / static_cast<double>(steps);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t path_index)
    : engine_(splitmix64(splitmix64(seed) ^ splitmix64(~path_index))) {}

double DriverIncrements::terminal_W() const {
  double w = 0.0;
  for (double x : dW) w += x;
  return w;
}

DriverIncrements make_increments(std::vector<double> dW, std::vector<double> dWt, double rho) {
  if (!(std::abs(rho) <= 1.0)) throw std::domain_error("increments: |rho| must be <= 1");
  if (dW.size() != dWt.size()) throw std::invalid_argument("increments: dW and dWt size mismatch");
  DriverIncrements inc;
  inc.rho = rho;
  const double rho_bar = std::sqrt(1.0 - rho * rho);
  inc.dZ.resize(dW.size());
  for (std::size_t i = 0; i < dW.size(); ++i) inc.dZ[i] = rho * dW[i] + rho_bar * dWt[i];
  inc.dW = std::move(dW);
  inc.dWt = std::move(dWt);
  return inc;
}

DriverIncrements gen_increments(const TimeGrid& grid, double rho, RandomStream& stream) {
  if (!(std::abs(rho) <= 1.0)) throw std::domain_error("increments: |rho| must be <= 1");
  const std::size_t n = grid.steps();
  const double sd = std::sqrt(grid.dt());
  std::vector<double> dW(n), dWt(n);
  // Interleaved draws: (dW_i, dWt_i) pairs consume the stream in time order.
  for (std::size_t i = 0; i < n; ++i) {
    dW[i] = sd * stream.normal();
    dWt[i] = sd * stream.normal();
  }
  return make_increments(std::move(dW), std::move(dWt), rho);
}

VolterraWeights::VolterraWeights(std::size_t steps, double /*dt*/)
    : steps_(steps), data_(steps * (steps + 1) / 2, 0.0), kappa_(steps + 1, 0.0) {}

void VolterraWeights::finish(double dt) {
  for (std::size_t i = 1; i <= steps_; ++i) {
    double acc = 0.0;
    for (double w : row(i)) acc += w;
    kappa_[i] = acc * dt;
  }
}

VolterraWeights::VolterraWeights(const KernelSpec& spec, const TimeGrid& grid, ConvolutionScheme scheme)
    : VolterraWeights(grid.steps(), grid.dt()) {
  spec.validate();
  const double dt = grid.dt();
  for (std::size_t i = 1; i <= steps_; ++i) {
    const double ti = grid.time(i);
    double* w = data_.data() + i * (i - 1) / 2;
    for (std::size_t j = 0; j < i; ++j) {
      if (scheme == ConvolutionScheme::left_point) {
        w[j] = kernel_eval(spec, ti, grid.time(j));
      } else {
        w[j] = std::sqrt(kernel_sq_integral(spec, ti, grid.time(j), grid.time(j + 1)) / dt);
      }
    }
  }
  finish(dt);
}

VolterraWeights VolterraWeights::dH(const KernelSpec& spec, const TimeGrid& grid, ConvolutionScheme scheme) {
  spec.validate();
  VolterraWeights out(grid.steps(), grid.dt());
  const double dt = grid.dt();
  for (std::size_t i = 1; i <= out.steps_; ++i) {
    const double ti = grid.time(i);
    double* w = out.data_.data() + i * (i - 1) / 2;
    for (std::size_t j = 0; j < i; ++j) {
      if (scheme == ConvolutionScheme::left_point) {
        w[j] = kernel_dH(spec, ti, grid.time(j));
      } else {
        const double a = grid.time(j), b = grid.time(j + 1);
        const double c = kernel_sq_integral(spec, ti, a, b);
        w[j] = kernel_sq_integral_dH(spec, ti, a, b) / (2.0 * std::sqrt(c * dt));
      }
    }
  }
  out.finish(dt);
  return out;
}

void VolterraWeights::convolve_into(std::span<const double> dZ, std::span<double> out) const {
  if (dZ.size() != steps_ || out.size() != steps_ + 1) {
    throw std::invalid_argument("VolterraWeights::convolve: size mismatch");
  }
  out[0] = 0.0;
  for (std::size_t i = 1; i <= steps_; ++i) {
    const auto w = row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < i; ++j) acc += w[j] * dZ[j];
    out[i] = acc;
  }
}

GridPath VolterraWeights::convolve(std::span<const double> dZ) const {
  GridPath y(steps_ + 1);
  convolve_into(dZ, y);
  return y;
}

GridPath volterra_path(const KernelSpec& spec, const TimeGrid& grid, const DriverIncrements& inc,
                       ConvolutionScheme scheme) {
  return VolterraWeights(spec, grid, scheme).convolve(inc.dZ);
}

GridPath volterra_dH_path(const KernelSpec& spec, const TimeGrid& grid, const DriverIncrements& inc,
                          ConvolutionScheme scheme) {
  return VolterraWeights::dH(spec, grid, scheme).convolve(inc.dZ);
}

}  // namespace vgreeks
