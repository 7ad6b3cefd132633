#include <vgreeks/models.hpp>

#include <cmath>
#include <string>
#include <type_traits>

namespace vgreeks {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void check_rho(double rho, std::string_view model) {
  require(std::abs(rho) <= 1.0, std::string(model) + ": rho must lie in [-1,1]");
}

// Parameter domains shared by validate() and the engine. The engine accepts
// xi = 0 and a mixed model with equal kernels (degenerate test configurations).
void check_domain(const ModelSpec& model) {
  std::visit(overloaded{
                 [](const AlphaRFSV& m) {
                   require(m.V0 > 0.0, "alpha_rfsv: V0 must be > 0");
                   require(m.xi >= 0.0, "alpha_rfsv: xi must be >= 0");
                   require(m.alpha >= 0.0 && m.alpha <= 1.0, "alpha_rfsv: alpha must lie in [0,1]");
                   check_rho(m.rho, "alpha_rfsv");
                   m.kernel.validate();
                 },
                 [](const MixedAlphaRFSV& m) {
                   require(m.V0 > 0.0, "mixed_alpha_rfsv: V0 must be > 0");
                   require(m.xiH >= 0.0 && m.xiHp >= 0.0, "mixed_alpha_rfsv: xi must be >= 0");
                   require(m.alpha >= 0.0 && m.alpha <= 1.0, "mixed_alpha_rfsv: alpha must lie in [0,1]");
                   check_rho(m.rho, "mixed_alpha_rfsv");
                   m.kernelH.validate();
                   m.kernelHp.validate();
                 },
                 [](const RoughSteinStein& m) {
                   require(m.kappa >= 0.0, "rough_stein_stein: kappa must be >= 0");
                   require(m.theta >= 0.0, "rough_stein_stein: theta must be >= 0");
                   require(m.nu >= 0.0, "rough_stein_stein: nu must be >= 0");
                   check_rho(m.rho, "rough_stein_stein");
                   m.kernel.validate();
                 },
                 [](const AlphaSV& m) {
                   require(m.V0 > 0.0, "alpha_sv: V0 must be > 0");
                   require(m.xi >= 0.0, "alpha_sv: xi must be >= 0");
                   require(m.alpha >= 0.0 && m.alpha <= 1.0, "alpha_sv: alpha must lie in [0,1]");
                   check_rho(m.rho, "alpha_sv");
                 },
                 [](const SteinStein& m) {
                   require(m.kappa >= 0.0, "stein_stein: kappa must be >= 0");
                   require(m.theta >= 0.0, "stein_stein: theta must be >= 0");
                   require(m.nu >= 0.0, "stein_stein: nu must be >= 0");
                   check_rho(m.rho, "stein_stein");
                 },
                 [](const BlackScholes& m) { require(m.sigma > 0.0, "black_scholes: sigma must be > 0"); },
             },
             model);
}

constexpr KernelSpec kBrownianKernel{0.5, 0.0};

// D[k][i] for V_i = V0 + sum_{m<i} kappa (theta - V_m) dt + nu sum_{m<i} w_im dZ_m.
// Differentiating gives the discrete linear integral equation
//   D[k][i] = rho nu w_ik - kappa dt sum_{k<m<i} D[k][m].
MalliavinGrid stein_stein_dV(const VolterraWeights& w, double rho, double nu, double kappa, double dt) {
  const std::size_t n = w.steps();
  MalliavinGrid D(n);
  for (std::size_t k = 0; k < n; ++k) {
    double running = 0.0;
    for (std::size_t i = k + 1; i <= n; ++i) {
      const double d = rho * nu * w(i, k) - kappa * dt * running;
      D.at(k, i) = d;
      running += d;
    }
  }
  return D;
}

}  // namespace

void MarketSpec::validate() const {
  require(S0 > 0.0, "market: S0 must be > 0");
  require(r >= 0.0, "market: r must be >= 0");
}

std::string_view model_name(const ModelSpec& model) noexcept {
  return std::visit(overloaded{
                        [](const AlphaRFSV&) { return std::string_view("alpha_rfsv"); },
                        [](const MixedAlphaRFSV&) { return std::string_view("mixed_alpha_rfsv"); },
                        [](const RoughSteinStein&) { return std::string_view("rough_stein_stein"); },
                        [](const AlphaSV&) { return std::string_view("alpha_sv"); },
                        [](const SteinStein&) { return std::string_view("stein_stein"); },
                        [](const BlackScholes&) { return std::string_view("black_scholes"); },
                    },
                    model);
}

void validate(const ModelSpec& model) {
  check_domain(model);
  if (const auto* m = std::get_if<MixedAlphaRFSV>(&model)) {
    require(m->kernelH.H < 0.5 && m->kernelHp.H > 0.5, "mixed_alpha_rfsv: requires H < 1/2 < Hp");
  }
}

double correlation(const ModelSpec& model) noexcept {
  return std::visit(
      [](const auto& m) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, BlackScholes>) {
          return 0.0;
        } else {
          return m.rho;
        }
      },
      model);
}

bool uses_sqrt_sigma(const ModelSpec& model) noexcept { return std::holds_alternative<AlphaSV>(model); }

SigmaDerivs sigma_derivs(const ModelSpec& model, double x) {
  if (!uses_sqrt_sigma(model)) return {x, 1.0, 0.0, 0.0};
  const double s = std::sqrt(x);
  return {s, 0.5 / s, -0.25 / (x * s), 0.375 / (x * x * s)};
}

double MalliavinGrid::column_integral(std::size_t i, double dt) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < i; ++j) acc += at(j, i);
  return acc * dt;
}

ModelEngine::ModelEngine(ModelSpec model, MarketSpec market, TimeGrid grid, ConvolutionScheme scheme,
                         bool with_dH)
    : model_(std::move(model)), market_(market), grid_(grid), scheme_(scheme) {
  check_domain(model_);
  market_.validate();
  std::visit(overloaded{
                 [&](const AlphaRFSV& m) {
                   weights_.emplace(m.kernel, grid_, scheme_);
                   if (with_dH) weights_dH_ = VolterraWeights::dH(m.kernel, grid_, scheme_);
                 },
                 [&](const MixedAlphaRFSV& m) {
                   weights_.emplace(m.kernelH, grid_, scheme_);
                   weights2_.emplace(m.kernelHp, grid_, scheme_);
                 },
                 [&](const RoughSteinStein& m) {
                   weights_.emplace(m.kernel, grid_, scheme_);
                   deterministic_dV_ = stein_stein_dV(*weights_, m.rho, m.nu, m.kappa, grid_.dt());
                 },
                 [&](const AlphaSV&) {},
                 [&](const SteinStein& m) {
                   const VolterraWeights unit(kBrownianKernel, grid_);
                   deterministic_dV_ = stein_stein_dV(unit, m.rho, m.nu, m.kappa, grid_.dt());
                 },
                 [&](const BlackScholes&) {},
             },
             model_);
}

DriverIncrements ModelEngine::increments(std::uint64_t seed, std::uint64_t path) const {
  RandomStream stream(seed, path);
  return gen_increments(grid_, rho(), stream);
}

PathBundle ModelEngine::simulate(const DriverIncrements& inc) const {
  if (inc.dW.size() != grid_.steps()) throw std::invalid_argument("simulate: increments do not match grid");
  PathBundle b;
  b.inc = inc;
  vol_path(b);
  price_path(b);
  return b;
}

PathBundle ModelEngine::simulate(std::uint64_t seed, std::uint64_t path) const {
  PathBundle b;
  b.inc = increments(seed, path);
  vol_path(b);
  price_path(b);
  return b;
}

void ModelEngine::vol_path(PathBundle& b) const {
  const std::size_t n = grid_.steps();
  const double dt = grid_.dt();
  const auto& dZ = b.inc.dZ;
  b.V.assign(n + 1, 0.0);

  auto exp_factor = [&](const VolterraWeights& w, const KernelSpec& k, double V0, double xi, double alpha,
                        GridPath& Y, GridPath& V) {
    Y.resize(n + 1);
    w.convolve_into(dZ, Y);
    V.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      V[i] = V0 * std::exp(xi * Y[i] - 0.5 * alpha * xi * xi * kernel_variance(k, grid_.time(i)));
    }
  };

  std::visit(overloaded{
                 [&](const AlphaRFSV& m) {
                   exp_factor(*weights_, m.kernel, m.V0, m.xi, m.alpha, b.Y, b.V);
                   if (weights_dH_) b.dYdH = weights_dH_->convolve(dZ);
                 },
                 [&](const MixedAlphaRFSV& m) {
                   exp_factor(*weights_, m.kernelH, m.V0, m.xiH, m.alpha, b.Y, b.VH);
                   exp_factor(*weights2_, m.kernelHp, m.V0, m.xiHp, m.alpha, b.Yp, b.VHp);
                   for (std::size_t i = 0; i <= n; ++i) b.V[i] = 0.5 * (b.VH[i] + b.VHp[i]);
                 },
                 [&](const RoughSteinStein& m) {
                   b.Y = weights_->convolve(dZ);
                   double drift = 0.0;
                   b.V[0] = m.V0 + m.nu * b.Y[0];
                   for (std::size_t i = 1; i <= n; ++i) {
                     drift += m.kappa * (m.theta - b.V[i - 1]) * dt;
                     b.V[i] = m.V0 + drift + m.nu * b.Y[i];
                   }
                 },
                 [&](const AlphaSV& m) {
                   b.Y.assign(n + 1, 0.0);
                   for (std::size_t i = 0; i < n; ++i) b.Y[i + 1] = b.Y[i] + dZ[i];
                   for (std::size_t i = 0; i <= n; ++i) {
                     b.V[i] = m.V0 * std::exp(m.xi * b.Y[i] - 0.5 * m.alpha * m.xi * m.xi * grid_.time(i));
                   }
                 },
                 [&](const SteinStein& m) {
                   b.V[0] = m.V0;
                   for (std::size_t i = 0; i < n; ++i) {
                     b.V[i + 1] = b.V[i] + m.kappa * (m.theta - b.V[i]) * dt + m.nu * dZ[i];
                   }
                 },
                 [&](const BlackScholes& m) { b.V.assign(n + 1, m.sigma); },
             },
             model_);
}

void ModelEngine::price_path(PathBundle& b) const {
  b.S = vgreeks::price_path(market_, model_, grid_, b.V, b.inc.dW);
}

MalliavinGrid ModelEngine::malliavin_dV(const PathBundle& b) const {
  if (deterministic_dV_) return *deterministic_dV_;
  const std::size_t n = grid_.steps();
  MalliavinGrid D(n);
  std::visit(overloaded{
                 [&](const AlphaRFSV& m) {
                   for (std::size_t i = 1; i <= n; ++i) {
                     const double c = m.rho * m.xi * b.V[i];
                     const auto w = weights_->row(i);
                     for (std::size_t j = 0; j < i; ++j) D.at(j, i) = c * w[j];
                   }
                 },
                 [&](const MixedAlphaRFSV& m) {
                   for (std::size_t i = 1; i <= n; ++i) {
                     const double c1 = 0.5 * m.rho * m.xiH * b.VH[i];
                     const double c2 = 0.5 * m.rho * m.xiHp * b.VHp[i];
                     const auto w1 = weights_->row(i);
                     const auto w2 = weights2_->row(i);
                     for (std::size_t j = 0; j < i; ++j) D.at(j, i) = c1 * w1[j] + c2 * w2[j];
                   }
                 },
                 [&](const AlphaSV& m) {
                   for (std::size_t i = 1; i <= n; ++i) {
                     for (std::size_t j = 0; j < i; ++j) D.at(j, i) = m.rho * m.xi * b.V[i];
                   }
                 },
                 [&](const auto&) {},
             },
             model_);
  return D;
}

GridPath ModelEngine::malliavin_ddV(const PathBundle& b, std::size_t s, std::size_t t) const {
  const std::size_t n = grid_.steps();
  if (s > n || t > n) throw std::out_of_range("malliavin_ddV: index outside grid");
  GridPath out(n + 1, 0.0);
  const std::size_t first = std::max(s, t) + 1;
  std::visit(overloaded{
                 [&](const AlphaRFSV& m) {
                   const double c = m.rho * m.rho * m.xi * m.xi;
                   for (std::size_t r = first; r <= n; ++r) out[r] = c * ((*weights_)(r, s) * (*weights_)(r, t)) * b.V[r];
                 },
                 [&](const MixedAlphaRFSV& m) {
                   const double c1 = 0.5 * m.rho * m.rho * m.xiH * m.xiH;
                   const double c2 = 0.5 * m.rho * m.rho * m.xiHp * m.xiHp;
                   for (std::size_t r = first; r <= n; ++r) {
                     out[r] = c1 * ((*weights_)(r, s) * (*weights_)(r, t)) * b.VH[r] +
                              c2 * ((*weights2_)(r, s) * (*weights2_)(r, t)) * b.VHp[r];
                   }
                 },
                 [&](const AlphaSV& m) {
                   const double c = m.rho * m.rho * m.xi * m.xi;
                   for (std::size_t r = first; r <= n; ++r) out[r] = c * b.V[r];
                 },
                 // Stein-Stein family: D V is deterministic, so D D V = 0; Black-Scholes: D V = 0.
                 [&](const auto&) {},
             },
             model_);
  return out;
}

DirectionalDerivatives ModelEngine::directional(const PathBundle& b) const {
  const std::size_t n = grid_.steps();
  const double dt = grid_.dt();
  DirectionalDerivatives d{GridPath(n + 1, 0.0), GridPath(n + 1, 0.0), GridPath(n + 1, 0.0)};
  auto exp_factor = [&](double scale, std::span<const double> kappa, std::span<const double> V) {
    for (std::size_t i = 0; i <= n; ++i) {
      const double a = scale * kappa[i];
      d.d1[i] += a * V[i];
      d.d2[i] += a * a * V[i];
      d.d3[i] += a * a * a * V[i];
    }
  };
  std::visit(overloaded{
                 [&](const AlphaRFSV& m) { exp_factor(m.rho * m.xi, weights_->discrete_kappa(), b.V); },
                 [&](const MixedAlphaRFSV& m) {
                   exp_factor(m.rho * m.xiH, weights_->discrete_kappa(), b.VH);
                   exp_factor(m.rho * m.xiHp, weights2_->discrete_kappa(), b.VHp);
                   for (std::size_t i = 0; i <= n; ++i) {
                     d.d1[i] *= 0.5;
                     d.d2[i] *= 0.5;
                     d.d3[i] *= 0.5;
                   }
                 },
                 [&](const AlphaSV& m) {
                   GridPath t(n + 1);
                   for (std::size_t i = 0; i <= n; ++i) t[i] = static_cast<double>(i) * dt;
                   exp_factor(m.rho * m.xi, t, b.V);
                 },
                 [&](const auto&) {
                   if (deterministic_dV_) {
                     for (std::size_t i = 0; i <= n; ++i) d.d1[i] = deterministic_dV_->column_integral(i, dt);
                   }
                 },
             },
             model_);
  return d;
}

bool ModelEngine::supports_theta(SensitivityParam which) const noexcept {
  if (std::holds_alternative<AlphaRFSV>(model_)) return true;
  return which == SensitivityParam::V0 && std::holds_alternative<BlackScholes>(model_);
}

GridPath ModelEngine::dtheta_vol(const PathBundle& b, SensitivityParam which) const {
  if (!supports_theta(which)) {
    throw UnsupportedError("dtheta_vol: parameter sensitivity not available for model " +
                           std::string(model_name(model_)));
  }
  const std::size_t n = grid_.steps();
  GridPath out(n + 1, 1.0);
  const auto* m = std::get_if<AlphaRFSV>(&model_);
  if (m == nullptr) return out;  // Black-Scholes: dsigma/dsigma = 1
  if (which == SensitivityParam::V0) {
    for (std::size_t i = 0; i <= n; ++i) out[i] = b.V[i] / m->V0;
    return out;
  }
  if (b.dYdH.size() != n + 1) throw std::invalid_argument("dtheta_vol: bundle lacks dY/dH path");
  for (std::size_t i = 0; i <= n; ++i) {
    const double drH = kernel_variance_dH(m->kernel, grid_.time(i));
    out[i] = b.V[i] * (m->xi * b.dYdH[i] - 0.5 * m->alpha * m->xi * m->xi * drH);
  }
  return out;
}

PathBundle vol_path(const ModelSpec& model, const TimeGrid& grid, const DriverIncrements& inc,
                    ConvolutionScheme scheme) {
  const ModelEngine engine(model, MarketSpec{}, grid, scheme);
  PathBundle b;
  b.inc = inc;
  engine.vol_path(b);
  return b;
}

GridPath price_path(const MarketSpec& market, const ModelSpec& model, const TimeGrid& grid,
                    std::span<const double> V, std::span<const double> dW) {
  const std::size_t n = grid.steps();
  if (V.size() != n + 1 || dW.size() != n) throw std::invalid_argument("price_path: size mismatch");
  const double dt = grid.dt();
  const bool sqrt_sigma = uses_sqrt_sigma(model);
  GridPath S(n + 1);
  S[0] = market.S0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sig = sqrt_sigma ? std::sqrt(V[i]) : V[i];
    S[i + 1] = S[i] * std::exp((market.r - 0.5 * sig * sig) * dt + sig * dW[i]);
  }
  return S;
}

MalliavinGrid malliavin_dV(const ModelSpec& model, const TimeGrid& grid, const PathBundle& b) {
  return ModelEngine(model, MarketSpec{}, grid).malliavin_dV(b);
}

GridPath malliavin_ddV(const ModelSpec& model, const TimeGrid& grid, const PathBundle& b, std::size_t s,
                       std::size_t t) {
  return ModelEngine(model, MarketSpec{}, grid).malliavin_ddV(b, s, t);
}

GridPath dtheta_vol(const ModelSpec& model, const TimeGrid& grid, const PathBundle& b, SensitivityParam which) {
  return ModelEngine(model, MarketSpec{}, grid).dtheta_vol(b, which);
}

}  // namespace vgreeks
