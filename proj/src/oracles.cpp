#include <vgreeks/oracles.hpp>

#include <vgreeks/stats.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace vgreeks {

namespace {

constexpr std::uint64_t kIndependentSeedSalt = 0x5bd1e9955bd1e995ULL;

ModelSpec bump_model(const ModelSpec& model, BumpParameter param, double step) {
  ModelSpec out = model;
  const bool done = std::visit(
      [&](auto& m) -> bool {
        using M = std::decay_t<decltype(m)>;
        if (param == BumpParameter::V0) {
          if constexpr (std::is_same_v<M, BlackScholes>) {
            m.sigma += step;
          } else {
            m.V0 += step;
          }
          return true;
        }
        if constexpr (std::is_same_v<M, AlphaRFSV> || std::is_same_v<M, RoughSteinStein>) {
          m.kernel.H += step;
          return true;
        } else if constexpr (std::is_same_v<M, MixedAlphaRFSV>) {
          m.kernelH.H += step;
          return true;
        }
        return false;
      },
      out);
  if (!done) {
    throw UnsupportedError("fd_greek: model " + std::string(model_name(model)) + " has no Hurst parameter");
  }
  try {
    validate(out);
  } catch (const std::invalid_argument& e) {
    throw std::domain_error(std::string("fd_greek: bump leaves the parameter domain: ") + e.what());
  }
  return out;
}

double base_value(const ModelSpec& model, const MarketSpec& market, BumpParameter param) {
  switch (param) {
    case BumpParameter::S0: return market.S0;
    case BumpParameter::r: return market.r;
    case BumpParameter::V0:
      return std::visit(
          [](const auto& m) -> double {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, BlackScholes>) {
              return m.sigma;
            } else {
              return m.V0;
            }
          },
          model);
    case BumpParameter::H: return 0.0;
  }
  return 0.0;
}

}  // namespace

BsValues bs_price_greeks(const MarketSpec& market, const OptionSpec& opt, double sigma) {
  market.validate();
  opt.validate();
  if (!(sigma > 0.0)) throw std::domain_error("bs_price_greeks: sigma must be > 0");
  const double S = market.S0, K = opt.K, T = opt.T, r = market.r;
  const double sqT = std::sqrt(T);
  const double d1 = (std::log(S / K) + (r + 0.5 * sigma * sigma) * T) / (sigma * sqT);
  const double d2 = d1 - sigma * sqT;
  const double disc = std::exp(-r * T);
  BsValues v;
  switch (opt.payoff) {
    case PayoffKind::call:
      v.price = S * normal_cdf(d1) - K * disc * normal_cdf(d2);
      v.delta = normal_cdf(d1);
      v.gamma = normal_pdf(d1) / (S * sigma * sqT);
      v.vega = S * normal_pdf(d1) * sqT;
      v.rho = K * T * disc * normal_cdf(d2);
      break;
    case PayoffKind::put:
      v.price = K * disc * normal_cdf(-d2) - S * normal_cdf(-d1);
      v.delta = normal_cdf(d1) - 1.0;
      v.gamma = normal_pdf(d1) / (S * sigma * sqT);
      v.vega = S * normal_pdf(d1) * sqT;
      v.rho = -K * T * disc * normal_cdf(-d2);
      break;
    case PayoffKind::digital_call:
      v.price = disc * normal_cdf(d2);
      v.delta = disc * normal_pdf(d2) / (S * sigma * sqT);
      v.gamma = -disc * normal_pdf(d2) * d1 / (S * S * sigma * sigma * T);
      v.vega = -disc * normal_pdf(d2) * d1 / sigma;
      v.rho = -T * v.price + disc * normal_pdf(d2) * sqT / sigma;
      break;
  }
  return v;
}

std::optional<double> bs_value(const BsValues& v, GreekKind kind) noexcept {
  switch (kind) {
    case GreekKind::price: return v.price;
    case GreekKind::delta: return v.delta;
    case GreekKind::gamma: return v.gamma;
    case GreekKind::rho: return v.rho;
    case GreekKind::vega: return v.vega;
    case GreekKind::hsens: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<double> constant_volatility(const ModelSpec& model) noexcept {
  if (const auto* m = std::get_if<BlackScholes>(&model)) return m->sigma;
  if (const auto* m = std::get_if<AlphaRFSV>(&model); m && m->xi == 0.0) return m->V0;
  if (const auto* m = std::get_if<MixedAlphaRFSV>(&model); m && m->xiH == 0.0 && m->xiHp == 0.0) return m->V0;
  if (const auto* m = std::get_if<AlphaSV>(&model); m && m->xi == 0.0) return std::sqrt(m->V0);
  return std::nullopt;
}

BumpParameter bump_parameter(GreekKind kind) {
  switch (kind) {
    case GreekKind::delta:
    case GreekKind::gamma: return BumpParameter::S0;
    case GreekKind::rho: return BumpParameter::r;
    case GreekKind::vega: return BumpParameter::V0;
    case GreekKind::hsens: return BumpParameter::H;
    case GreekKind::price: break;
  }
  throw std::invalid_argument("fd_greek: price has no bump parameter");
}

BumpSpec default_bump(GreekKind kind) {
  const BumpParameter p = bump_parameter(kind);
  const bool relative = p == BumpParameter::S0 || p == BumpParameter::V0;
  return {p, relative ? 1e-2 : 1e-3};
}

GreekEstimate fd_greek(GreekKind kind, const ModelSpec& model, const MarketSpec& market, const OptionSpec& opt,
                       const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed, const BumpSpec& bump,
                       double confidence, const FdOptions& options) {
  if (bump_parameter(kind) != bump.parameter) throw std::invalid_argument("fd_greek: bump parameter does not match Greek");
  if (!(bump.size > 0.0)) throw std::invalid_argument("fd_greek: bump must be > 0");
  if (n_paths < 2) throw std::invalid_argument("fd_greek: n_paths must be >= 2");
  validate(model);
  market.validate();
  opt.validate();

  const BumpParameter param = bump.parameter;
  const bool relative = param == BumpParameter::S0 || param == BumpParameter::V0;
  const double h = relative ? bump.size * base_value(model, market, param) : bump.size;
  if (!(h > 0.0)) throw std::domain_error("fd_greek: relative bump of a zero parameter");

  MarketSpec m_up = market, m_dn = market;
  ModelSpec mod_up = model, mod_dn = model;
  if (param == BumpParameter::r) {
    m_up.r += h;
    m_dn.r -= h;
    if (m_dn.r < 0.0) throw std::domain_error("fd_greek: bump leaves the parameter domain (r < 0)");
  } else if (param == BumpParameter::V0 || param == BumpParameter::H) {
    mod_up = bump_model(model, param, h);
    mod_dn = bump_model(model, param, -h);
  }

  const ConvolutionScheme scheme = options.estimator.scheme;
  const std::uint64_t seed_dn = options.common_random_numbers ? seed : seed ^ kIndependentSeedSalt;
  const double T = opt.T;
  const double disc_up = std::exp(-m_up.r * T), disc_dn = std::exp(-m_dn.r * T), disc = std::exp(-market.r * T);

  std::vector<double> samples(n_paths);
  const unsigned workers = resolve_workers(options.estimator.workers);

  if (param == BumpParameter::S0) {
    // S_T is linear in S0 along a fixed path, so bumped terminal prices are rescaled.
    const ModelEngine engine(model, market, grid, scheme);
    const double up = 1.0 + h / market.S0, dn = 1.0 - h / market.S0;
    parallel_for(n_paths, workers, [&](std::size_t p) {
      const double sT = engine.simulate(seed, p).S.back();
      const double sT_dn = (seed_dn == seed) ? sT : engine.simulate(seed_dn, p).S.back();
      const double f_up = payoff(opt, sT * up);
      const double f_dn = payoff(opt, sT_dn * dn);
      if (kind == GreekKind::gamma) {
        samples[p] = disc * (f_up - 2.0 * payoff(opt, sT) + f_dn) / (h * h);
      } else {
        samples[p] = disc * (f_up - f_dn) / (2.0 * h);
      }
    });
  } else {
    const ModelEngine e_up(mod_up, m_up, grid, scheme);
    const ModelEngine e_dn(mod_dn, m_dn, grid, scheme);
    parallel_for(n_paths, workers, [&](std::size_t p) {
      const double f_up = payoff(opt, e_up.simulate(seed, p).S.back());
      const double f_dn = payoff(opt, e_dn.simulate(seed_dn, p).S.back());
      samples[p] = (disc_up * f_up - disc_dn * f_dn) / (2.0 * h);
    });
  }
  return summarize_samples(kind, samples, confidence, options.estimator.variant);
}

}  // namespace vgreeks
