#include <vgreeks/greeks_mc.hpp>

#include <vgreeks/stats.hpp>
#include <vgreeks/weights.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>
#include <thread>

namespace vgreeks {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

void OptionSpec::validate() const {
  if (!(K > 0.0)) throw std::invalid_argument("option: K must be > 0");
  if (!(T > 0.0)) throw std::invalid_argument("option: T must be > 0");
}

std::string_view to_string(GreekKind kind) noexcept {
  switch (kind) {
    case GreekKind::price: return "price";
    case GreekKind::delta: return "delta";
    case GreekKind::gamma: return "gamma";
    case GreekKind::rho: return "rho";
    case GreekKind::vega: return "vega";
    case GreekKind::hsens: return "hsens";
  }
  return "?";
}

std::string_view to_string(PayoffKind kind) noexcept {
  switch (kind) {
    case PayoffKind::call: return "call";
    case PayoffKind::put: return "put";
    case PayoffKind::digital_call: return "digital_call";
  }
  return "?";
}

std::string_view to_string(FormulaVariant v) noexcept {
  return v == FormulaVariant::derived ? "derived" : "literal";
}

std::optional<GreekKind> parse_greek_kind(std::string_view s) noexcept {
  for (auto k : {GreekKind::price, GreekKind::delta, GreekKind::gamma, GreekKind::rho, GreekKind::vega,
                 GreekKind::hsens}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

std::optional<PayoffKind> parse_payoff_kind(std::string_view s) noexcept {
  for (auto k : {PayoffKind::call, PayoffKind::put, PayoffKind::digital_call}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

unsigned resolve_workers(unsigned configured) {
  if (const char* env = std::getenv("VOLTERRA_GREEKS_WORKERS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  if (configured > 0) return configured;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body) {
  const std::size_t w = std::min<std::size_t>(std::max(1u, workers), std::max<std::size_t>(n, 1));
  if (w == 1) {
    for (std::size_t p = 0; p < n; ++p) body(p);
    return;
  }
  std::vector<std::exception_ptr> errors(w);
  {
    std::vector<std::jthread> pool;
    pool.reserve(w);
    for (std::size_t k = 0; k < w; ++k) {
      pool.emplace_back([&, k] {
        const std::size_t lo = n * k / w, hi = n * (k + 1) / w;
        try {
          for (std::size_t p = lo; p < hi; ++p) body(p);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double payoff(const OptionSpec& opt, double sT) {
  switch (opt.payoff) {
    case PayoffKind::call: return std::max(sT - opt.K, 0.0);
    case PayoffKind::put: return std::max(opt.K - sT, 0.0);
    case PayoffKind::digital_call: return sT > opt.K ? 1.0 : 0.0;
  }
  return 0.0;
}

bool supports(GreekKind kind, const ModelSpec& model) noexcept {
  switch (kind) {
    case GreekKind::vega:
      return std::holds_alternative<AlphaRFSV>(model) || std::holds_alternative<BlackScholes>(model);
    case GreekKind::hsens: return std::holds_alternative<AlphaRFSV>(model);
    default: return true;
  }
}

std::vector<double> malliavin_samples(GreekKind kind, const ModelSpec& model, const MarketSpec& market,
                                      const OptionSpec& opt, const TimeGrid& grid, std::size_t n_paths,
                                      std::uint64_t seed, const EstimatorOptions& options) {
  validate(model);
  market.validate();
  opt.validate();
  if (std::abs(grid.horizon() - opt.T) > 1e-12 * opt.T) {
    throw std::invalid_argument("estimate: option maturity must equal the grid horizon");
  }
  if (!supports(kind, model)) {
    throw UnsupportedError("no Malliavin estimator for " + std::string(to_string(kind)) + " under " +
                           std::string(model_name(model)));
  }
  const ModelEngine engine(model, market, grid, options.scheme, kind == GreekKind::hsens);
  const double T = opt.T, r = market.r, S0 = market.S0;
  const double disc = std::exp(-r * T);
  const bool literal = options.variant == FormulaVariant::literal;

  std::vector<double> samples(n_paths, kNaN);
  parallel_for(n_paths, resolve_workers(options.workers), [&](std::size_t p) {
    const PathBundle b = engine.simulate(seed, p);
    const double f = payoff(opt, b.S.back());
    if (kind == GreekKind::price) {
      samples[p] = disc * f;
      return;
    }
    const WeightComponents w = weight_components(engine, b);
    if (is_degenerate(w)) return;
    const double pi = assemble_delta_weight(w);
    switch (kind) {
      case GreekKind::delta: samples[p] = disc / S0 * f * pi; break;
      case GreekKind::gamma:
        if (literal) {
          samples[p] = disc * disc / (S0 * S0) * f * pi / w.intG - disc / (S0 * S0) * f * pi;
        } else {
          samples[p] = disc / (S0 * S0) * f * assemble_gamma_weight(w, T);
        }
        break;
      case GreekKind::rho:
        samples[p] = literal ? r * T * disc * f * pi - disc * f : T * disc * f * (pi - 1.0);
        break;
      case GreekKind::vega:
      case GreekKind::hsens: {
        const auto which = kind == GreekKind::vega ? SensitivityParam::V0 : SensitivityParam::H;
        const DirectionalDerivatives d = engine.directional(b);
        const ThetaNumerator num = assemble_vega_numerator(engine, b, d.d1, which);
        samples[p] = disc * f * assemble_theta_weight(num, w);
        break;
      }
      case GreekKind::price: break;
    }
  });
  return samples;
}

GreekEstimate summarize_samples(GreekKind kind, std::span<const double> samples, double confidence,
                                FormulaVariant variant) {
  std::vector<double> kept;
  kept.reserve(samples.size());
  for (double x : samples) {
    if (!std::isnan(x)) kept.push_back(x);
  }
  if (kept.size() < 2) throw NumericalError("all paths discarded: no valid Malliavin weight");
  const SampleSummary s = summarize(kept);
  const double half = normal_two_sided_quantile(confidence) * s.std_error;
  GreekEstimate e;
  e.kind = kind;
  e.variant = variant;
  e.value = s.mean;
  e.std_error = s.std_error;
  e.ci_low = s.mean - half;
  e.ci_high = s.mean + half;
  e.confidence = confidence;
  e.n_paths = samples.size();
  e.n_discarded = samples.size() - kept.size();
  return e;
}

GreekEstimate estimate(GreekKind kind, const ModelSpec& model, const MarketSpec& market, const OptionSpec& opt,
                       const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed, double confidence,
                       const EstimatorOptions& options) {
  if (n_paths < 2) throw std::invalid_argument("estimate: n_paths must be >= 2");
  const auto samples = malliavin_samples(kind, model, market, opt, grid, n_paths, seed, options);
  return summarize_samples(kind, samples, confidence, options.variant);
}

std::vector<GreekEstimate> converge(GreekKind kind, const ModelSpec& model, const MarketSpec& market,
                                    const OptionSpec& opt, const TimeGrid& grid,
                                    const std::vector<std::size_t>& ns_schedule, std::uint64_t seed,
                                    double confidence, const EstimatorOptions& options) {
  if (ns_schedule.empty()) throw std::invalid_argument("converge: empty schedule");
  for (std::size_t k = 0; k < ns_schedule.size(); ++k) {
    if (ns_schedule[k] < 2) throw std::invalid_argument("converge: schedule entries must be >= 2");
    if (k > 0 && ns_schedule[k] <= ns_schedule[k - 1]) {
      throw std::invalid_argument("converge: schedule must be strictly increasing");
    }
  }
  const auto samples = malliavin_samples(kind, model, market, opt, grid, ns_schedule.back(), seed, options);
  std::vector<GreekEstimate> out;
  out.reserve(ns_schedule.size());
  for (std::size_t ns : ns_schedule) {
    out.push_back(summarize_samples(kind, std::span(samples).first(ns), confidence, options.variant));
  }
  return out;
}

}  // namespace vgreeks
