#include <vgreeks/cli.hpp>

#include <vgreeks/config.hpp>
#include <vgreeks/oracles.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <charconv>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace vgreeks {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct Row {
  GreekKind kind;
  std::string method;
  GreekEstimate est;
  double wallclock_ms = 0.0;
  std::optional<double> agreement;
};

struct Invocation {
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  bool timing = true;
};

template <class F>
auto timed(bool timing, double& ms, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  auto result = f();
  ms = timing ? std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() : 0.0;
  return result;
}

std::optional<double> agreement(const GreekEstimate& a, const GreekEstimate& ref) {
  const double diff = std::abs(a.value - ref.value);
  const double se = std::hypot(a.std_error, ref.std_error);
  if (se > 0.0) return diff / se;
  return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

void write_metadata(std::ostream& os, const Invocation& inv, const RunConfig& cfg, std::uint64_t seed,
                    const std::vector<std::string>& notes) {
  os << kSchemaHeader << '\n';
  os << "# command=" << inv.command << '\n';
  os << "# model=" << model_name(cfg.model) << '\n';
  os << "# payoff=" << to_string(cfg.option.payoff) << '\n';
  os << "# n_steps=" << cfg.numerics.n_steps << '\n';
  os << "# seed=" << seed << '\n';
  os << "# confidence=" << num(cfg.numerics.confidence) << '\n';
  os << "# scheme=" << (cfg.numerics.scheme == ConvolutionScheme::left_point ? "left_point" : "cell_integrated")
     << '\n';
  for (const auto& n : notes) os << "# " << n << '\n';
}

std::vector<FormulaVariant> selected_variants(VariantSelection v) {
  switch (v) {
    case VariantSelection::derived: return {FormulaVariant::derived};
    case VariantSelection::literal: return {FormulaVariant::literal};
    case VariantSelection::both: return {FormulaVariant::derived, FormulaVariant::literal};
  }
  return {FormulaVariant::derived};
}

bool has_variants(GreekKind kind) { return kind == GreekKind::gamma || kind == GreekKind::rho; }

std::string cmd_price(const Invocation& inv, const RunConfig& cfg, std::uint64_t seed) {
  EstimatorOptions opts{cfg.numerics.scheme, FormulaVariant::derived, cfg.numerics.workers};
  double ms = 0.0;
  const GreekEstimate e = timed(inv.timing, ms, [&] {
    return estimate(GreekKind::price, cfg.model, cfg.market, cfg.option, cfg.grid(), cfg.numerics.n_paths, seed,
                    cfg.numerics.confidence, opts);
  });
  std::ostringstream os;
  write_metadata(os, inv, cfg, seed, {});
  os << "kind,value,stderr,ci_low,ci_high,n_paths,n_discarded,seed,wallclock_ms\n";
  os << "price," << num(e.value) << ',' << num(e.std_error) << ',' << num(e.ci_low) << ',' << num(e.ci_high) << ','
     << e.n_paths << ',' << e.n_discarded << ',' << seed << ',' << num(ms) << '\n';
  return os.str();
}

std::string cmd_greek(const Invocation& inv, const RunConfig& cfg, std::uint64_t seed) {
  const TimeGrid grid = cfg.grid();
  const auto& nm = cfg.numerics;
  std::vector<std::string> notes;
  std::vector<Row> rows;
  const auto variants = selected_variants(cfg.task.variant);
  notes.push_back("gamma_rho_variant=" + std::string(cfg.task.variant == VariantSelection::both
                                                         ? "both"
                                                         : to_string(variants.front())));
  const std::optional<double> bs_sigma = cfg.task.oracle_bs ? constant_volatility(cfg.model) : std::nullopt;
  if (cfg.task.oracle_bs && !bs_sigma) notes.push_back("bs oracle not applicable: model has stochastic volatility");
  if (cfg.task.oracle_fd) {
    notes.push_back(std::string("fd_crn=") + (cfg.task.fd_common_random_numbers ? "true" : "false"));
  }

  for (GreekKind kind : cfg.task.greeks) {
    std::vector<Row> mc;
    const auto kind_variants = has_variants(kind) ? variants : std::vector<FormulaVariant>{FormulaVariant::derived};
    for (FormulaVariant v : kind_variants) {
      const EstimatorOptions opts{nm.scheme, v, nm.workers};
      Row r{kind, has_variants(kind) ? "malliavin-" + std::string(to_string(v)) : "malliavin", {}, 0.0, {}};
      r.est = timed(inv.timing, r.wallclock_ms, [&] {
        return estimate(kind, cfg.model, cfg.market, cfg.option, grid, nm.n_paths, seed, nm.confidence, opts);
      });
      mc.push_back(r);
    }

    std::optional<Row> fd;
    if (cfg.task.oracle_fd && kind != GreekKind::price) {
      FdOptions fo;
      fo.estimator = EstimatorOptions{nm.scheme, FormulaVariant::derived, nm.workers};
      fo.common_random_numbers = cfg.task.fd_common_random_numbers;
      try {
        Row r{kind, "fd", {}, 0.0, {}};
        r.est = timed(inv.timing, r.wallclock_ms, [&] {
          return fd_greek(kind, cfg.model, cfg.market, cfg.option, grid, nm.n_paths, seed, default_bump(kind),
                          nm.confidence, fo);
        });
        fd = r;
      } catch (const std::domain_error& e) {
        notes.push_back(std::string(to_string(kind)) + " fd skipped: " + e.what());
      }
    }

    std::optional<Row> bs;
    if (bs_sigma) {
      if (const auto v = bs_value(bs_price_greeks(cfg.market, cfg.option, *bs_sigma), kind)) {
        Row r{kind, "bs", {}, 0.0, {}};
        r.est.kind = kind;
        r.est.value = r.est.ci_low = r.est.ci_high = *v;
        r.est.confidence = nm.confidence;
        bs = r;
      }
    }

    const Row* ref = bs ? &*bs : (fd ? &*fd : nullptr);
    for (auto& r : mc) {
      if (ref != nullptr) r.agreement = agreement(r.est, ref->est);
      rows.push_back(r);
    }
    if (fd) {
      if (bs) fd->agreement = agreement(fd->est, bs->est);
      rows.push_back(*fd);
    }
    if (bs) rows.push_back(*bs);
  }

  std::ostringstream os;
  write_metadata(os, inv, cfg, seed, notes);
  os << "kind,method,value,stderr,ci_low,ci_high,n_paths,n_discarded,seed,wallclock_ms,agreement\n";
  for (const auto& r : rows) {
    os << to_string(r.kind) << ',' << r.method << ',' << num(r.est.value) << ',' << num(r.est.std_error) << ','
       << num(r.est.ci_low) << ',' << num(r.est.ci_high) << ',' << r.est.n_paths << ',' << r.est.n_discarded << ','
       << seed << ',' << num(r.wallclock_ms) << ',' << (r.agreement ? num(*r.agreement) : "") << '\n';
  }
  return os.str();
}

std::string cmd_converge(const Invocation& inv, const RunConfig& cfg, std::uint64_t seed) {
  if (cfg.task.greeks.size() != 1) throw ConfigError("task.greeks: converge takes exactly one Greek");
  if (cfg.task.ns_schedule.empty()) throw ConfigError("task.ns_schedule: required for converge");
  if (cfg.task.variant == VariantSelection::both) throw ConfigError("task.variant: converge takes a single variant");
  const FormulaVariant v = selected_variants(cfg.task.variant).front();
  const GreekKind kind = cfg.task.greeks.front();
  const EstimatorOptions opts{cfg.numerics.scheme, v, cfg.numerics.workers};
  const auto trace = converge(kind, cfg.model, cfg.market, cfg.option, cfg.grid(), cfg.task.ns_schedule, seed,
                              cfg.numerics.confidence, opts);
  std::ostringstream os;
  std::vector<std::string> notes{"greek=" + std::string(to_string(kind))};
  if (has_variants(kind)) notes.push_back("gamma_rho_variant=" + std::string(to_string(v)));
  write_metadata(os, inv, cfg, seed, notes);
  os << "ns,value,ci_low,ci_high\n";
  for (std::size_t k = 0; k < trace.size(); ++k) {
    os << cfg.task.ns_schedule[k] << ',' << num(trace[k].value) << ',' << num(trace[k].ci_low) << ','
       << num(trace[k].ci_high) << '\n';
  }
  return os.str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monte-Carlo Greeks for rough Volterra stochastic-volatility models", "volterra-greeks"};
  app.require_subcommand(1);
  Invocation inv;
  std::uint64_t seed = 0;
  const std::pair<const char*, const char*> commands[] = {
      {"price", "discounted option price"},
      {"greek", "Malliavin Greeks with optional FD and Black-Scholes oracle rows"},
      {"converge", "running estimate and confidence interval over task.ns_schedule"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", inv.config_path, "INI run configuration")->required();
    sub->add_option("--seed", seed, "override numerics.seed");
    sub->add_option("--out", inv.out_path, "write CSV here instead of stdout");
    sub->add_flag("--no-timing", "report wallclock_ms as 0 for byte-identical reruns");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }
  const CLI::App* sub = app.get_subcommands().front();
  inv.command = sub->get_name();
  if (sub->count("--seed") > 0) inv.seed = seed;
  inv.timing = sub->count("--no-timing") == 0;

  try {
    RunConfig cfg = load_config(inv.config_path);
    const std::uint64_t s = inv.seed.value_or(cfg.numerics.seed);
    std::string csv;
    if (inv.command == "price") {
      csv = cmd_price(inv, cfg, s);
    } else if (inv.command == "greek") {
      csv = cmd_greek(inv, cfg, s);
    } else {
      csv = cmd_converge(inv, cfg, s);
    }
    if (inv.out_path.empty()) {
      out << csv;
    } else {
      std::ofstream f(inv.out_path, std::ios::binary);
      if (!(f << csv)) {
        err << "error: cannot write '" << inv.out_path << "'\n";
        return exit_failure;
      }
    }
    return exit_ok;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << '\n';
    return exit_unsupported;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_failure;
  }
}

}  // namespace vgreeks
