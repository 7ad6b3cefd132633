#include <vgreeks/config.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace vgreeks {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string s) {
  auto blank = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), blank));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), blank).base(), s.end());
  return s;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// One [section]; tracks which keys were read so leftovers can be reported.
class Section {
public:
  Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  [[nodiscard]] std::string path(const std::string& key) const { return name_ + "." + key; }

  [[nodiscard]] std::optional<std::string> raw(const std::string& key) {
    used_.insert(key);
    if (tree_ == nullptr) return std::nullopt;
    const auto it = tree_->find(key);
    if (it == tree_->not_found()) return std::nullopt;
    return trim(it->second.data());
  }

  double real(const std::string& key, std::optional<double> fallback,
              const std::function<bool(double)>& ok = {}, const char* rule = "") {
    const auto s = raw(key);
    if (!s) {
      if (!fallback) throw ConfigError(path(key) + ": missing required value");
      return *fallback;
    }
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
    if (ec != std::errc() || end != s->data() + s->size() || !std::isfinite(v)) {
      throw ConfigError(path(key) + ": expected a real number, got '" + *s + "'");
    }
    if (ok && !ok(v)) throw ConfigError(path(key) + ": " + rule);
    return v;
  }

  std::uint64_t integer(const std::string& key, std::uint64_t fallback, std::uint64_t min_value = 0) {
    const auto s = raw(key);
    if (!s) return fallback;
    return parse_uint(key, *s, min_value);
  }

  std::uint64_t parse_uint(const std::string& key, const std::string& s, std::uint64_t min_value) const {
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size()) {
      throw ConfigError(path(key) + ": expected a non-negative integer, got '" + s + "'");
    }
    if (v < min_value) throw ConfigError(path(key) + ": must be >= " + std::to_string(min_value));
    return v;
  }

  bool boolean(const std::string& key, bool fallback) {
    const auto s = raw(key);
    if (!s) return fallback;
    if (*s == "true" || *s == "on" || *s == "1" || *s == "yes") return true;
    if (*s == "false" || *s == "off" || *s == "0" || *s == "no") return false;
    throw ConfigError(path(key) + ": expected true/false, got '" + *s + "'");
  }

  void reject_unknown() const {
    if (tree_ == nullptr) return;
    for (const auto& [key, value] : *tree_) {
      if (!used_.contains(key)) throw ConfigError(path(key) + ": unknown key");
    }
  }

private:
  const pt::ptree* tree_;
  std::string name_;
  std::set<std::string> used_;
};

const auto positive = [](double v) { return v > 0.0; };
const auto non_negative = [](double v) { return v >= 0.0; };
const auto unit_interval = [](double v) { return v >= 0.0 && v <= 1.0; };
const auto correlation_range = [](double v) { return v >= -1.0 && v <= 1.0; };
const auto hurst_range = [](double v) { return v > 0.0 && v < 1.0; };

ModelSpec read_model(Section& s, double eps) {
  const auto type = s.raw("type");
  if (!type) throw ConfigError("model.type: missing required value");
  auto rho = [&] { return s.real("rho", 0.0, correlation_range, "must lie in [-1,1]"); };
  auto kernel = [&](const char* key) {
    return KernelSpec{s.real(key, std::nullopt, hurst_range, "must lie in (0,1)"), eps};
  };
  if (*type == "alpha_rfsv") {
    AlphaRFSV m;
    m.V0 = s.real("V0", std::nullopt, positive, "must be > 0");
    m.xi = s.real("xi", std::nullopt, non_negative, "must be >= 0");
    m.alpha = s.real("alpha", 1.0, unit_interval, "must lie in [0,1]");
    m.rho = rho();
    m.kernel = kernel("H");
    return m;
  }
  if (*type == "mixed_alpha_rfsv") {
    MixedAlphaRFSV m;
    m.V0 = s.real("V0", std::nullopt, positive, "must be > 0");
    m.xiH = s.real("xiH", std::nullopt, non_negative, "must be >= 0");
    m.xiHp = s.real("xiHp", std::nullopt, non_negative, "must be >= 0");
    m.alpha = s.real("alpha", 1.0, unit_interval, "must lie in [0,1]");
    m.rho = rho();
    m.kernelH = kernel("H");
    m.kernelHp = kernel("Hp");
    if (!(m.kernelH.H < 0.5)) throw ConfigError("model.H: must be < 1/2 for the mixed model");
    if (!(m.kernelHp.H > 0.5)) throw ConfigError("model.Hp: must be > 1/2 for the mixed model");
    return m;
  }
  if (*type == "rough_stein_stein" || *type == "stein_stein") {
    const double V0 = s.real("V0", std::nullopt);
    const double kappa = s.real("kappa", std::nullopt, positive, "must be > 0");
    const double theta = s.real("theta", std::nullopt, positive, "must be > 0");
    const double nu = s.real("nu", std::nullopt, positive, "must be > 0");
    const double r = rho();
    if (*type == "stein_stein") return SteinStein{V0, kappa, theta, nu, r};
    return RoughSteinStein{V0, kappa, theta, nu, r, kernel("H")};
  }
  if (*type == "alpha_sv") {
    AlphaSV m;
    m.V0 = s.real("V0", std::nullopt, positive, "must be > 0");
    m.xi = s.real("xi", std::nullopt, non_negative, "must be >= 0");
    m.alpha = s.real("alpha", 1.0, unit_interval, "must lie in [0,1]");
    m.rho = rho();
    return m;
  }
  if (*type == "black_scholes") {
    return BlackScholes{s.real("sigma", std::nullopt, positive, "must be > 0")};
  }
  throw ConfigError("model.type: unknown model '" + *type + "'");
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& [name, sub] : tree) {
    static const std::set<std::string> known{"model", "market", "option", "numerics", "task"};
    if (!known.contains(name)) throw ConfigError(name + ": unknown section");
    if (sub.empty()) throw ConfigError(name + ": key outside a section or empty section");
  }
  auto section = [&](const char* name) {
    const auto it = tree.find(name);
    return Section(it == tree.not_found() ? nullptr : &it->second, name);
  };

  RunConfig cfg;
  Section numerics = section("numerics");
  cfg.numerics.n_steps = numerics.integer("n_steps", cfg.numerics.n_steps, 1);
  cfg.numerics.n_paths = numerics.integer("n_paths", cfg.numerics.n_paths, 2);
  cfg.numerics.seed = numerics.integer("seed", cfg.numerics.seed);
  cfg.numerics.confidence = numerics.real("confidence", 0.99, [](double c) { return c > 0.0 && c < 1.0; },
                                          "must lie in (0,1)");
  cfg.numerics.epsilon = numerics.real("epsilon", kDefaultEpsilon, non_negative, "must be >= 0");
  cfg.numerics.workers = static_cast<unsigned>(numerics.integer("workers", 0));
  if (const auto scheme = numerics.raw("scheme")) {
    if (*scheme == "left_point") {
      cfg.numerics.scheme = ConvolutionScheme::left_point;
    } else if (*scheme == "cell_integrated") {
      cfg.numerics.scheme = ConvolutionScheme::cell_integrated;
    } else {
      throw ConfigError("numerics.scheme: expected left_point or cell_integrated, got '" + *scheme + "'");
    }
  }
  numerics.reject_unknown();

  Section model = section("model");
  cfg.model = read_model(model, cfg.numerics.epsilon);
  model.reject_unknown();

  Section market = section("market");
  cfg.market.S0 = market.real("S0", std::nullopt, positive, "must be > 0");
  cfg.market.r = market.real("r", 0.0, non_negative, "must be >= 0");
  market.reject_unknown();

  Section option = section("option");
  cfg.option.K = option.real("K", std::nullopt, positive, "must be > 0");
  cfg.option.T = option.real("T", std::nullopt, positive, "must be > 0");
  if (const auto p = option.raw("payoff")) {
    const auto kind = parse_payoff_kind(*p);
    if (!kind) throw ConfigError("option.payoff: expected call, put or digital_call, got '" + *p + "'");
    cfg.option.payoff = *kind;
  }
  option.reject_unknown();

  Section task = section("task");
  if (const auto g = task.raw("greeks")) {
    cfg.task.greeks.clear();
    for (const auto& item : split_list(*g)) {
      const auto kind = parse_greek_kind(item);
      if (!kind) throw ConfigError("task.greeks: unknown Greek '" + item + "'");
      cfg.task.greeks.push_back(*kind);
    }
    if (cfg.task.greeks.empty()) throw ConfigError("task.greeks: empty list");
  }
  if (const auto ns = task.raw("ns_schedule")) {
    for (const auto& item : split_list(*ns)) cfg.task.ns_schedule.push_back(task.parse_uint("ns_schedule", item, 2));
    for (std::size_t k = 1; k < cfg.task.ns_schedule.size(); ++k) {
      if (cfg.task.ns_schedule[k] <= cfg.task.ns_schedule[k - 1]) {
        throw ConfigError("task.ns_schedule: must be strictly increasing");
      }
    }
  }
  cfg.task.oracle_fd = task.boolean("oracle_fd", false);
  cfg.task.oracle_bs = task.boolean("oracle_bs", false);
  cfg.task.fd_common_random_numbers = task.boolean("fd_crn", true);
  if (const auto v = task.raw("variant")) {
    if (*v == "derived") {
      cfg.task.variant = VariantSelection::derived;
    } else if (*v == "literal") {
      cfg.task.variant = VariantSelection::literal;
    } else if (*v == "both") {
      cfg.task.variant = VariantSelection::both;
    } else {
      throw ConfigError("task.variant: expected derived, literal or both, got '" + *v + "'");
    }
  }
  task.reject_unknown();

  try {
    validate(cfg.model);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(in);
}

}  // namespace vgreeks
