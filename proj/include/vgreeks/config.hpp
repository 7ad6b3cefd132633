#pragma once
/**
 * @file config.hpp
 * @brief Run configuration: INI-style `key = value` pairs in the sections
 *        [model], [market], [option], [numerics], [task].
 *
 * Example:
 *
 *   [model]
 *   type = alpha_rfsv
 *   V0 = 0.62
 *   xi = 0.21
 *   alpha = 1
 *   rho = -0.05
 *   H = 0.14
 *
 *   [market]
 *   S0 = 100
 *   r = 0.05
 *
 *   [option]
 *   K = 100
 *   T = 1
 *   payoff = call
 *
 *   [numerics]
 *   n_steps = 256
 *   n_paths = 100000
 *   seed = 7
 *
 *   [task]
 *   greeks = delta
 *   oracle_fd = true
 *
 * Errors carry the dotted field path (e.g. "model.V0: must be > 0").
 */

#include <vgreeks/greeks_mc.hpp>
#include <vgreeks/models.hpp>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace vgreeks {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class VariantSelection { derived, literal, both };

struct NumericsConfig {
  std::size_t n_steps = 64;
  std::size_t n_paths = 10000;
  std::uint64_t seed = 1;
  double confidence = 0.99;
  double epsilon = kDefaultEpsilon;
  ConvolutionScheme scheme = ConvolutionScheme::left_point;
  unsigned workers = 0;
};

struct TaskConfig {
  std::vector<GreekKind> greeks{GreekKind::delta};
  std::vector<std::size_t> ns_schedule;
  bool oracle_fd = false;
  bool oracle_bs = false;
  bool fd_common_random_numbers = true;
  VariantSelection variant = VariantSelection::derived;
};

struct RunConfig {
  ModelSpec model;
  MarketSpec market;
  OptionSpec option;
  NumericsConfig numerics;
  TaskConfig task;

  [[nodiscard]] TimeGrid grid() const { return TimeGrid(option.T, numerics.n_steps); }
};

[[nodiscard]] RunConfig parse_config(std::istream& in);
[[nodiscard]] RunConfig load_config(const std::string& path);

}  // namespace vgreeks
