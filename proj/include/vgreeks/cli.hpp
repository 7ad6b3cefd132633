#pragma once
/**
 * @file cli.hpp
 * @brief `volterra-greeks <price|greek|converge> --config <file> [--seed N] [--out <file>] [--no-timing]`
 *
 * Output is CSV. The first line is `# volterra-greeks v1 schema`, followed by
 * `# key=value` metadata lines, one header row and the data rows:
 *
 *   price:    kind,value,stderr,ci_low,ci_high,n_paths,n_discarded,seed,wallclock_ms
 *   greek:    kind,method,value,stderr,ci_low,ci_high,n_paths,n_discarded,seed,wallclock_ms,agreement
 *   converge: ns,value,ci_low,ci_high
 *
 * `method` is one of malliavin, malliavin-derived, malliavin-literal, fd, bs.
 * `agreement` is |value - reference| / sqrt(stderr^2 + stderr_ref^2), where the
 * reference is the bs row when present, else the fd row; empty otherwise.
 */

#include <iosfwd>
#include <string_view>

namespace vgreeks {

inline constexpr std::string_view kSchemaHeader = "# volterra-greeks v1 schema";

enum ExitStatus : int {
  exit_ok = 0,
  exit_failure = 1,
  exit_config = 2,
  exit_unsupported = 3,
  exit_numerical = 4,
};

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vgreeks
