#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gpelab/core_model.hpp"

namespace gpelab {

/// Exit codes shared by execute() and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Configuration or usage problem; maps to exit code 2.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunMode {
  enum class Kind { Ode, Pde, Compare, Sweep, Converge };
  Kind kind = Kind::Ode;
  bool snapshots = false;
  std::string sweep_key;             ///< Sweep only
  std::vector<double> sweep_values;  ///< Sweep only
  std::vector<double> dts;           ///< Converge only
};

/// Parses the flat key=value scenario format ('#' starts a comment).
/// Unknown keys, unparsable values and invariant violations raise
/// ConfigError with the offending line number.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::filesystem::path& path);

/// Canonical serialized form; parse(serialize(c)) == c.
std::string serialize_config(const ScenarioConfig& config);

/// True for keys whose value is a plain number (the sweepable set).
bool is_sweepable_key(const std::string& key);

/// Applies one key=value assignment; throws ConfigError on unknown keys or
/// bad values.
void set_config_value(ScenarioConfig& config, const std::string& key,
                      const std::string& value);

struct ConvergenceRow {
  double dt = 0.0;
  double error = 0.0;  ///< terminal-state error against the reference run
  double order = 0.0;  ///< pairwise order vs the next coarser dt (NaN first)
};

/// RK4 refinement study: integrates at each dt (descending), measures the
/// terminal state against a reference run at the finest dt / 4, and fits
/// the convergence order.
std::vector<ConvergenceRow> convergence_study(const ScenarioConfig& config,
                                              std::vector<double> dts,
                                              double* fitted_order = nullptr);

/// Runs one mode, writes its CSV artifacts into out_dir, prints a one-line
/// summary, and returns the exit code (0 ok, 2 usage, 3 numerical failure).
int execute(const RunMode& mode, const ScenarioConfig& config,
            const std::filesystem::path& out_dir, std::ostream& summary);

}  // namespace gpelab
