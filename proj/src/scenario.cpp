#include "gpelab/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "format_util.hpp"
#include "gpelab/ermakov.hpp"
#include "gpelab/invariant.hpp"
#include "gpelab/madelung.hpp"
#include "gpelab/spectral.hpp"

namespace gpelab {

namespace {

namespace fs = std::filesystem;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v))
    throw ConfigError("value for '" + key + "' is not a finite number: '" +
                      value + "'");
  return v;
}

long parse_int(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0')
    throw ConfigError("value for '" + key + "' is not an integer: '" + value +
                      "'");
  return v;
}

const char* kind_name(OmegaSchedule::Kind kind) {
  switch (kind) {
    case OmegaSchedule::Kind::Constant:
      return "constant";
    case OmegaSchedule::Kind::LinearRamp:
      return "linear_ramp";
    case OmegaSchedule::Kind::Sinusoidal:
      return "sinusoidal";
  }
  return "?";
}

}  // namespace

void set_config_value(ScenarioConfig& config, const std::string& key,
                      const std::string& value) {
  if (key == "hbar")
    config.params.hbar = parse_double(key, value);
  else if (key == "mass")
    config.params.mass = parse_double(key, value);
  else if (key == "coupling")
    config.params.coupling = parse_double(key, value);
  else if (key == "omega.kind") {
    if (value == "constant")
      config.params.omega.kind = OmegaSchedule::Kind::Constant;
    else if (value == "linear_ramp")
      config.params.omega.kind = OmegaSchedule::Kind::LinearRamp;
    else if (value == "sinusoidal")
      config.params.omega.kind = OmegaSchedule::Kind::Sinusoidal;
    else
      throw ConfigError(
          "omega.kind must be constant, linear_ramp or sinusoidal, got '" +
          value + "'");
  } else if (key == "omega.w0")
    config.params.omega.w0 = parse_double(key, value);
  else if (key == "omega.rate")
    config.params.omega.rate = parse_double(key, value);
  else if (key == "omega.eps")
    config.params.omega.eps = parse_double(key, value);
  else if (key == "omega.bigomega")
    config.params.omega.big_omega = parse_double(key, value);
  else if (key == "q0")
    config.initial.q = parse_double(key, value);
  else if (key == "qdot0")
    config.initial.qdot = parse_double(key, value);
  else if (key == "alpha0")
    config.initial.alpha = parse_double(key, value);
  else if (key == "alphadot0")
    config.initial.alphadot = parse_double(key, value);
  else if (key == "t_end")
    config.t_end = parse_double(key, value);
  else if (key == "dt")
    config.dt = parse_double(key, value);
  else if (key == "tol")
    config.tol = parse_double(key, value);
  else if (key == "integrator") {
    if (value == "rk4")
      config.integrator = IntegratorKind::Rk4;
    else if (value == "rkf45")
      config.integrator = IntegratorKind::Rkf45;
    else
      throw ConfigError("integrator must be rk4 or rkf45, got '" + value +
                        "'");
  } else if (key == "grid.n")
    config.grid.n = static_cast<int>(parse_int(key, value));
  else if (key == "grid.length")
    config.grid.length = parse_double(key, value);
  else
    throw ConfigError("unknown key '" + key + "'");
}

bool is_sweepable_key(const std::string& key) {
  static const char* keys[] = {"hbar",   "mass",     "coupling",  "omega.w0",
                               "omega.rate", "omega.eps", "omega.bigomega",
                               "q0",     "qdot0",    "alpha0",    "alphadot0",
                               "t_end",  "dt",       "tol",       "grid.n",
                               "grid.length"};
  return std::find(std::begin(keys), std::end(keys), key) != std::end(keys);
}

ScenarioConfig parse_config(std::istream& in) {
  ScenarioConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      set_config_value(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  try {
    config.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return config;
}

ScenarioConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ScenarioConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in);
}

std::string serialize_config(const ScenarioConfig& config) {
  std::ostringstream out;
  const auto put = [&](const char* key, double v) {
    out << key << '=' << detail::fmt_double(v) << '\n';
  };
  put("hbar", config.params.hbar);
  put("mass", config.params.mass);
  put("coupling", config.params.coupling);
  out << "omega.kind=" << kind_name(config.params.omega.kind) << '\n';
  put("omega.w0", config.params.omega.w0);
  put("omega.rate", config.params.omega.rate);
  put("omega.eps", config.params.omega.eps);
  put("omega.bigomega", config.params.omega.big_omega);
  put("q0", config.initial.q);
  put("qdot0", config.initial.qdot);
  put("alpha0", config.initial.alpha);
  put("alphadot0", config.initial.alphadot);
  put("t_end", config.t_end);
  put("dt", config.dt);
  put("tol", config.tol);
  out << "integrator="
      << (config.integrator == IntegratorKind::Rk4 ? "rk4" : "rkf45") << '\n';
  out << "grid.n=" << config.grid.n << '\n';
  put("grid.length", config.grid.length);
  return out.str();
}

std::vector<ConvergenceRow> convergence_study(const ScenarioConfig& config,
                                              std::vector<double> dts,
                                              double* fitted_order) {
  if (dts.size() < 2)
    throw ConfigError("convergence study needs at least two dt values");
  std::sort(dts.begin(), dts.end(), std::greater<>());
  dts.erase(std::unique(dts.begin(), dts.end()), dts.end());

  const auto terminal = [&](double dt) {
    ScenarioConfig c = config;
    c.dt = dt;
    c.integrator = IntegratorKind::Rk4;
    const TrajectoryRecord rec = integrate(c);
    return rec.samples.back().state;
  };
  const GaussianState ref = terminal(dts.back() / 4.0);

  std::vector<ConvergenceRow> rows;
  rows.reserve(dts.size());
  for (double dt : dts) {
    const GaussianState s = terminal(dt);
    const double err = std::max(
        {std::abs(s.q - ref.q), std::abs(s.qdot - ref.qdot),
         std::abs(s.alpha - ref.alpha), std::abs(s.alphadot - ref.alphadot)});
    ConvergenceRow row;
    row.dt = dt;
    row.error = err;
    row.order = std::numeric_limits<double>::quiet_NaN();
    if (!rows.empty() && err > 0.0 && rows.back().error > 0.0)
      row.order = std::log(rows.back().error / err) /
                  std::log(rows.back().dt / dt);
    rows.push_back(row);
  }

  if (fitted_order) {
    // Least-squares slope of log(error) against log(dt).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const ConvergenceRow& r : rows) {
      if (!(r.error > 0.0)) continue;
      const double x = std::log(r.dt), y = std::log(r.error);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
    *fitted_order =
        n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx)
               : std::numeric_limits<double>::quiet_NaN();
  }
  return rows;
}

namespace {

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  const fs::path path = dir / name;
  std::ofstream out(path);
  if (!out)
    throw ConfigError("cannot write output file '" + path.string() + "'");
  return out;
}

// Residual audit along the trajectory: continuity residual over the grid
// plus the two Euler components, at windows spread over the run.
std::vector<ResidualReportRow> residual_rows(const TrajectoryRecord& record,
                                             const ScenarioConfig& config) {
  std::vector<ResidualReportRow> rows;
  const std::size_t n = record.size();
  if (n < 5) return rows;
  const SpatialGrid grid = SpatialGrid::from_spec(config.grid);
  const std::size_t stride = std::max<std::size_t>(1, (n - 4) / 200);
  for (std::size_t c = 2; c + 2 < n; c += stride) {
    std::array<GaussianState, 5> window;
    for (std::size_t k = 0; k < 5; ++k)
      window[k] = record.samples[c - 2 + k].state;
    const ContinuityResidual cont =
        continuity_residual(window, config.params, grid);
    const GaussianState& s = record.samples[c].state;
    const EulerResidual euler = euler_residual(
        s, config.params, on_shell_derivatives(s, config.params));
    rows.push_back({s.t, cont.max_abs, euler.constant_term,
                    euler.linear_coeff});
  }
  return rows;
}

int run_ode(const ScenarioConfig& config, const fs::path& dir, bool snapshots,
            std::ostream& summary, const std::string& suffix = "") {
  const TrajectoryRecord record = integrate(config);
  {
    auto out = open_output(dir, "trajectory" + suffix + ".csv");
    write_trajectory_csv(record, out);
  }
  double max_drift = 0.0, max_residual = 0.0;
  if (record.size() >= 5 && config.integrator == IntegratorKind::Rk4) {
    const DriftReport report = drift_report(record, config.params);
    max_drift = report.max_invariant_drift;
    max_residual = report.max_abs_residual;
    auto out = open_output(dir, "drift" + suffix + ".csv");
    write_drift_csv(report, out);
    auto side = open_output(dir, "drift_summary" + suffix + ".txt");
    write_drift_summary(report, side);
  }
  {
    const auto rows = residual_rows(record, config);
    auto out = open_output(dir, "residuals" + suffix + ".csv");
    write_residual_csv(rows, out);
  }
  if (snapshots) {
    const SpatialGrid grid = SpatialGrid::from_spec(config.grid);
    const auto fields =
        sample_fields(record.samples.back().state, config.params, grid);
    auto out = open_output(dir, "fields_final" + suffix + ".csv");
    write_fields_csv(fields, out);
  }
  summary << "ode" << suffix << ": samples=" << record.size()
          << " max|I-I0|=" << detail::fmt_double(max_drift)
          << " max|drift_residual|=" << detail::fmt_double(max_residual)
          << '\n';
  return kExitOk;
}

int run_pde_mode(const ScenarioConfig& config, const fs::path& dir,
                 bool snapshots, std::ostream& summary) {
  ComplexField psi0, psi1;
  const auto rows = run_pde(config, &psi0, &psi1);
  {
    auto out = open_output(dir, "pde_moments.csv");
    write_moments_csv(rows, out);
  }
  double max_norm_err = 0.0;
  for (const MomentRow& r : rows)
    max_norm_err = std::max(max_norm_err, std::abs(r.norm - 1.0));
  if (snapshots) {
    const SpatialGrid grid = SpatialGrid::from_spec(config.grid);
    auto a = open_output(dir, "psi_initial.csv");
    write_wavefunction_csv(psi0, grid, a);
    auto b = open_output(dir, "psi_final.csv");
    write_wavefunction_csv(psi1, grid, b);
  }
  summary << "pde: steps=" << rows.size() - 1
          << " max|norm-1|=" << detail::fmt_double(max_norm_err) << '\n';
  return kExitOk;
}

int run_compare(const ScenarioConfig& config, const fs::path& dir,
                bool snapshots, std::ostream& summary) {
  const ComparisonReport report = run_and_compare(config);
  {
    auto out = open_output(dir, "comparison.csv");
    write_comparison_csv(report, out);
  }
  if (snapshots) {
    const SpatialGrid grid = SpatialGrid::from_spec(config.grid);
    auto a = open_output(dir, "psi_initial.csv");
    write_wavefunction_csv(report.psi_initial, grid, a);
    auto b = open_output(dir, "psi_final.csv");
    write_wavefunction_csv(report.psi_final, grid, b);
  }
  summary << "compare: max|q_ode-q_pde|="
          << detail::fmt_double(report.max_q_dev) << " max|sigma_ode-sigma_pde|="
          << detail::fmt_double(report.max_sigma_dev)
          << " max|norm-1|=" << detail::fmt_double(report.max_norm_err)
          << " max|I_pde drift|=" << detail::fmt_double(report.max_I_pde_drift)
          << '\n';
  return kExitOk;
}

int run_sweep(const RunMode& mode, const ScenarioConfig& config,
              const fs::path& dir, std::ostream& summary) {
  if (!is_sweepable_key(mode.sweep_key))
    throw ConfigError("'" + mode.sweep_key + "' is not a sweepable config key");
  if (mode.sweep_values.empty())
    throw ConfigError("sweep needs at least one value");
  int status = kExitOk;
  for (double v : mode.sweep_values) {
    ScenarioConfig child = config;
    set_config_value(child, mode.sweep_key, detail::fmt_double(v));
    try {
      child.validate();
    } catch (const std::exception& e) {
      throw ConfigError("sweep value " + detail::fmt_double(v) + ": " +
                        e.what());
    }
    char vbuf[32];
    std::snprintf(vbuf, sizeof vbuf, "%g", v);
    const std::string suffix = "_" + mode.sweep_key + "_" + vbuf;
    try {
      run_ode(child, dir, mode.snapshots, summary, suffix);
    } catch (const NumericalFailure& e) {
      summary << "ode" << suffix << ": numerical failure at t="
              << detail::fmt_double(e.time()) << " (" << e.what() << ")\n";
      status = kExitNumerical;
    }
  }
  return status;
}

int run_converge(const RunMode& mode, const ScenarioConfig& config,
                 const fs::path& dir, std::ostream& summary) {
  if (mode.dts.size() < 2)
    throw ConfigError("converge needs at least two dt values (--dts)");
  double order = 0.0;
  const auto rows = convergence_study(config, mode.dts, &order);
  {
    auto out = open_output(dir, "convergence.csv");
    out << "dt,error,order\n";
    for (const ConvergenceRow& r : rows) {
      const double row[] = {r.dt, r.error, r.order};
      detail::put_row(out, row, 3);
    }
  }
  summary << "converge: fitted_order=" << detail::fmt_double(order) << '\n';
  return kExitOk;
}

}  // namespace

int execute(const RunMode& mode, const ScenarioConfig& config,
            const std::filesystem::path& out_dir, std::ostream& summary) {
  try {
    config.validate();
  } catch (const std::exception& e) {
    summary << "config error: " << e.what() << '\n';
    return kExitUsage;
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    summary << "cannot create output directory '" << out_dir.string()
            << "': " << ec.message() << '\n';
    return kExitUsage;
  }
  try {
    switch (mode.kind) {
      case RunMode::Kind::Ode:
        return run_ode(config, out_dir, mode.snapshots, summary);
      case RunMode::Kind::Pde:
        return run_pde_mode(config, out_dir, mode.snapshots, summary);
      case RunMode::Kind::Compare:
        return run_compare(config, out_dir, mode.snapshots, summary);
      case RunMode::Kind::Sweep:
        return run_sweep(mode, config, out_dir, summary);
      case RunMode::Kind::Converge:
        return run_converge(mode, config, out_dir, summary);
    }
    return kExitUsage;
  } catch (const NumericalFailure& e) {
    summary << "numerical failure at t=" << detail::fmt_double(e.time())
            << ": " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ConfigError& e) {
    summary << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace gpelab
