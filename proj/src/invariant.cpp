#include "gpelab/invariant.hpp"

#include <cmath>
#include <ostream>

#include "format_util.hpp"

namespace gpelab {

double lewis_invariant(const GaussianState& state) {
  if (!(state.alpha > 0.0))
    throw std::domain_error("lewis_invariant: alpha must be > 0");
  const double wronskian = state.alphadot * state.q - state.qdot * state.alpha;
  const double ratio = state.q / state.alpha;
  return 0.5 * (wronskian * wronskian + ratio * ratio);
}

double drift_rhs(const GaussianState& state, const PhysicalParams& params) {
  if (!(state.alpha > 0.0))
    throw std::domain_error("drift_rhs: alpha must be > 0");
  const double ratio_dot =
      (state.qdot * state.alpha - state.q * state.alphadot) /
      (state.alpha * state.alpha);
  return coupling_prefactor(params) * state.q * ratio_dot;
}

DriftReport drift_report(const TrajectoryRecord& traj,
                         const PhysicalParams& params) {
  const std::size_t n = traj.size();
  if (n < 5)
    throw std::invalid_argument("drift_report: need at least 5 samples");
  const double h = traj.t(1) - traj.t(0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double step = traj.t(i + 1) - traj.t(i);
    if (std::abs(step - h) > 1e-9 * std::abs(h))
      throw std::invalid_argument(
          "drift_report: samples are not uniformly spaced");
  }

  DriftReport report;
  report.samples.reserve(n - 4);
  const double I0 = traj.samples.front().invariant;
  for (std::size_t i = 0; i < n; ++i)
    report.max_invariant_drift = std::max(
        report.max_invariant_drift, std::abs(traj.samples[i].invariant - I0));

  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double numeric =
        (traj.samples[i - 2].invariant - 8.0 * traj.samples[i - 1].invariant +
         8.0 * traj.samples[i + 1].invariant - traj.samples[i + 2].invariant) /
        (12.0 * h);
    DriftSample s;
    s.t = traj.t(i);
    s.invariant = traj.samples[i].invariant;
    s.dIdt_numeric = numeric;
    s.dIdt_analytic = drift_rhs(traj.samples[i].state, params);
    s.residual = numeric - s.dIdt_analytic;
    report.max_abs_residual =
        std::max(report.max_abs_residual, std::abs(s.residual));
    report.samples.push_back(s);
  }
  return report;
}

void write_drift_csv(const DriftReport& report, std::ostream& out) {
  out << "t,I,dIdt_numeric,dIdt_analytic,residual\n";
  for (const DriftSample& s : report.samples) {
    const double row[] = {s.t, s.invariant, s.dIdt_numeric, s.dIdt_analytic,
                          s.residual};
    detail::put_row(out, row, 5);
  }
}

void write_drift_summary(const DriftReport& report, std::ostream& out) {
  out << "max_abs_residual=" << detail::fmt_double(report.max_abs_residual)
      << '\n'
      << "max_invariant_drift="
      << detail::fmt_double(report.max_invariant_drift) << '\n'
      << "interior_samples=" << report.samples.size() << '\n';
}

}  // namespace gpelab
