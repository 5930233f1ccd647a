#pragma once

#include <iosfwd>
#include <vector>

#include "gpelab/core_model.hpp"
#include "gpelab/ermakov.hpp"

namespace gpelab {

/// Lewis invariant I = [(alphadot q - qdot alpha)^2 + (q/alpha)^2] / 2.
/// Non-negative; zero exactly when q = qdot = 0.
/// Throws std::domain_error for alpha <= 0.
double lewis_invariant(const GaussianState& state);

/// Analytic drift of the invariant along the reduced dynamics:
///   dI/dt = [2 g q / (hbar sqrt(pi hbar/m))] * d/dt(q/alpha),
/// with d/dt(q/alpha) = (qdot alpha - q alphadot) / alpha^2.
/// Identically zero when g = 0.
/// Throws std::domain_error for alpha <= 0.
double drift_rhs(const GaussianState& state, const PhysicalParams& params);

struct DriftSample {
  double t = 0.0;
  double invariant = 0.0;
  double dIdt_numeric = 0.0;
  double dIdt_analytic = 0.0;
  double residual = 0.0;  ///< dIdt_numeric - dIdt_analytic
};

/// Drift-law audit for one trajectory. The numeric derivative uses a
/// 4th-order central stencil, so samples cover only the interior points
/// (two trimmed at each end); the summary spans the full trajectory.
struct DriftReport {
  std::vector<DriftSample> samples;
  double max_abs_residual = 0.0;
  double max_invariant_drift = 0.0;  ///< max |I(t) - I(0)| over all samples
};

/// Compares the numeric dI/dt against the analytic drift law along a
/// uniformly sampled trajectory of at least 5 samples.
/// Throws std::invalid_argument on short or non-uniform input.
DriftReport drift_report(const TrajectoryRecord& traj,
                         const PhysicalParams& params);

/// CSV with header t,I,dIdt_numeric,dIdt_analytic,residual.
void write_drift_csv(const DriftReport& report, std::ostream& out);

/// key=value summary block (sidecar for the CSV).
void write_drift_summary(const DriftReport& report, std::ostream& out);

}  // namespace gpelab
