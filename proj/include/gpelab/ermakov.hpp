#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "gpelab/core_model.hpp"

namespace gpelab {

/// Width below which integration aborts with WidthCollapseError.
inline constexpr double kAlphaMin = 1e-8;

/// Coupling prefactor 2 g / (hbar sqrt(pi hbar / m)) shared by the width
/// equation and the invariant drift law.
double coupling_prefactor(const PhysicalParams& params);

/// Center-of-mass acceleration: qddot = -omega^2(t) q.
double rhs_q(const GaussianState& state, const PhysicalParams& params);

/// Width acceleration:
///   alphaddot = 1/alpha^3 - omega^2(t) alpha
///               - 2 g / (hbar alpha^2 sqrt(pi hbar/m)).
/// Reduces to the classical Ermakov form exactly when g = 0.
/// Throws std::domain_error for alpha <= 0.
double rhs_alpha(const GaussianState& state, const PhysicalParams& params);

/// The same width dynamics in sigma form:
///   sigmaddot = sigmadot^2/(2 sigma) - 2 omega^2 sigma
///               + 2 hbar^2/(m^2 sigma) - 4 g / (m sqrt(pi sigma)).
/// Throws std::domain_error for sigma <= 0.
double rhs_sigma(double sigma, double sigmadot, const PhysicalParams& params,
                 double t);

/// Effective linear-force coefficient of the closed force law:
///   k = hbar^2/(m^2 sigma^2) - 2 g / (sigma m sqrt(pi sigma)).
/// Satisfies sigma^2 (k + 2g/(sigma m sqrt(pi sigma))) = hbar^2/m^2.
/// Throws std::domain_error for sigma <= 0.
double k_of_t(double sigma, const PhysicalParams& params);

/// First-order right-hand side of the reduced system, state ordered as
/// (q, qdot, alpha, alphadot). Evaluation is deterministic: identical
/// (t, y) give bitwise-identical derivatives.
class ReducedRhs {
 public:
  explicit ReducedRhs(const PhysicalParams& params) : params_(params) {}

  std::array<double, 4> operator()(double t,
                                   const std::array<double, 4>& y) const;

  const PhysicalParams& params() const { return params_; }

 private:
  PhysicalParams params_;
};

/// One accepted integration step: the state plus the derived width pair,
/// Lewis invariant and its analytic drift.
struct TrajectorySample {
  GaussianState state;      ///< state.t is the sample time
  double sigma = 0.0;
  double sigmadot = 0.0;
  double invariant = 0.0;   ///< I evaluated on the state
  double dIdt_analytic = 0.0;
};

/// Time-ordered samples at every accepted step; the first sample is the
/// initial condition.
struct TrajectoryRecord {
  std::vector<TrajectorySample> samples;

  std::size_t size() const { return samples.size(); }
  double t(std::size_t i) const { return samples[i].state.t; }
};

/// Stationary width of the g-augmented Ermakov equation for a constant
/// trap frequency: the root of rhs_alpha in [bracket_lo, bracket_hi],
/// located by bisection and polished by Newton until |rhs_alpha| < 1e-12.
/// Throws std::runtime_error when the bracket holds no sign change.
double stationary_alpha(const PhysicalParams& params, double omega_const,
                        double bracket_lo = 1e-3, double bracket_hi = 1e3);

/// Integrates the reduced system (center-of-mass plus width equation) from
/// config.initial to config.t_end. Fixed-step classic RK4 by default;
/// embedded RKF45 honoring config.tol when config.integrator requests it.
/// Throws WidthCollapseError / BlowupError with the failure time.
TrajectoryRecord integrate(const ScenarioConfig& config);

struct WidthSample {
  double t = 0.0;
  double sigma = 0.0;
  double sigmadot = 0.0;
};

/// Integrates the width equation directly in sigma form (fixed-step RK4,
/// same stepping as integrate). Used to cross-check the two formulations
/// against each other.
std::vector<WidthSample> integrate_sigma(const ScenarioConfig& config);

/// CSV with header t,q,qdot,alpha,alphadot,sigma,sigmadot,I,dIdt_analytic.
void write_trajectory_csv(const TrajectoryRecord& record, std::ostream& out);

}  // namespace gpelab
