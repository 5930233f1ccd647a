#pragma once

#include <stdexcept>
#include <string>

namespace gpelab {

/// Trap frequency schedule omega(t).
///
/// Evaluation is pure: the same t always yields the same value, bit for bit.
/// Only omega^2 enters the equations of motion; omega itself may pass
/// through zero.
struct OmegaSchedule {
  enum class Kind { Constant, LinearRamp, Sinusoidal };

  Kind kind = Kind::Constant;
  double w0 = 1.0;         ///< base angular frequency
  double rate = 0.0;       ///< LinearRamp: omega(t) = w0 + rate * t
  double eps = 0.0;        ///< Sinusoidal: relative modulation depth
  double big_omega = 0.0;  ///< Sinusoidal: modulation angular frequency

  static OmegaSchedule constant(double w0);
  static OmegaSchedule linear_ramp(double w0, double rate);
  static OmegaSchedule sinusoidal(double w0, double eps, double big_omega);

  bool operator==(const OmegaSchedule&) const = default;
};

/// omega(t) for the given schedule.
double omega_eval(const OmegaSchedule& schedule, double t);

/// omega(t)^2, the coefficient that actually enters the dynamics.
double omega_squared(const OmegaSchedule& schedule, double t);

/// Physical constants of one scenario: hbar, m, the self-interaction
/// strength g (any sign; g = 0 is the linear-Schroedinger limit) and the
/// trap schedule.
struct PhysicalParams {
  double hbar = 1.0;
  double mass = 1.0;
  double coupling = 0.0;  ///< g
  OmegaSchedule omega;

  /// Throws std::invalid_argument unless hbar > 0 and mass > 0.
  void validate() const;

  bool operator==(const PhysicalParams&) const = default;
};

/// Full state of the reduced Gaussian dynamics at one instant:
/// packet center q and width amplitude alpha with their time derivatives.
/// alpha > 0 always; integration fails loudly before alpha can reach 0.
struct GaussianState {
  double t = 0.0;
  double q = 0.0;
  double qdot = 0.0;
  double alpha = 1.0;
  double alphadot = 0.0;

  bool operator==(const GaussianState&) const = default;
};

struct WidthState {
  double sigma = 0.0;
  double sigmadot = 0.0;
};

struct AlphaState {
  double alpha = 0.0;
  double alphadot = 0.0;
};

/// sigma = (hbar/m) alpha^2 and sigmadot = (2 hbar/m) alpha alphadot.
/// Throws std::domain_error for alpha <= 0.
WidthState sigma_from_alpha(const PhysicalParams& params, double alpha,
                            double alphadot);

/// Inverse of sigma_from_alpha: alpha = sqrt(m sigma / hbar),
/// alphadot = sigmadot / (2 (hbar/m) alpha).
/// Throws std::domain_error for sigma <= 0.
AlphaState alpha_from_sigma(const PhysicalParams& params, double sigma,
                            double sigmadot);

/// Periodic spatial grid specification for PDE runs.
struct GridSpec {
  int n = 2048;           ///< point count, power of two, >= 256
  double length = 40.0;   ///< domain size L

  bool operator==(const GridSpec&) const = default;
};

enum class IntegratorKind { Rk4, Rkf45 };

/// Complete, serializable description of one simulation run.
struct ScenarioConfig {
  PhysicalParams params;
  GaussianState initial;  ///< state at t = 0
  double t_end = 10.0;
  double dt = 1e-3;
  double tol = 1e-10;     ///< adaptive-integrator tolerance
  IntegratorKind integrator = IntegratorKind::Rk4;
  GridSpec grid;          ///< used by pde/compare runs only

  /// Throws std::invalid_argument naming the offending config key.
  void validate() const;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Numerical failure during propagation; carries the simulation time at
/// which the failure was detected.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// The packet width collapsed below the guard threshold.
class WidthCollapseError : public NumericalFailure {
 public:
  explicit WidthCollapseError(double time);
};

/// A propagated value became non-finite.
class BlowupError : public NumericalFailure {
 public:
  explicit BlowupError(double time);
};

}  // namespace gpelab
