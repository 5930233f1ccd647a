#include "gpelab/core_model.hpp"

#include <cmath>
#include <sstream>

namespace gpelab {

OmegaSchedule OmegaSchedule::constant(double w0) {
  OmegaSchedule s;
  s.kind = Kind::Constant;
  s.w0 = w0;
  return s;
}

OmegaSchedule OmegaSchedule::linear_ramp(double w0, double rate) {
  OmegaSchedule s;
  s.kind = Kind::LinearRamp;
  s.w0 = w0;
  s.rate = rate;
  return s;
}

OmegaSchedule OmegaSchedule::sinusoidal(double w0, double eps,
                                        double big_omega) {
  OmegaSchedule s;
  s.kind = Kind::Sinusoidal;
  s.w0 = w0;
  s.eps = eps;
  s.big_omega = big_omega;
  return s;
}

double omega_eval(const OmegaSchedule& schedule, double t) {
  switch (schedule.kind) {
    case OmegaSchedule::Kind::Constant:
      return schedule.w0;
    case OmegaSchedule::Kind::LinearRamp:
      return schedule.w0 + schedule.rate * t;
    case OmegaSchedule::Kind::Sinusoidal:
      return schedule.w0 * (1.0 + schedule.eps * std::sin(schedule.big_omega * t));
  }
  throw std::logic_error("omega_eval: unhandled schedule kind");
}

double omega_squared(const OmegaSchedule& schedule, double t) {
  const double w = omega_eval(schedule, t);
  return w * w;
}

void PhysicalParams::validate() const {
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be > 0");
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be > 0");
}

WidthState sigma_from_alpha(const PhysicalParams& params, double alpha,
                            double alphadot) {
  if (!(alpha > 0.0))
    throw std::domain_error("sigma_from_alpha: alpha must be > 0");
  const double scale = params.hbar / params.mass;
  return {scale * alpha * alpha, 2.0 * scale * alpha * alphadot};
}

AlphaState alpha_from_sigma(const PhysicalParams& params, double sigma,
                            double sigmadot) {
  if (!(sigma > 0.0))
    throw std::domain_error("alpha_from_sigma: sigma must be > 0");
  const double scale = params.hbar / params.mass;
  const double alpha = std::sqrt(sigma / scale);
  return {alpha, sigmadot / (2.0 * scale * alpha)};
}

namespace {

bool is_pow2(long v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

void ScenarioConfig::validate() const {
  params.validate();
  if (!(initial.alpha > 0.0))
    throw std::invalid_argument("alpha0 must be > 0");
  if (initial.t != 0.0)
    throw std::invalid_argument("initial state must be given at t = 0");
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (!(dt <= t_end)) throw std::invalid_argument("dt must not exceed t_end");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (grid.n < 256 || !is_pow2(grid.n))
    throw std::invalid_argument("grid.n must be a power of two >= 256");
  if (!(grid.length > 0.0))
    throw std::invalid_argument("grid.length must be > 0");
}

namespace {

std::string failure_message(const char* what, double time) {
  std::ostringstream os;
  os << what << " at t = " << time;
  return os.str();
}

}  // namespace

WidthCollapseError::WidthCollapseError(double time)
    : NumericalFailure(failure_message("width collapse: alpha fell below guard",
                                       time),
                       time) {}

BlowupError::BlowupError(double time)
    : NumericalFailure(failure_message("numerical blowup: non-finite value",
                                       time),
                       time) {}

}  // namespace gpelab
