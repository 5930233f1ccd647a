#include "gpelab/ermakov.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "format_util.hpp"
#include "gpelab/invariant.hpp"

namespace gpelab {

double coupling_prefactor(const PhysicalParams& params) {
  return 2.0 * params.coupling /
         (params.hbar * std::sqrt(std::numbers::pi * params.hbar / params.mass));
}

double rhs_q(const GaussianState& state, const PhysicalParams& params) {
  return -omega_squared(params.omega, state.t) * state.q;
}

double rhs_alpha(const GaussianState& state, const PhysicalParams& params) {
  const double a = state.alpha;
  if (!(a > 0.0)) throw std::domain_error("rhs_alpha: alpha must be > 0");
  const double w2 = omega_squared(params.omega, state.t);
  return 1.0 / (a * a * a) - w2 * a - coupling_prefactor(params) / (a * a);
}

double rhs_sigma(double sigma, double sigmadot, const PhysicalParams& params,
                 double t) {
  if (!(sigma > 0.0)) throw std::domain_error("rhs_sigma: sigma must be > 0");
  const double w2 = omega_squared(params.omega, t);
  const double h = params.hbar;
  const double m = params.mass;
  return sigmadot * sigmadot / (2.0 * sigma) - 2.0 * w2 * sigma +
         2.0 * h * h / (m * m * sigma) -
         4.0 * params.coupling / (m * std::sqrt(std::numbers::pi * sigma));
}

double k_of_t(double sigma, const PhysicalParams& params) {
  if (!(sigma > 0.0)) throw std::domain_error("k_of_t: sigma must be > 0");
  const double h = params.hbar;
  const double m = params.mass;
  return h * h / (m * m * sigma * sigma) -
         2.0 * params.coupling /
             (sigma * m * std::sqrt(std::numbers::pi * sigma));
}

std::array<double, 4> ReducedRhs::operator()(
    double t, const std::array<double, 4>& y) const {
  GaussianState s{t, y[0], y[1], y[2], y[3]};
  return {y[1], rhs_q(s, params_), y[3], rhs_alpha(s, params_)};
}

namespace {

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N, class Rhs>
State<N> rk4_step(const Rhs& f, double t, const State<N>& y, double h) {
  const State<N> k1 = f(t, y);
  State<N> u;
  for (std::size_t i = 0; i < N; ++i) u[i] = y[i] + 0.5 * h * k1[i];
  const State<N> k2 = f(t + 0.5 * h, u);
  for (std::size_t i = 0; i < N; ++i) u[i] = y[i] + 0.5 * h * k2[i];
  const State<N> k3 = f(t + 0.5 * h, u);
  for (std::size_t i = 0; i < N; ++i) u[i] = y[i] + h * k3[i];
  const State<N> k4 = f(t + h, u);
  State<N> out;
  for (std::size_t i = 0; i < N; ++i)
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

// Fehlberg 4(5) pair; returns the 4th-order solution and the embedded
// error estimate.
template <std::size_t N, class Rhs>
void rkf45_step(const Rhs& f, double t, const State<N>& y, double h,
                State<N>& y4, double& err_inf) {
  static constexpr double c2 = 1.0 / 4, c3 = 3.0 / 8, c4 = 12.0 / 13, c5 = 1.0,
                          c6 = 1.0 / 2;
  static constexpr double a21 = 1.0 / 4;
  static constexpr double a31 = 3.0 / 32, a32 = 9.0 / 32;
  static constexpr double a41 = 1932.0 / 2197, a42 = -7200.0 / 2197,
                          a43 = 7296.0 / 2197;
  static constexpr double a51 = 439.0 / 216, a52 = -8.0, a53 = 3680.0 / 513,
                          a54 = -845.0 / 4104;
  static constexpr double a61 = -8.0 / 27, a62 = 2.0, a63 = -3544.0 / 2565,
                          a64 = 1859.0 / 4104, a65 = -11.0 / 40;
  static constexpr double b1 = 25.0 / 216, b3 = 1408.0 / 2565,
                          b4 = 2197.0 / 4104, b5 = -1.0 / 5;
  static constexpr double d1 = 16.0 / 135, d3 = 6656.0 / 12825,
                          d4 = 28561.0 / 56430, d5 = -9.0 / 50, d6 = 2.0 / 55;

  const State<N> k1 = f(t, y);
  State<N> u;
  for (std::size_t i = 0; i < N; ++i) u[i] = y[i] + h * a21 * k1[i];
  const State<N> k2 = f(t + c2 * h, u);
  for (std::size_t i = 0; i < N; ++i)
    u[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
  const State<N> k3 = f(t + c3 * h, u);
  for (std::size_t i = 0; i < N; ++i)
    u[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
  const State<N> k4 = f(t + c4 * h, u);
  for (std::size_t i = 0; i < N; ++i)
    u[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  const State<N> k5 = f(t + c5 * h, u);
  for (std::size_t i = 0; i < N; ++i)
    u[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                       a65 * k5[i]);
  const State<N> k6 = f(t + c6 * h, u);

  err_inf = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    y4[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i]);
    const double y5 = y[i] + h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] +
                                  d5 * k5[i] + d6 * k6[i]);
    err_inf = std::max(err_inf, std::abs(y5 - y4[i]));
  }
}

TrajectorySample make_sample(double t, const State<4>& y,
                             const PhysicalParams& params) {
  TrajectorySample s;
  s.state = GaussianState{t, y[0], y[1], y[2], y[3]};
  const WidthState w = sigma_from_alpha(params, y[2], y[3]);
  s.sigma = w.sigma;
  s.sigmadot = w.sigmadot;
  s.invariant = lewis_invariant(s.state);
  s.dIdt_analytic = drift_rhs(s.state, params);
  return s;
}

void check_accepted(double t, const State<4>& y) {
  for (double v : y)
    if (!std::isfinite(v)) throw BlowupError(t);
  if (y[2] <= kAlphaMin) throw WidthCollapseError(t);
}

}  // namespace

double stationary_alpha(const PhysicalParams& params, double omega_const,
                        double bracket_lo, double bracket_hi) {
  if (!(omega_const > 0.0))
    throw std::invalid_argument("stationary_alpha: omega_const must be > 0");
  const double g_pref = coupling_prefactor(params);
  const double w2 = omega_const * omega_const;
  const auto f = [&](double a) {
    return 1.0 / (a * a * a) - w2 * a - g_pref / (a * a);
  };
  const auto df = [&](double a) {
    return -3.0 / (a * a * a * a) - w2 + 2.0 * g_pref / (a * a * a);
  };

  double lo = bracket_lo, hi = bracket_hi;
  double flo = f(lo);
  if (flo * f(hi) > 0.0)
    throw std::runtime_error(
        "stationary_alpha: no sign change in bracket (root not found)");
  // Bisection to a coarse interval, then Newton with bisection fallback.
  for (int i = 0; i < 80 && hi - lo > 1e-6 * lo; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (flo * f(mid) <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = f(lo);
    }
  }
  double a = 0.5 * (lo + hi);
  for (int i = 0; i < 60; ++i) {
    const double fa = f(a);
    if (std::abs(fa) < 1e-13) break;
    const double step = fa / df(a);
    double next = a - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (f(next) * flo <= 0.0)
      hi = next;
    else {
      lo = next;
      flo = f(lo);
    }
    a = next;
  }
  if (!(std::abs(f(a)) < 1e-12))
    throw std::runtime_error("stationary_alpha: root polish did not converge");
  return a;
}

TrajectoryRecord integrate(const ScenarioConfig& config) {
  config.validate();
  const PhysicalParams& params = config.params;
  const ReducedRhs rhs(params);
  // Guards run on every stage evaluation, so the step fails loudly before
  // alpha can be driven through zero.
  const auto f = [&](double t, const State<4>& y) -> State<4> {
    for (double v : y)
      if (!std::isfinite(v)) throw BlowupError(t);
    if (y[2] <= kAlphaMin) throw WidthCollapseError(t);
    return rhs(t, y);
  };

  State<4> y{config.initial.q, config.initial.qdot, config.initial.alpha,
             config.initial.alphadot};
  TrajectoryRecord record;
  record.samples.push_back(make_sample(0.0, y, params));

  if (config.integrator == IntegratorKind::Rk4) {
    const long n = std::max(1L, std::lround(config.t_end / config.dt));
    const double h = config.t_end / static_cast<double>(n);
    record.samples.reserve(static_cast<std::size_t>(n) + 1);
    for (long i = 1; i <= n; ++i) {
      const double t_prev = (i - 1) * h;
      y = rk4_step(f, t_prev, y, h);
      const double t = (i == n) ? config.t_end : i * h;
      check_accepted(t, y);
      record.samples.push_back(make_sample(t, y, params));
    }
    return record;
  }

  // RKF45: accept when the embedded error estimate stays within
  // tol * (1 + |y|) per component.
  double t = 0.0;
  double h = config.dt;
  const double h_min = 1e-14 * config.t_end;
  while (t < config.t_end) {
    h = std::min(h, config.t_end - t);
    State<4> y_next;
    double err;
    rkf45_step(f, t, y, h, y_next, err);
    double scale = config.tol;
    for (double v : y) scale = std::max(scale, config.tol * std::abs(v));
    if (err <= scale || h <= h_min) {
      t += h;
      y = y_next;
      check_accepted(t, y);
      record.samples.push_back(make_sample(t, y, params));
    }
    const double grow =
        (err > 0.0) ? 0.9 * std::pow(scale / err, 0.2) : 5.0;
    h *= std::clamp(grow, 0.2, 5.0);
    if (h <= h_min) h = h_min;
  }
  return record;
}

std::vector<WidthSample> integrate_sigma(const ScenarioConfig& config) {
  config.validate();
  const PhysicalParams& params = config.params;
  const auto f = [&](double t, const State<2>& y) -> State<2> {
    for (double v : y)
      if (!std::isfinite(v)) throw BlowupError(t);
    if (!(y[0] > 0.0)) throw WidthCollapseError(t);
    return {y[1], rhs_sigma(y[0], y[1], params, t)};
  };

  const WidthState w0 =
      sigma_from_alpha(params, config.initial.alpha, config.initial.alphadot);
  State<2> y{w0.sigma, w0.sigmadot};
  const long n = std::max(1L, std::lround(config.t_end / config.dt));
  const double h = config.t_end / static_cast<double>(n);

  std::vector<WidthSample> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  out.push_back({0.0, y[0], y[1]});
  for (long i = 1; i <= n; ++i) {
    y = rk4_step(f, (i - 1) * h, y, h);
    const double t = (i == n) ? config.t_end : i * h;
    for (double v : y)
      if (!std::isfinite(v)) throw BlowupError(t);
    out.push_back({t, y[0], y[1]});
  }
  return out;
}

void write_trajectory_csv(const TrajectoryRecord& record, std::ostream& out) {
  out << "t,q,qdot,alpha,alphadot,sigma,sigmadot,I,dIdt_analytic\n";
  for (const TrajectorySample& s : record.samples) {
    const double row[] = {s.state.t,  s.state.q,     s.state.qdot,
                          s.state.alpha, s.state.alphadot, s.sigma,
                          s.sigmadot, s.invariant,   s.dIdt_analytic};
    detail::put_row(out, row, 9);
  }
}

}  // namespace gpelab
