#include "gpelab/madelung.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "format_util.hpp"
#include "gpelab/ermakov.hpp"

namespace gpelab {

namespace {

double width_of(const GaussianState& state, const PhysicalParams& params) {
  return sigma_from_alpha(params, state.alpha, state.alphadot).sigma;
}

}  // namespace

double gaussian_density(double x, const GaussianState& state,
                        const PhysicalParams& params) {
  const WidthState w = sigma_from_alpha(params, state.alpha, state.alphadot);
  const double u = x - state.q;
  return std::exp(-u * u / w.sigma) /
         std::sqrt(std::numbers::pi * w.sigma);
}

double quantum_velocity(double x, const GaussianState& state,
                        const PhysicalParams& params) {
  const WidthState w = sigma_from_alpha(params, state.alpha, state.alphadot);
  return w.sigmadot / (2.0 * w.sigma) * (x - state.q) + state.qdot;
}

double bohm_potential(double x, const GaussianState& state,
                      const PhysicalParams& params) {
  const double sigma = width_of(state, params);
  const double u = x - state.q;
  return -(params.hbar * params.hbar / (2.0 * params.mass)) *
         (u * u / (sigma * sigma) - 1.0 / sigma);
}

double bohm_potential_gradient(double x, const GaussianState& state,
                               const PhysicalParams& params) {
  const double sigma = width_of(state, params);
  return -(params.hbar * params.hbar / params.mass) * (x - state.q) /
         (sigma * sigma);
}

double gp_potential(double x, const GaussianState& state,
                    const PhysicalParams& params) {
  return params.coupling / params.mass * gaussian_density(x, state, params);
}

double cubic_bracket_hbar_part(double x, const GaussianState& state,
                               const PhysicalParams& params) {
  const double sigma = width_of(state, params);
  const double u = x - state.q;
  // Log-derivative ratios of the Gaussian density, assembled term by term
  // exactly as the bracket is written; the cubic-in-u pieces cancel and
  // leave a force linear in u.
  const double r1 = -2.0 * u / sigma;                              // rho'/rho
  const double r2 = (4.0 * u * u / sigma - 2.0) / sigma;           // rho''/rho
  const double r3 = (12.0 * u / sigma - 8.0 * u * u * u / (sigma * sigma)) /
                    sigma;                                         // rho'''/rho
  const double bracket = r3 - 2.0 * r1 * r2 + r1 * r1 * r1;
  const double m = params.mass;
  return params.hbar * params.hbar / (4.0 * m * m) * bracket;
}

double cubic_bracket(double x, const GaussianState& state,
                     const PhysicalParams& params, GpClosure closure) {
  const double sigma = width_of(state, params);
  const double u = x - state.q;
  const double density =
      closure == GpClosure::PeakLinearized
          ? 1.0 / std::sqrt(std::numbers::pi * sigma)
          : gaussian_density(x, state, params);
  const double g_part =
      -2.0 * params.coupling / (params.mass * sigma) * u * density;
  return cubic_bracket_hbar_part(x, state, params) + g_part;
}

namespace {

// Plain trapezoid sum over the periodic grid; spectrally accurate for
// fields decayed below round-off at the edges.
template <class F>
double trapezoid(const SpatialGrid& grid, const F& f) {
  double acc = 0.0;
  for (int j = 0; j < grid.n(); ++j) acc += f(grid.x(j));
  return acc * grid.dx();
}

bool edges_too_hot(const GaussianState& state, const PhysicalParams& params,
                   const SpatialGrid& grid) {
  const double lo = gaussian_density(grid.x(0), state, params);
  const double hi = gaussian_density(grid.x(grid.n() - 1), state, params);
  return std::max(lo, hi) >= kEdgeDensityMax;
}

}  // namespace

QuadratureResult quantum_force_expectation(const GaussianState& state,
                                           const PhysicalParams& params,
                                           const SpatialGrid& grid) {
  QuadratureResult r;
  r.narrow_grid = edges_too_hot(state, params, grid);
  r.value = trapezoid(grid, [&](double x) {
    return gaussian_density(x, state, params) *
           bohm_potential_gradient(x, state, params);
  });
  return r;
}

QuadratureResult position_expectation(const GaussianState& state,
                                      const PhysicalParams& params,
                                      const SpatialGrid& grid) {
  QuadratureResult r;
  r.narrow_grid = edges_too_hot(state, params, grid);
  r.value = trapezoid(
      grid, [&](double x) { return x * gaussian_density(x, state, params); });
  return r;
}

double density_norm(const GaussianState& state, const PhysicalParams& params,
                    const SpatialGrid& grid) {
  return trapezoid(
      grid, [&](double x) { return gaussian_density(x, state, params); });
}

ContinuityResidual continuity_residual(std::span<const GaussianState> window,
                                       const PhysicalParams& params,
                                       const SpatialGrid& grid) {
  const std::size_t n = window.size();
  if (n < 5)
    throw std::invalid_argument("continuity_residual: need >= 5 samples");
  const double h = window[1].t - window[0].t;
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (std::abs(window[i + 1].t - window[i].t - h) > 1e-9 * std::abs(h))
      throw std::invalid_argument(
          "continuity_residual: samples are not uniformly spaced");

  const std::size_t c = n / 2;
  const GaussianState& sc = window[c];
  const WidthState w = sigma_from_alpha(params, sc.alpha, sc.alphadot);

  ContinuityResidual out;
  out.values.resize(grid.n());
  for (int j = 0; j < grid.n(); ++j) {
    const double x = grid.x(j);
    const double drho_dt =
        (gaussian_density(x, window[c - 2], params) -
         8.0 * gaussian_density(x, window[c - 1], params) +
         8.0 * gaussian_density(x, window[c + 1], params) -
         gaussian_density(x, window[c + 2], params)) /
        (12.0 * h);
    // d(rho v)/dx = rho [ sigmadot/(2 sigma) - (2u/sigma) v ], analytic.
    const double u = x - sc.q;
    const double v = quantum_velocity(x, sc, params);
    const double dflux_dx = gaussian_density(x, sc, params) *
                            (w.sigmadot / (2.0 * w.sigma) -
                             2.0 * u / w.sigma * v);
    out.values[j] = drho_dt + dflux_dx;
    out.max_abs = std::max(out.max_abs, std::abs(out.values[j]));
  }
  return out;
}

SecondDerivatives on_shell_derivatives(const GaussianState& state,
                                       const PhysicalParams& params) {
  return {rhs_q(state, params), rhs_alpha(state, params)};
}

EulerResidual euler_residual(const GaussianState& state,
                             const PhysicalParams& params,
                             const SecondDerivatives& derivs) {
  const WidthState w = sigma_from_alpha(params, state.alpha, state.alphadot);
  const double scale = params.hbar / params.mass;
  const double sigmaddot =
      2.0 * scale * (state.alphadot * state.alphadot +
                     state.alpha * derivs.alphaddot);
  const double w2 = omega_squared(params.omega, state.t);
  const double m = params.mass;

  EulerResidual r;
  r.constant_term = derivs.qddot + w2 * state.q;
  r.linear_coeff =
      sigmaddot / (2.0 * w.sigma) -
      w.sigmadot * w.sigmadot / (4.0 * w.sigma * w.sigma) + w2 -
      params.hbar * params.hbar / (m * m * w.sigma * w.sigma) +
      2.0 * params.coupling /
          (m * w.sigma * std::sqrt(std::numbers::pi * w.sigma));
  return r;
}

std::vector<FieldSample> sample_fields(const GaussianState& state,
                                       const PhysicalParams& params,
                                       const SpatialGrid& grid) {
  std::vector<FieldSample> out(grid.n());
  for (int j = 0; j < grid.n(); ++j) {
    const double x = grid.x(j);
    out[j] = {x, gaussian_density(x, state, params),
              quantum_velocity(x, state, params),
              bohm_potential(x, state, params),
              gp_potential(x, state, params)};
  }
  return out;
}

void write_fields_csv(std::span<const FieldSample> fields, std::ostream& out) {
  out << "x,rho,v_qu,V_qu,V_gp\n";
  for (const FieldSample& f : fields) {
    const double row[] = {f.x, f.rho, f.v_qu, f.V_qu, f.V_gp};
    detail::put_row(out, row, 5);
  }
}

void write_residual_csv(std::span<const ResidualReportRow> rows,
                        std::ostream& out) {
  out << "t,max_continuity_residual,euler_const,euler_linear\n";
  for (const ResidualReportRow& r : rows) {
    const double row[] = {r.t, r.max_continuity_residual, r.euler_const,
                          r.euler_linear};
    detail::put_row(out, row, 4);
  }
}

}  // namespace gpelab
