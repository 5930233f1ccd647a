#include "gpelab/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "format_util.hpp"
#include "gpelab/ermakov.hpp"
#include "gpelab/invariant.hpp"

namespace gpelab {

namespace {

// In-place complex FFT pair on one owned buffer. Plans use FFTW_ESTIMATE:
// plan choice is then heuristic, not timing-based, which keeps repeated
// runs bitwise identical.
class FourierWorkspace {
 public:
  explicit FourierWorkspace(int n)
      : n_(n),
        buf_(static_cast<std::complex<double>*>(
            fftw_malloc(sizeof(fftw_complex) * n))) {
    auto* raw = reinterpret_cast<fftw_complex*>(buf_);
    fwd_ = fftw_plan_dft_1d(n_, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(n_, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FourierWorkspace() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(buf_);
  }
  FourierWorkspace(const FourierWorkspace&) = delete;
  FourierWorkspace& operator=(const FourierWorkspace&) = delete;

  std::complex<double>* data() { return buf_; }
  void forward() { fftw_execute(fwd_); }
  // Backward transform including the 1/n normalization (exact for power-of-
  // two n).
  void backward() {
    fftw_execute(bwd_);
    const double inv = 1.0 / n_;
    for (int j = 0; j < n_; ++j) buf_[j] *= inv;
  }

 private:
  int n_;
  std::complex<double>* buf_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

}  // namespace

ComplexField init_wavefunction(const GaussianState& state,
                               const PhysicalParams& params,
                               const SpatialGrid& grid) {
  const WidthState w = sigma_from_alpha(params, state.alpha, state.alphadot);
  const double edge = std::max(
      std::exp(-(grid.x(0) - state.q) * (grid.x(0) - state.q) / w.sigma),
      std::exp(-(grid.x(grid.n() - 1) - state.q) *
               (grid.x(grid.n() - 1) - state.q) / w.sigma)) /
      std::sqrt(std::numbers::pi * w.sigma);
  if (edge >= 1e-16)
    throw std::invalid_argument(
        "init_wavefunction: grid too narrow for this state (edge density >= "
        "1e-16)");

  ComplexField psi;
  psi.t = state.t;
  psi.values.resize(grid.n());
  const double amp_norm = std::pow(std::numbers::pi * w.sigma, -0.25);
  const double chirp = params.mass / params.hbar * w.sigmadot / (4.0 * w.sigma);
  const double wave = params.mass / params.hbar * state.qdot;
  for (int j = 0; j < grid.n(); ++j) {
    const double u = grid.x(j) - state.q;
    const double amplitude = amp_norm * std::exp(-u * u / (2.0 * w.sigma));
    const double phase = chirp * u * u + wave * u;
    psi.values[j] = std::polar(amplitude, phase);
  }
  return psi;
}

double field_norm(const ComplexField& psi, const SpatialGrid& grid) {
  double acc = 0.0;
  for (const auto& v : psi.values) acc += std::norm(v);
  return acc * grid.dx();
}

MomentSet moments(const ComplexField& psi, const PhysicalParams& params,
                  const SpatialGrid& grid) {
  const int n = grid.n();
  MomentSet m;
  double sum_rho = 0.0, sum_x = 0.0;
  for (int j = 0; j < n; ++j) {
    const double rho = std::norm(psi.values[j]);
    sum_rho += rho;
    sum_x += grid.x(j) * rho;
  }
  m.norm = sum_rho * grid.dx();
  m.x_mean = sum_x / sum_rho;
  double sum_var = 0.0;
  for (int j = 0; j < n; ++j) {
    const double u = grid.x(j) - m.x_mean;
    sum_var += u * u * std::norm(psi.values[j]);
  }
  m.variance = sum_var / sum_rho;
  m.sigma_est = 2.0 * m.variance;
  m.alpha_est = std::sqrt(params.mass * m.sigma_est / params.hbar);
  if (!(m.norm > 0.0) || !(m.variance > 0.0))
    throw std::domain_error("moments: degenerate field (norm or variance <= 0)");

  // <p> in the Fourier representation: hbar * sum k |psi_hat|^2 normalized
  // by sum |psi_hat|^2 (the transform scaling cancels).
  FourierWorkspace ws(n);
  std::copy(psi.values.begin(), psi.values.end(), ws.data());
  ws.forward();
  const std::vector<double> ks = wavenumbers(grid);
  double sum_k = 0.0, sum_hat = 0.0;
  for (int j = 0; j < n; ++j) {
    const double w = std::norm(ws.data()[j]);
    sum_k += ks[j] * w;
    sum_hat += w;
  }
  m.p_mean = params.hbar * sum_k / sum_hat;
  return m;
}

struct SplitStepPropagator::Impl {
  Impl(const SpatialGrid& g, const PhysicalParams& p)
      : grid(g), params(p), ws(g.n()), ks(wavenumbers(g)),
        kinetic_phase(g.n()) {}

  void rebuild_kinetic(double dt) {
    const double c = params.hbar * dt / (2.0 * params.mass);
    for (int j = 0; j < grid.n(); ++j)
      kinetic_phase[j] = std::polar(1.0, -c * ks[j] * ks[j]);
    kinetic_dt = dt;
  }

  SpatialGrid grid;
  PhysicalParams params;
  FourierWorkspace ws;
  std::vector<double> ks;
  std::vector<std::complex<double>> kinetic_phase;
  double kinetic_dt = 0.0;
  bool kinetic_ready = false;
};

SplitStepPropagator::SplitStepPropagator(const SpatialGrid& grid,
                                         const PhysicalParams& params)
    : impl_(std::make_unique<Impl>(grid, params)) {
  params.validate();
}

SplitStepPropagator::~SplitStepPropagator() = default;

const SpatialGrid& SplitStepPropagator::grid() const { return impl_->grid; }

void SplitStepPropagator::step(ComplexField& psi, double dt) {
  Impl& im = *impl_;
  const int n = im.grid.n();
  if (static_cast<int>(psi.values.size()) != n)
    throw std::invalid_argument("SplitStepPropagator: field size mismatch");
  if (!(dt > 0.0))
    throw std::invalid_argument("SplitStepPropagator: dt must be > 0");
  if (!im.kinetic_ready || dt != im.kinetic_dt) {
    im.rebuild_kinetic(dt);
    im.kinetic_ready = true;
  }

  const double w2 = omega_squared(im.params.omega, psi.t + 0.5 * dt);
  const double half = 0.5 * dt / im.params.hbar;
  const double v_coef = 0.5 * im.params.mass * w2;
  const double g = im.params.coupling;

  std::complex<double>* f = im.ws.data();
  std::copy(psi.values.begin(), psi.values.end(), f);

  for (int j = 0; j < n; ++j) {
    const double x = im.grid.x(j);
    const double pot = v_coef * x * x + g * std::norm(f[j]);
    f[j] *= std::polar(1.0, -half * pot);
  }
  im.ws.forward();
  for (int j = 0; j < n; ++j) f[j] *= im.kinetic_phase[j];
  im.ws.backward();
  for (int j = 0; j < n; ++j) {
    const double x = im.grid.x(j);
    const double pot = v_coef * x * x + g * std::norm(f[j]);
    f[j] *= std::polar(1.0, -half * pot);
  }

  for (int j = 0; j < n; ++j)
    if (!std::isfinite(f[j].real()) || !std::isfinite(f[j].imag()))
      throw BlowupError(psi.t);

  std::copy(f, f + n, psi.values.begin());
  psi.t += dt;
}

ComplexField strang_step(const ComplexField& psi, const PhysicalParams& params,
                         const SpatialGrid& grid, double dt) {
  SplitStepPropagator prop(grid, params);
  ComplexField out = psi;
  prop.step(out, dt);
  return out;
}

ComplexField translate(const ComplexField& psi, const SpatialGrid& grid,
                       double delta) {
  FourierWorkspace ws(grid.n());
  std::copy(psi.values.begin(), psi.values.end(), ws.data());
  ws.forward();
  const std::vector<double> ks = wavenumbers(grid);
  for (int j = 0; j < grid.n(); ++j)
    ws.data()[j] *= std::polar(1.0, -ks[j] * delta);
  ws.backward();
  ComplexField out;
  out.t = psi.t;
  out.values.assign(ws.data(), ws.data() + grid.n());
  return out;
}

namespace {

long step_count(const ScenarioConfig& config) {
  return std::max(1L, std::lround(config.t_end / config.dt));
}

}  // namespace

std::vector<MomentRow> run_pde(const ScenarioConfig& config,
                               ComplexField* psi_initial,
                               ComplexField* psi_final) {
  config.validate();
  const SpatialGrid grid = SpatialGrid::from_spec(config.grid);
  ComplexField psi = init_wavefunction(config.initial, config.params, grid);
  if (psi_initial) *psi_initial = psi;

  SplitStepPropagator prop(grid, config.params);
  const long n = step_count(config);
  const double h = config.t_end / static_cast<double>(n);

  std::vector<MomentRow> rows;
  rows.reserve(static_cast<std::size_t>(n) + 1);
  const auto record = [&](double t) {
    const MomentSet m = moments(psi, config.params, grid);
    rows.push_back({t, m.norm, m.x_mean, m.p_mean, m.sigma_est, m.alpha_est});
  };
  record(0.0);
  for (long i = 1; i <= n; ++i) {
    prop.step(psi, h);
    psi.t = (i == n) ? config.t_end : i * h;
    record(psi.t);
  }
  if (psi_final) *psi_final = psi;
  return rows;
}

ComparisonReport run_and_compare(const ScenarioConfig& config) {
  config.validate();
  ComparisonReport report;
  const TrajectoryRecord ode = integrate(config);
  std::vector<MomentRow> pde =
      run_pde(config, &report.psi_initial, &report.psi_final);
  // integrate() and run_pde() derive the step count the same way, so the
  // two sample sets share their time points.
  const std::size_t n = std::min(ode.size(), pde.size());

  // alpha rate from a 4th-order central stencil on alpha_est.
  std::vector<double> alphadot_est(n, std::numeric_limits<double>::quiet_NaN());
  const double h = n > 1 ? pde[1].t - pde[0].t : 1.0;
  for (std::size_t i = 2; i + 2 < n; ++i)
    alphadot_est[i] =
        (pde[i - 2].alpha_est - 8.0 * pde[i - 1].alpha_est +
         8.0 * pde[i + 1].alpha_est - pde[i + 2].alpha_est) /
        (12.0 * h);

  report.rows.reserve(n);
  bool have_first_I = false;
  double first_I = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ComparisonRow row;
    row.t = pde[i].t;
    row.q_ode = ode.samples[i].state.q;
    row.q_pde = pde[i].x_mean;
    row.sigma_ode = ode.samples[i].sigma;
    row.sigma_pde = pde[i].sigma_est;
    row.I_ode = ode.samples[i].invariant;
    row.norm = pde[i].norm;
    if (std::isfinite(alphadot_est[i])) {
      const GaussianState moment_state{row.t, pde[i].x_mean,
                                       pde[i].p_mean / config.params.mass,
                                       pde[i].alpha_est, alphadot_est[i]};
      row.I_pde = lewis_invariant(moment_state);
      if (!have_first_I) {
        first_I = row.I_pde;
        have_first_I = true;
      }
      report.max_I_pde_drift =
          std::max(report.max_I_pde_drift, std::abs(row.I_pde - first_I));
    } else {
      row.I_pde = std::numeric_limits<double>::quiet_NaN();
    }
    report.max_q_dev =
        std::max(report.max_q_dev, std::abs(row.q_ode - row.q_pde));
    report.max_sigma_dev =
        std::max(report.max_sigma_dev, std::abs(row.sigma_ode - row.sigma_pde));
    report.max_norm_err =
        std::max(report.max_norm_err, std::abs(row.norm - 1.0));
    report.rows.push_back(row);
  }
  return report;
}

void write_comparison_csv(const ComparisonReport& report, std::ostream& out) {
  out << "t,q_ode,q_pde,sigma_ode,sigma_pde,I_ode,I_pde,norm\n";
  for (const ComparisonRow& r : report.rows) {
    const double row[] = {r.t,         r.q_ode, r.q_pde, r.sigma_ode,
                          r.sigma_pde, r.I_ode, r.I_pde, r.norm};
    detail::put_row(out, row, 8);
  }
}

void write_moments_csv(const std::vector<MomentRow>& rows, std::ostream& out) {
  out << "t,norm,x_mean,p_mean,sigma_est,alpha_est\n";
  for (const MomentRow& r : rows) {
    const double row[] = {r.t, r.norm, r.x_mean, r.p_mean, r.sigma_est,
                          r.alpha_est};
    detail::put_row(out, row, 6);
  }
}

void write_wavefunction_csv(const ComplexField& psi, const SpatialGrid& grid,
                            std::ostream& out) {
  out << "x,re_psi,im_psi,rho\n";
  for (int j = 0; j < grid.n(); ++j) {
    const double row[] = {grid.x(j), psi.values[j].real(),
                          psi.values[j].imag(), std::norm(psi.values[j])};
    detail::put_row(out, row, 4);
  }
}

}  // namespace gpelab
