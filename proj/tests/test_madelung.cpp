#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gpelab/ermakov.hpp"
#include "gpelab/madelung.hpp"
#include "test_util.hpp"

using namespace gpelab;
using testutil::scenario;

namespace {

GaussianState state(double q, double qdot, double alpha, double alphadot,
                    double t = 0.0) {
  return GaussianState{t, q, qdot, alpha, alphadot};
}

PhysicalParams params(double w0, double g = 0.0) {
  PhysicalParams p;
  p.coupling = g;
  p.omega = OmegaSchedule::constant(w0);
  return p;
}

const double kInvSqrtPi = 0.5641895835477563;

}  // namespace

TEST_CASE("gaussian_density has the right peak and tail values") {
  const PhysicalParams p = params(1.0);
  const GaussianState s = state(0.3, 0.0, 1.0, 0.0);  // sigma = 1
  CHECK(gaussian_density(s.q, s, p) ==
        doctest::Approx(kInvSqrtPi).epsilon(1e-15));
  CHECK(gaussian_density(s.q + 1.0, s, p) ==
        doctest::Approx(0.20755374871029735).epsilon(1e-14));
}

TEST_CASE("gaussian_density integrates to one") {
  const PhysicalParams p = params(1.0);
  const GaussianState s = state(0.7, 0.0, 1.0, 0.0);
  // trapezoid over [q - 10 sqrt(sigma), q + 10 sqrt(sigma)], 4096 points
  const int n = 4096;
  const double lo = s.q - 10.0, hi = s.q + 10.0;
  const double h = (hi - lo) / (n - 1);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    acc += w * gaussian_density(lo + i * h, s, p);
  }
  CHECK(std::abs(acc * h - 1.0) < 1e-12);

  // and on the standard periodic grid
  const SpatialGrid grid(2048, 40.0);
  CHECK(std::abs(density_norm(s, p, grid) - 1.0) < 1e-10);
}

TEST_CASE("quantum_velocity is affine with the right slope") {
  const PhysicalParams p = params(1.0);
  const GaussianState center = state(0.4, -1.7, 1.0, 0.0);
  CHECK(quantum_velocity(center.q, center, p) == center.qdot);

  // sigma = 1, sigmadot = 1 (alpha = 1, alphadot = 1/2), qdot = 0
  const GaussianState chirped = state(0.0, 0.0, 1.0, 0.5);
  CHECK(quantum_velocity(2.0, chirped, p) ==
        doctest::Approx(1.0).epsilon(1e-15));

  // no density-tail term: equal increments in x give equal increments in v
  const GaussianState s = state(0.2, 0.3, 1.4, -0.6);
  const double d1 = quantum_velocity(1.7, s, p) - quantum_velocity(0.9, s, p);
  const double d2 = quantum_velocity(2.5, s, p) - quantum_velocity(1.7, s, p);
  CHECK(d1 == doctest::Approx(d2).epsilon(1e-13));
}

TEST_CASE("bohm_potential matches its closed form and a finite-difference oracle") {
  const PhysicalParams p = params(1.0);
  const GaussianState s = state(0.5, 0.0, 1.0, 0.0);  // sigma = 1
  CHECK(bohm_potential(s.q, s, p) == 0.5);
  CHECK(bohm_potential(s.q + 1.0, s, p) == 0.0);

  // 4th-order stencil second derivative of sqrt(rho) against the closed
  // form, over the populated region (the stencil's truncation term grows
  // like the sixth Hermite polynomial further out).
  const int n = 4096;
  const double h = 40.0 / n;
  double max_err = 0.0;
  for (int j = 0; j < n; ++j) {
    const double x = -20.0 + j * h;
    if (std::abs(x - s.q) > 3.0) continue;
    const auto sq = [&](double xx) {
      return std::sqrt(gaussian_density(xx, s, p));
    };
    const double d2 = (-sq(x - 2 * h) + 16.0 * sq(x - h) - 30.0 * sq(x) +
                       16.0 * sq(x + h) - sq(x + 2 * h)) /
                      (12.0 * h * h);
    const double v_fd = -0.5 * d2 / sq(x);
    max_err = std::max(max_err, std::abs(v_fd - bohm_potential(x, s, p)));
  }
  CHECK(max_err < 1e-8);
}

TEST_CASE("gp_potential is (g/m) rho") {
  const GaussianState s = state(0.0, 0.0, 1.0, 0.0);
  CHECK(gp_potential(1.3, s, params(1.0, 0.0)) == 0.0);
  CHECK(gp_potential(0.0, s, params(1.0, 1.0)) ==
        doctest::Approx(kInvSqrtPi).epsilon(1e-15));
  for (double x : {-2.0, 0.0, 1.5}) {
    CHECK(gp_potential(x, s, params(1.0, 0.7)) > 0.0);
    CHECK(gp_potential(x, s, params(1.0, -0.7)) < 0.0);
  }
}

TEST_CASE("hbar part of the cubic bracket is exactly linear") {
  const PhysicalParams p = params(1.0);
  const GaussianState s = state(0.2, 0.0, 1.0, 0.0);  // sigma = 1
  CHECK(cubic_bracket_hbar_part(s.q + 1.0, s, p) ==
        doctest::Approx(1.0).epsilon(1e-12));

  const SpatialGrid grid(2048, 40.0);
  double max_dev = 0.0;
  for (int j = 0; j < grid.n(); ++j) {
    const double x = grid.x(j);
    const double linear = (x - s.q);  // hbar^2 (x-q) / (m^2 sigma^2)
    max_dev = std::max(max_dev,
                       std::abs(cubic_bracket_hbar_part(x, s, p) - linear));
  }
  CHECK(max_dev < 1e-10);
}

TEST_CASE("full bracket reduces to k(t)(x - q)") {
  const GaussianState s = state(-0.4, 0.0, 1.2, 0.0);
  SUBCASE("exactly, when g = 0") {
    const PhysicalParams p = params(1.0, 0.0);
    const double sigma = sigma_from_alpha(p, s.alpha, s.alphadot).sigma;
    const double k = k_of_t(sigma, p);
    for (double u : {-3.0, -0.5, 0.01, 1.0, 4.0}) {
      const double b = cubic_bracket(s.q + u, s, p, GpClosure::Exact);
      CHECK(b == doctest::Approx(k * u).epsilon(1e-12));
    }
  }
  SUBCASE("under the peak-linearized closure, for any g") {
    const PhysicalParams p = params(1.0, 0.8);
    const double sigma = sigma_from_alpha(p, s.alpha, s.alphadot).sigma;
    const double k = k_of_t(sigma, p);
    for (double u : {-3.0, -0.5, 0.01, 1.0, 4.0})
      CHECK(std::abs(cubic_bracket(s.q + u, s, p) - k * u) < 1e-10);
  }
}

TEST_CASE("exact-closure deviation grows cubically near the center") {
  const PhysicalParams p = params(1.0, 0.8);
  const GaussianState s = state(0.0, 0.0, 1.0, 0.0);
  const double k = k_of_t(1.0, p);
  const auto dev = [&](double u) {
    return std::abs(cubic_bracket(u, s, p, GpClosure::Exact) - k * u);
  };
  const double ratio = dev(0.02) / dev(0.01);
  CHECK(ratio > 7.8);
  CHECK(ratio < 8.2);
}

TEST_CASE("continuity residual vanishes on-shell") {
  ScenarioConfig c = scenario(1.0, 0.1, 1.0, 0.0, 1.3, 0.0, 1.0, 1e-3);
  const TrajectoryRecord rec = integrate(c);
  const SpatialGrid grid(2048, 40.0);

  std::vector<GaussianState> window;
  for (std::size_t i = 498; i <= 502; ++i)
    window.push_back(rec.samples[i].state);

  const ContinuityResidual r = continuity_residual(window, c.params, grid);
  CHECK(r.max_abs < 1e-7);
  CHECK(r.values.size() == static_cast<std::size_t>(grid.n()));

  SUBCASE("a corrupted width rate is detected") {
    std::vector<GaussianState> bad = window;
    for (auto& s : bad) s.alphadot *= 1.1;
    CHECK(continuity_residual(bad, c.params, grid).max_abs >= 1e-3);
  }
}

TEST_CASE("continuity residual converges at fourth order in dt") {
  const SpatialGrid grid(512, 40.0);
  // windows centered at t = 0.5 of the same trajectory, two resolutions
  const auto residual_at = [&](double dt) {
    ScenarioConfig c = scenario(1.0, 0.1, 1.0, 0.0, 1.3, 0.0, 1.0, dt);
    const TrajectoryRecord rec = integrate(c);
    const std::size_t center = static_cast<std::size_t>(0.5 / dt);
    std::vector<GaussianState> window;
    for (std::size_t i = center - 2; i <= center + 2; ++i)
      window.push_back(rec.samples[i].state);
    return continuity_residual(window, c.params, grid).max_abs;
  };
  const double ratio = residual_at(2e-2) / residual_at(1e-2);
  CHECK(ratio > 10.0);
  CHECK(ratio < 24.0);
}

TEST_CASE("peak-linearization error is odd in (x - q)") {
  const PhysicalParams p = params(1.0, 0.8);
  // centered packet so that x - q is exact for mirrored sample points
  const GaussianState s = state(0.0, 0.0, 1.1, 0.0);
  const double sigma = sigma_from_alpha(p, s.alpha, s.alphadot).sigma;
  const double k = k_of_t(sigma, p);
  for (double u : {0.05, 0.3, 1.0, 2.5}) {
    const double plus = cubic_bracket(u, s, p, GpClosure::Exact) - k * u;
    const double minus = cubic_bracket(-u, s, p, GpClosure::Exact) + k * u;
    CHECK(plus == -minus);  // bitwise: every term is odd or exactly even
  }
}

TEST_CASE("density stays normalized along a trajectory") {
  ScenarioConfig c = scenario(1.0, 0.1, 1.0, 0.0, 1.3, 0.0, 5.0, 1e-3);
  const TrajectoryRecord rec = integrate(c);
  const SpatialGrid grid(2048, 40.0);
  for (std::size_t i = 0; i < rec.size(); i += 500)
    CHECK(std::abs(density_norm(rec.samples[i].state, c.params, grid) - 1.0) <
          1e-10);
}

TEST_CASE("continuity residual is round-off for a frozen state") {
  const PhysicalParams p = params(1.0);
  std::vector<GaussianState> window;
  for (int i = 0; i < 5; ++i)
    window.push_back(state(0.3, 0.0, 1.0, 0.0, 0.1 * i));
  const SpatialGrid grid(512, 40.0);
  // the flux term is exactly zero; the time stencil leaves ~eps*rho
  CHECK(continuity_residual(window, p, grid).max_abs < 1e-15);
}

TEST_CASE("continuity residual rejects bad windows") {
  const PhysicalParams p = params(1.0);
  const SpatialGrid grid(512, 40.0);
  std::vector<GaussianState> window;
  for (int i = 0; i < 4; ++i)
    window.push_back(state(0.0, 0.0, 1.0, 0.0, 0.1 * i));
  CHECK_THROWS_AS(continuity_residual(window, p, grid),
                  std::invalid_argument);
  window.push_back(state(0.0, 0.0, 1.0, 0.0, 0.55));
  CHECK_THROWS_AS(continuity_residual(window, p, grid),
                  std::invalid_argument);
}

TEST_CASE("euler residual vanishes on-shell and isolates violations") {
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> uq(-2.0, 2.0);
  std::uniform_real_distribution<double> ua(0.5, 2.0);
  std::uniform_real_distribution<double> uw(0.2, 2.0);
  std::uniform_real_distribution<double> ug(-0.5, 1.0);
  for (int i = 0; i < 100; ++i) {
    const PhysicalParams p = params(uw(rng), ug(rng));
    const GaussianState s = state(uq(rng), uq(rng), ua(rng), uq(rng));
    const EulerResidual r = euler_residual(s, p, on_shell_derivatives(s, p));
    CHECK(std::abs(r.constant_term) < 1e-12);
    CHECK(std::abs(r.linear_coeff) < 1e-12);
  }

  SUBCASE("mis-set qddot lands in the constant term") {
    const PhysicalParams p = params(1.0);
    const GaussianState s = state(1.0, 0.3, 1.0, 0.0);
    SecondDerivatives d = on_shell_derivatives(s, p);
    d.qddot = 0.0;
    const EulerResidual r = euler_residual(s, p, d);
    CHECK(r.constant_term == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(r.linear_coeff) < 1e-12);
  }

  SUBCASE("mis-set alphaddot lands in the linear coefficient") {
    const PhysicalParams p = params(1.0);
    const GaussianState s = state(1.0, 0.3, 1.0, 0.0);
    SecondDerivatives d = on_shell_derivatives(s, p);
    d.alphaddot += 0.5;
    const EulerResidual r = euler_residual(s, p, d);
    CHECK(r.constant_term == 0.0);
    CHECK(std::abs(r.linear_coeff) > 0.1);
  }
}

TEST_CASE("quantum force expectation vanishes for the ansatz") {
  const SpatialGrid grid(2048, 40.0);
  const PhysicalParams p = params(1.0);
  for (const GaussianState& s :
       {state(0.0, 0.0, 1.0, 0.0), state(1.5, 0.4, std::sqrt(2.0), 0.1),
        state(-2.0, 0.0, 0.8, -0.3)}) {
    const QuadratureResult f = quantum_force_expectation(s, p, grid);
    CHECK(std::abs(f.value) < 1e-12);
    CHECK_FALSE(f.narrow_grid);
    // pointwise form of the same closure
    CHECK(bohm_potential_gradient(s.q, s, p) == 0.0);
    // <x> companion
    CHECK(std::abs(position_expectation(s, p, grid).value - s.q) < 1e-10);
  }
}

TEST_CASE("narrow grids are flagged") {
  const SpatialGrid grid(256, 10.0);
  const PhysicalParams p = params(1.0);
  const GaussianState s = state(3.5, 0.0, 2.0, 0.0);  // sigma = 4
  CHECK(quantum_force_expectation(s, p, grid).narrow_grid);
}

// A skewed density distinguishes the two readings of the force closure:
// the *integral* of rho dV_qu/dx vanishes for any density decaying at
// infinity (integrate by parts twice), while the *pointwise* gradient at
// the packet center does not. Both are computed here with independent
// finite-difference machinery.
TEST_CASE("skewed density: integral force stays zero, center gradient does not") {
  const int n = 4096;
  const double L = 16.0, h = L / n;
  std::vector<double> xs(n), rho(n);
  double norm = 0.0;
  for (int j = 0; j < n; ++j) {
    xs[j] = -L / 2 + j * h;
    rho[j] = std::exp(-xs[j] * xs[j]) / std::sqrt(std::numbers::pi) *
             (1.0 + 0.3 * std::tanh(xs[j]));
    norm += rho[j] * h;
  }
  for (double& r : rho) r /= norm;

  std::vector<double> s(n), v(n, 0.0), dv(n, 0.0);
  for (int j = 0; j < n; ++j) s[j] = std::sqrt(rho[j]);
  for (int j = 2; j + 2 < n; ++j) {
    const double d2 = (-s[j - 2] + 16.0 * s[j - 1] - 30.0 * s[j] +
                       16.0 * s[j + 1] - s[j + 2]) /
                      (12.0 * h * h);
    v[j] = -0.5 * d2 / s[j];
  }
  for (int j = 4; j + 4 < n; ++j)
    dv[j] = (v[j - 2] - 8.0 * v[j - 1] + 8.0 * v[j + 1] - v[j + 2]) /
            (12.0 * h);

  double integral = 0.0, x_mean = 0.0;
  for (int j = 0; j < n; ++j) {
    integral += rho[j] * dv[j] * h;
    x_mean += xs[j] * rho[j] * h;
  }
  const int jc = static_cast<int>(std::lround((x_mean + L / 2) / h));

  CHECK(std::abs(integral) < 1e-4);      // universal, not ansatz-specific
  CHECK(std::abs(dv[jc]) > 1e-2);        // ansatz-specific closure breaks
}

TEST_CASE("field snapshots carry all four fields") {
  const SpatialGrid grid(256, 40.0);
  const PhysicalParams p = params(1.0, 0.5);
  const GaussianState s = state(0.5, 0.2, 1.0, 0.1);
  const auto fields = sample_fields(s, p, grid);
  REQUIRE(fields.size() == 256);
  const int jc = 128;  // x = 0 on this grid
  CHECK(fields[jc].x == 0.0);
  CHECK(fields[jc].rho == gaussian_density(0.0, s, p));
  CHECK(fields[jc].v_qu == quantum_velocity(0.0, s, p));
  CHECK(fields[jc].V_qu == bohm_potential(0.0, s, p));
  CHECK(fields[jc].V_gp == gp_potential(0.0, s, p));
}
