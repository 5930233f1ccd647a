#include <doctest.h>

#include <cmath>
#include <random>

#include "gpelab/invariant.hpp"
#include "test_util.hpp"

using namespace gpelab;
using testutil::scenario;

namespace {

GaussianState state(double q, double qdot, double alpha, double alphadot) {
  return GaussianState{0.0, q, qdot, alpha, alphadot};
}

}  // namespace

TEST_CASE("lewis_invariant closed-form values") {
  CHECK(lewis_invariant(state(1.0, 0.0, 1.0, 0.0)) == 0.5);
  CHECK(lewis_invariant(state(0.0, 0.0, 3.7, -0.2)) == 0.0);
  for (double t : {0.0, 0.7, 2.9}) {
    const double I =
        lewis_invariant(state(std::cos(t), -std::sin(t), 1.0, 0.0));
    CHECK(I == doctest::Approx(0.5).epsilon(1e-15));
  }
  CHECK_THROWS_AS(lewis_invariant(state(1.0, 0.0, 0.0, 0.0)),
                  std::domain_error);
}

TEST_CASE("lewis_invariant is a non-negative sum of squares") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> ua(0.1, 3.0);
  for (int i = 0; i < 500; ++i)
    CHECK(lewis_invariant(state(u(rng), u(rng), ua(rng), u(rng))) >= 0.0);
}

TEST_CASE("lewis_invariant scales as lambda^2 in (q, qdot)") {
  const GaussianState base = state(0.8, -0.4, 1.3, 0.2);
  const double I = lewis_invariant(base);
  // power-of-two scaling is exact in floating point
  CHECK(lewis_invariant(state(2.0 * base.q, 2.0 * base.qdot, base.alpha,
                              base.alphadot)) == 4.0 * I);
  const double lambda = 1.7;
  const double scaled = lewis_invariant(
      state(lambda * base.q, lambda * base.qdot, base.alpha, base.alphadot));
  CHECK(scaled == doctest::Approx(lambda * lambda * I).epsilon(1e-12));
}

TEST_CASE("drift_rhs closed-form values") {
  PhysicalParams free_particle;  // g = 0
  CHECK(drift_rhs(state(1.2, -0.4, 0.9, 0.3), free_particle) == 0.0);

  PhysicalParams coupled;
  coupled.coupling = 1.0;
  CHECK(drift_rhs(state(0.0, 1.0, 1.0, 0.0), coupled) == 0.0);
  // Frozen by independent evaluation: 2/sqrt(pi).
  CHECK(drift_rhs(state(1.0, 1.0, 1.0, 0.0), coupled) ==
        doctest::Approx(1.1283791670955126).epsilon(1e-14));
  CHECK_THROWS_AS(drift_rhs(state(1.0, 1.0, -2.0, 0.0), coupled),
                  std::domain_error);
}

TEST_CASE("drift vanishes whenever q/alpha is momentarily stationary") {
  PhysicalParams coupled;
  coupled.coupling = 0.7;
  // qdot alpha == q alphadot exactly
  CHECK(drift_rhs(state(4.0, 1.0, 2.0, 0.5), coupled) == 0.0);
}

TEST_CASE("invariant is conserved along g = 0 trajectories") {
  ScenarioConfig c = scenario(1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 5.0, 1e-3);
  const DriftReport rep = drift_report(integrate(c), c.params);
  CHECK(rep.max_invariant_drift < 1e-12);
  CHECK(rep.samples.size() == integrate(c).size() - 4);
}

TEST_CASE("numeric dI/dt matches the analytic drift law for g != 0") {
  ScenarioConfig c = scenario(1.0, 0.1, 1.0, 0.0, 1.0, 0.0, 5.0, 1e-3);
  const DriftReport rep = drift_report(integrate(c), c.params);
  CHECK(rep.max_abs_residual < 1e-6);
  // the invariant genuinely drifts here
  CHECK(rep.max_invariant_drift > 1e-4);
}

TEST_CASE("conservation error shrinks at fourth order under refinement") {
  // g = 0 with a time-dependent trap: the only invariant drift is the
  // integrator's own truncation error.
  const auto drift_at = [](double dt) {
    ScenarioConfig c = scenario(1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 5.0, dt);
    c.params.omega = OmegaSchedule::sinusoidal(1.0, 0.2, 0.7);
    return drift_report(integrate(c), c.params).max_invariant_drift;
  };
  const double d1 = drift_at(4e-2);
  const double d2 = drift_at(2e-2);
  const double d3 = drift_at(1e-2);
  CHECK(d1 / d2 > 10.0);
  CHECK(d1 / d2 < 24.0);
  CHECK(d2 / d3 > 10.0);
  CHECK(d2 / d3 < 24.0);
}

TEST_CASE("q = qdot = 0 kills the drift even with coupling") {
  ScenarioConfig c = scenario(1.0, 0.1, 0.0, 0.0, 1.2, 0.0, 5.0, 1e-3);
  const DriftReport rep = drift_report(integrate(c), c.params);
  CHECK(rep.max_invariant_drift < 1e-10);
}

TEST_CASE("drift_report rejects short and non-uniform input") {
  ScenarioConfig c = scenario(1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 5.0, 1e-3);
  TrajectoryRecord rec = integrate(c);

  TrajectoryRecord warped = rec;
  warped.samples[100].state.t += 1e-4;
  CHECK_THROWS_AS(drift_report(warped, c.params), std::invalid_argument);

  TrajectoryRecord tiny;
  tiny.samples.assign(rec.samples.begin(), rec.samples.begin() + 4);
  CHECK_THROWS_AS(drift_report(tiny, c.params), std::invalid_argument);
}
