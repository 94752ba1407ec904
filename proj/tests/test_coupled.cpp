#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "thermolens/config.hpp"
#include "thermolens/coupled.hpp"
#include "thermolens/errors.hpp"
#include "thermolens/kernels.hpp"
#include "thermolens/verification.hpp"

using namespace thermolens;

namespace {

// Small-amplitude travelling pulse in nondimensional units.
SimConfig pulse_config(double amplitude, int n = 127, double t_end = 0.2) {
  SimConfig c;
  c.grid = GridSpec{1, 1.0, 1.0, n, n};
  c.medium.rho = 1.0;
  c.medium.beta_acou = 0.1;
  c.medium.b = 0.005;
  c.medium.rho_a = 1.0;
  c.medium.C_a = 0.1;
  c.medium.kappa_a = 1e-6;
  c.medium.rho_b = 1.0;
  c.medium.C_b = 1.0;
  c.medium.W = 0.0;
  c.medium.Theta_a = 0.0;
  c.medium.c_a = 1.0;
  c.medium.q0 = 0.5;
  c.law = SoundSpeedLaw{{1.0, 0.2}, 0.5};
  c.absorption = AbsorptionModel::instantaneous(absorption_scale(c.medium));
  c.dt = 2e-3;
  c.t_end = t_end;
  c.output_every = 10;
  c.p0 = InitialSpec{InitialKind::Gaussian, amplitude, 1, 1, 0.3, 0.5, 0.08};
  c.p1 = InitialSpec{InitialKind::GaussianSlope, -amplitude, 1, 1, 0.3, 0.5, 0.08};
  return c;
}

double rel(const Field& a, const Field& b) { return relative_l2_error(a, b); }

}  // namespace

TEST_SUITE("coupled") {

TEST_CASE("linear decoupled step converges at the second iterate") {
  SimConfig c = pulse_config(0.05);
  c.medium.beta_acou = 0.0;
  c.law = SoundSpeedLaw::constant(1.0, 0.5);
  const CoupledState s = initial_state(c);
  const PicardStep st = picard_step(s, c);
  CHECK(st.iterations == 2);
  CHECK(st.residual < c.picard.tol);
}

TEST_CASE("small data contracts at every step") {
  const SimConfig c = pulse_config(0.02);
  CHECK(2.0 * k_bound(c.medium) * 0.02 <= 0.01);
  const SimulationResult r = run_simulation(c);
  REQUIRE(r.ok());
  for (const auto& res : r.diagnostics.picard_residuals) {
    for (std::size_t k = 1; k < res.size(); ++k) CHECK(res[k] < res[k - 1]);
  }
}

TEST_CASE("halving the amplitude never adds iterations") {
  const SimulationResult a = run_simulation(pulse_config(0.02));
  const SimulationResult b = run_simulation(pulse_config(0.01));
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  REQUIRE(a.diagnostics.picard_iterations.size() == b.diagnostics.picard_iterations.size());
  for (std::size_t i = 0; i < a.diagnostics.picard_iterations.size(); ++i) {
    CHECK(b.diagnostics.picard_iterations[i] <= a.diagnostics.picard_iterations[i]);
  }
}

TEST_CASE("degenerate initial data stop before the first step") {
  SimConfig c = pulse_config(1.0);
  c.law = SoundSpeedLaw::constant(1.0, 1.0);
  c.medium.q0 = 1.0;
  c.medium.beta_acou = 0.6;  // 2 k1 max|p0| = 1.2
  c.p0 = InitialSpec{InitialKind::Sine, 1.0};
  c.p1 = InitialSpec{};
  CHECK_THROWS_AS(initial_state(c), DegeneracyError);
  const SimulationResult r = run_simulation(c);
  CHECK(r.error == RunError::Solver);
  CHECK(r.trajectory.empty());
  CHECK(r.diagnostics.picard_iterations.empty());
  CHECK_THROWS_AS(std::rethrow_exception(r.exception), DegeneracyError);
}

TEST_CASE("zero data give a zero trajectory") {
  SimConfig c = pulse_config(0.0, 31, 0.05);
  const SimulationResult r = run_simulation(c);
  REQUIRE(r.ok());
  CHECK(r.trajectory.front().t == 0.0);
  CHECK(r.trajectory.back().t == doctest::Approx(0.05));
  for (const auto& p : r.trajectory) {
    CHECK(max_abs(p.p) == 0.0);
    CHECK(max_abs(p.theta) == 0.0);
  }
  for (const auto& e : r.reports) {
    CHECK(e.E_total() == 0.0);
    CHECK(e.E_theta == 0.0);
    CHECK(e.min_alpha == 1.0);
  }
}

TEST_CASE("non-degeneracy minimum") {
  const Grid g = Grid::line(1.0, 9);
  MediumParams m;
  m.rho = 1000.0;
  m.beta_acou = 4.5;
  const SoundSpeedLaw law = SoundSpeedLaw::constant(1500.0);
  CHECK(check_nondegeneracy(Field(g), Field(g), m, law).min_value == 1.0);
  // k = 2e-9
  CHECK(check_nondegeneracy(Field(g, 5e7), Field(g), m, law).min_value == doctest::Approx(0.8).epsilon(1e-14));
  Field p(g, 0.0);
  p[4] = 1.0 / (2.0 * k_of_theta(m, law, 0.0));
  const Nondegeneracy nd = check_nondegeneracy(p, Field(g), m, law);
  CHECK(nd.min_value == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(nd.location == 4);
}

TEST_CASE("ball diagnostics") {
  CHECK(ball_diagnostics({}, MediumParams{}).margin == 1.0);
  SimConfig zero = pulse_config(0.0, 31, 0.02);
  const BallDiagnostics bz = ball_diagnostics(run_simulation(zero).trajectory, zero.medium);
  CHECK(bz.gamma_observed == 0.0);
  CHECK(bz.R1_style == 0.0);
  CHECK(bz.R2_style == 0.0);
  CHECK(bz.margin == 1.0);

  const SimConfig small = pulse_config(0.02);
  const BallDiagnostics bs = ball_diagnostics(run_simulation(small).trajectory, small.medium);
  CHECK(bs.margin > 0.0);
  CHECK(bs.gamma_observed > 0.0);
}

TEST_CASE("observed amplitude doubles with the data in linear acoustics") {
  SimConfig c = pulse_config(0.05, 63, 0.1);
  c.medium.beta_acou = 0.0;
  c.law = SoundSpeedLaw::constant(1.0, 0.5);
  SimConfig d = c;
  d.p0.amplitude *= 2.0;
  d.p1.amplitude *= 2.0;
  const auto a = ball_diagnostics(run_simulation(c).trajectory, c.medium);
  const auto b = ball_diagnostics(run_simulation(d).trajectory, d.medium);
  CHECK(b.gamma_observed == 2.0 * a.gamma_observed);
}

TEST_CASE("converged step is a fixed point of the linearized solve") {
  const SimConfig c = pulse_config(0.1);
  CoupledState s = initial_state(c);
  for (int k = 0; k < 5; ++k) s = picard_step(s, c).state;
  const CoupledState prev = s;
  const CoupledState next = picard_step(prev, c).state;

  const FrozenCoefficients coeffs = coefficients_at(next.acoustic.p, next.acoustic.pt,
                                                    next.thermal.theta, c.medium, c.law);
  const AcousticState again = pressure_step(prev.acoustic, coeffs, c.medium.b, c.dt, c.linear);
  CHECK(rel(again.p, next.acoustic.p) < 10 * c.picard.tol);
  const PtSample trial{next.acoustic.t, again.pt};
  const Field q = absorbed_energy(c.absorption, prev.history.samples(), &trial);
  const ThermalState th = heat_step(prev.thermal, c.medium,
                                    HeatForcing{prev.q_current, q, Field(q.grid), Field(q.grid)}, c.dt,
                                    c.linear);
  CHECK(rel(th.theta, next.thermal.theta) < 10 * c.picard.tol);

  // Residual of alpha p_tt - r lap p - b lap p_t - 2 k p_t^2 at the new level.
  const Field lp = laplacian(next.acoustic.p);
  const Field lpt = laplacian(next.acoustic.pt);
  Field res(lp.grid);
  for (std::size_t i = 0; i < res.size(); ++i) {
    res[i] = coeffs.alpha[i] * next.acoustic.ptt[i] - coeffs.r[i] * lp[i] - c.medium.b * lpt[i] - coeffs.f1[i];
  }
  Field rlp(lp.grid);
  for (std::size_t i = 0; i < rlp.size(); ++i) rlp[i] = coeffs.r[i] * lp[i];
  const double scale = norm(next.acoustic.ptt, NormKind::L2) * coeffs.alpha_bounds.second + norm(rlp, NormKind::L2);
  CHECK(norm(res, NormKind::L2) < c.picard.tol * scale);
}

TEST_CASE("runs are deterministic across repeats and thread counts") {
  const SimConfig c = pulse_config(0.1, 127, 0.1);
  const int before = kernels::max_threads();
  const SimulationResult a = run_simulation(c);
  kernels::set_threads(3);
  const SimulationResult b = run_simulation(c);
  kernels::set_threads(before);
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  REQUIRE(a.reports.size() == b.reports.size());
  for (std::size_t i = 0; i < a.reports.size(); ++i) CHECK(a.reports[i] == b.reports[i]);
  for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
    CHECK(a.trajectory[i].p == b.trajectory[i].p);
    CHECK(a.trajectory[i].theta == b.trajectory[i].theta);
  }
}

TEST_CASE("frozen-temperature variant pins the sound speed") {
  const SimConfig c = pulse_config(0.1);
  const SimConfig f = frozen_temperature_variant(c);
  CHECK(f.law.coefficients.size() == 1);
  CHECK(sound_speed(f.law, 50.0) == sound_speed(c.law, c.medium.Theta_a));
}

TEST_CASE("configuration validation names the key") {
  SimConfig c = pulse_config(0.1);
  c.dt = 0.0;
  try {
    validate(c);
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.key == "time.dt");
  }
  c = pulse_config(0.1);
  c.degeneracy_floor = 1.5;
  CHECK_THROWS_AS(validate(c), ValidationError);
  CHECK(run_simulation(c).error == RunError::Validation);
}

TEST_CASE("non-convergence surfaces as a solver error") {
  SimConfig c = pulse_config(0.3);
  c.picard.max_iter = 1;
  const SimulationResult r = run_simulation(c);
  CHECK(r.error == RunError::Solver);
  CHECK_THROWS_AS(std::rethrow_exception(r.exception), NonConvergenceError);
  // Partial output up to the failure is kept.
  CHECK(r.trajectory.size() == 1);
}

}  // TEST_SUITE
