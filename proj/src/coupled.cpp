#include "thermolens/coupled.hpp"

#include <algorithm>
#include <cmath>

#include "thermolens/errors.hpp"

namespace thermolens {

Field make_initial(const InitialSpec& spec, const Grid& g) {
  switch (spec.kind) {
    case InitialKind::Zero:
      return Field(g);
    case InitialKind::Sine:
      return spec.amplitude * sine_mode(g, spec.mx, spec.my);
    case InitialKind::Gaussian: {
      const double w2 = spec.width * spec.width;
      return sample(g, [&](double x, double y) {
        double r2 = (x - spec.cx) * (x - spec.cx);
        if (g.dims == 2) r2 += (y - spec.cy) * (y - spec.cy);
        return spec.amplitude * std::exp(-r2 / w2);
      });
    }
    case InitialKind::GaussianSlope: {
      const double w2 = spec.width * spec.width;
      return sample(g, [&](double x, double y) {
        double r2 = (x - spec.cx) * (x - spec.cx);
        if (g.dims == 2) r2 += (y - spec.cy) * (y - spec.cy);
        return -2.0 * (x - spec.cx) / w2 * spec.amplitude * std::exp(-r2 / w2);
      });
    }
  }
  return Field(g);
}

void validate(const SimConfig& cfg) {
  if (cfg.grid.dims != 1 && cfg.grid.dims != 2) throw ValidationError("grid.dims", "must be 1 or 2");
  if (cfg.grid.nx < 3) throw ValidationError("grid.nx", "must be >= 3");
  if (cfg.grid.dims == 2 && cfg.grid.ny < 3) throw ValidationError("grid.ny", "must be >= 3");
  if (!(cfg.grid.lx > 0.0)) throw ValidationError("grid.lx", "must be > 0");
  if (cfg.grid.dims == 2 && !(cfg.grid.ly > 0.0)) throw ValidationError("grid.ly", "must be > 0");
  validate(cfg.medium);
  if (cfg.law.coefficients.empty()) throw ValidationError("sound_speed.coefficients", "need at least one");
  if (!(cfg.law.floor_q0 > 0.0)) throw ValidationError("sound_speed.floor_q0", "must be > 0");
  validate(cfg.absorption);
  if (cfg.history_decimation < 1) throw ValidationError("absorption.decimation", "must be >= 1");
  if (!(cfg.dt > 0.0)) throw ValidationError("time.dt", "must be > 0");
  if (!(cfg.t_end >= 0.0)) throw ValidationError("time.t_end", "must be >= 0");
  if (!(cfg.picard.tol > 0.0)) throw ValidationError("picard.tol", "must be > 0");
  if (cfg.picard.max_iter < 1) throw ValidationError("picard.max_iter", "must be >= 1");
  if (!(cfg.linear.rel_tol > 0.0)) throw ValidationError("picard.linear_tol", "must be > 0");
  if (!(cfg.degeneracy_floor > 0.0 && cfg.degeneracy_floor < 1.0)) {
    throw ValidationError("picard.degeneracy_floor", "must lie in (0, 1)");
  }
  if (cfg.output_every < 1) throw ValidationError("output.every", "must be >= 1");
  if (!(cfg.gronwall_cap >= 0.0)) throw ValidationError("diagnostics.gronwall_cap", "must be >= 0");
}

SimConfig frozen_temperature_variant(const SimConfig& cfg) {
  SimConfig out = cfg;
  out.law = SoundSpeedLaw::constant(sound_speed(cfg.law, cfg.medium.Theta_a), cfg.law.floor_q0);
  return out;
}

Nondegeneracy check_nondegeneracy(const Field& p, const Field& theta, const MediumParams& m,
                                  const SoundSpeedLaw& law) {
  Nondegeneracy out;
  out.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = 1.0 - 2.0 * k_of_theta(m, law, theta[i]) * p[i];
    if (a < out.min_value) {
      out.min_value = a;
      out.location = i;
    }
  }
  if (p.size() == 0) out.min_value = 1.0;
  return out;
}

FrozenCoefficients coefficients_at(const Field& p, const Field& pt, const Field& theta,
                                   const MediumParams& m, const SoundSpeedLaw& law,
                                   const Field* f1_extra) {
  const Grid& g = p.grid;
  Field alpha(g), r(g), f1(g);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double k = k_of_theta(m, law, theta[i]);
    alpha[i] = 1.0 - 2.0 * k * p[i];
    r[i] = q_of_theta(law, theta[i]);
    f1[i] = 2.0 * k * pt[i] * pt[i] + (f1_extra ? (*f1_extra)[i] : 0.0);
  }
  return FrozenCoefficients::make(std::move(alpha), std::move(r), std::move(f1));
}

namespace {

constexpr double kAbsFloor = 1e-14;

double relative_change(const Field& next, const Field& prev) {
  const double d = norm(next - prev, NormKind::L2);
  const double base = norm(next, NormKind::L2);
  return base > kAbsFloor ? d / base : d;
}

void guard(const Nondegeneracy& nd, double floor) {
  if (nd.min_value < floor) throw DegeneracyError(nd.min_value, nd.location);
}

Field f1_at(const RunHooks& h, const Grid& g, double t) { return h.f1 ? h.f1(t) : Field(g); }
Field f2_at(const RunHooks& h, const Grid& g, double t) { return h.f2 ? h.f2(t) : Field(g); }

}  // namespace

CoupledState initial_state(const SimConfig& cfg, const RunHooks& hooks) {
  const Grid g = cfg.grid.make();
  CoupledState s{AcousticState{}, ThermalState{},
                 PtHistory(cfg.history_capacity, cfg.history_decimation), Field(g), Diagnostics{}};
  const Field p0 = hooks.p0 ? *hooks.p0 : make_initial(cfg.p0, g);
  const Field p1 = hooks.p1 ? *hooks.p1 : make_initial(cfg.p1, g);
  const Field th0 = hooks.theta0 ? *hooks.theta0 : make_initial(cfg.theta0, g);

  const Nondegeneracy nd = check_nondegeneracy(p0, th0, cfg.medium, cfg.law);
  guard(nd, cfg.degeneracy_floor);

  const Field f1 = f1_at(hooks, g, 0.0);
  const FrozenCoefficients c0 = coefficients_at(p0, p1, th0, cfg.medium, cfg.law, &f1);
  s.acoustic.p = p0;
  s.acoustic.pt = p1;
  s.acoustic.ptt = initial_ptt(p0, p1, c0, cfg.medium.b);
  s.acoustic.t = 0.0;

  s.history.push(0.0, p1);
  s.q_current = absorbed_energy(cfg.absorption, s.history.samples());
  s.thermal.theta = th0;
  s.thermal.theta_t = heat_rate(th0, cfg.medium, s.q_current, f2_at(hooks, g, 0.0));
  s.thermal.t = 0.0;
  s.diagnostics.min_alpha = nd.min_value;
  for (double th : th0.values) {
    if (is_clamped(cfg.law, th)) ++s.diagnostics.clamp_events;
  }
  return s;
}

PicardStep picard_step(const CoupledState& state, const SimConfig& cfg, const RunHooks& hooks) {
  const Grid& g = state.acoustic.p.grid;
  const double dt = cfg.dt;
  const double t_new = state.acoustic.t + dt;
  const Nondegeneracy entry = check_nondegeneracy(state.acoustic.p, state.thermal.theta,
                                                  cfg.medium, cfg.law);
  guard(entry, cfg.degeneracy_floor);

  const Field f1_ext = f1_at(hooks, g, t_new);
  const Field f2_old = f2_at(hooks, g, state.thermal.t);
  const Field f2_new = f2_at(hooks, g, t_new);

  // Warm start from the previous time level.
  AcousticState p_iter = state.acoustic;
  Field theta_iter = state.thermal.theta;
  ThermalState th_new;
  Field q_new;

  PicardStep out;
  bool converged = false;
  for (int it = 1; it <= cfg.picard.max_iter; ++it) {
    guard(check_nondegeneracy(p_iter.p, theta_iter, cfg.medium, cfg.law), cfg.degeneracy_floor);
    const FrozenCoefficients c =
        coefficients_at(p_iter.p, p_iter.pt, theta_iter, cfg.medium, cfg.law, &f1_ext);

    AcousticState ac = pressure_step(state.acoustic, c, cfg.medium.b, dt, cfg.linear);

    const PtSample trial{t_new, ac.pt};
    q_new = absorbed_energy(cfg.absorption, state.history.samples(), &trial);
    th_new = heat_step(state.thermal, cfg.medium,
                       HeatForcing{state.q_current, q_new, f2_old, f2_new}, dt, cfg.linear);

    const double res = std::max(relative_change(ac.p, p_iter.p),
                                relative_change(th_new.theta, theta_iter));
    out.residuals.push_back(res);
    out.iterations = it;
    out.residual = res;
    p_iter = std::move(ac);
    theta_iter = th_new.theta;
    if (res < cfg.picard.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw NonConvergenceError("fixed-point iteration did not converge", out.iterations,
                              out.residual);
  }

  const Nondegeneracy exit_nd = check_nondegeneracy(p_iter.p, th_new.theta, cfg.medium, cfg.law);
  guard(exit_nd, cfg.degeneracy_floor);

  out.state.acoustic = std::move(p_iter);
  out.state.thermal = std::move(th_new);
  out.state.history = state.history;
  out.state.history.push(t_new, out.state.acoustic.pt);
  out.state.q_current = std::move(q_new);
  out.state.diagnostics = state.diagnostics;
  auto& d = out.state.diagnostics;
  d.min_alpha = std::min(d.min_alpha, exit_nd.min_value);
  for (double th : out.state.thermal.theta.values) {
    if (is_clamped(cfg.law, th)) ++d.clamp_events;
  }
  d.picard_iterations.push_back(out.iterations);
  d.picard_residuals.push_back(out.residuals);
  return out;
}

namespace {

TrajectoryPoint capture(const CoupledState& s) {
  return TrajectoryPoint{s.acoustic.t, s.acoustic.p, s.acoustic.pt, s.acoustic.ptt,
                         s.thermal.theta, s.thermal.theta_t};
}

EnergyReport report_for(const CoupledState& s, const SimConfig& cfg, const RunHooks& hooks,
                        std::optional<CoefficientLevel>& prev) {
  const Grid& g = s.acoustic.p.grid;
  const Field f1_ext = f1_at(hooks, g, s.acoustic.t);
  const FrozenCoefficients c = coefficients_at(s.acoustic.p, s.acoustic.pt, s.thermal.theta,
                                               cfg.medium, cfg.law, &f1_ext);
  const AcousticEnergies ae = acoustic_energies(s.acoustic, c, cfg.medium.b);
  const HeatEnergies he = heat_energy(s.thermal);

  EnergyReport r;
  r.t = s.acoustic.t;
  r.E0 = ae.E0;
  r.E1 = ae.E1;
  r.E2 = ae.E2;
  r.D_p = ae.D_p;
  r.E_theta = he.E_theta;
  r.D_theta = he.D_theta;
  r.min_alpha = c.alpha_bounds.first;

  CoefficientLevel cur{s.acoustic.t, c.alpha, c.r, c.f1};
  if (prev) {
    const LambdaF lf = lambda_F(*prev, cur);
    r.Lambda = lf.Lambda;
    r.Fterm = lf.Fterm;
  } else {
    // No previous level yet: time-derivative terms are omitted.
    r.Fterm = std::pow(norm(c.f1, NormKind::L2), 2) + std::pow(norm(c.f1, NormKind::H1semi), 2);
  }
  prev = std::move(cur);
  return r;
}

}  // namespace

SimulationResult run_simulation(const SimConfig& cfg, const RunHooks& hooks) {
  SimulationResult res;
  try {
    validate(cfg);
    CoupledState s = initial_state(cfg, hooks);
    std::optional<CoefficientLevel> prev;
    res.trajectory.push_back(capture(s));
    res.reports.push_back(report_for(s, cfg, hooks, prev));
    res.diagnostics = s.diagnostics;

    const long steps = std::lround(cfg.t_end / cfg.dt);
    for (long n = 1; n <= steps; ++n) {
      PicardStep ps = picard_step(s, cfg, hooks);
      s = std::move(ps.state);
      res.diagnostics = s.diagnostics;
      if (n % cfg.output_every == 0 || n == steps) {
        res.trajectory.push_back(capture(s));
        res.reports.push_back(report_for(s, cfg, hooks, prev));
      }
    }
  } catch (const ValidationError& e) {
    res.error = RunError::Validation;
    res.error_message = e.what();
    res.exception = std::current_exception();
  } catch (const SolverError& e) {
    res.error = RunError::Solver;
    res.error_message = e.what();
    res.exception = std::current_exception();
  } catch (const IoError& e) {
    res.error = RunError::Io;
    res.error_message = e.what();
    res.exception = std::current_exception();
  }
  return res;
}

BallDiagnostics ball_diagnostics(const std::vector<TrajectoryPoint>& trajectory,
                                 const MediumParams& m) {
  BallDiagnostics b;
  double p3 = 0.0, pt2 = 0.0, ptt0 = 0.0, th2 = 0.0, tht0 = 0.0;
  for (const auto& s : trajectory) {
    b.gamma_observed = std::max(b.gamma_observed, max_abs(s.p));
    p3 = std::max(p3, norm(s.p, NormKind::H3viaGradLap));
    pt2 = std::max(pt2, norm(s.pt, NormKind::H2viaLap));
    ptt0 = std::max(ptt0, norm(s.ptt, NormKind::L2));
    th2 = std::max(th2, norm(s.theta, NormKind::H2viaLap));
    tht0 = std::max(tht0, norm(s.theta_t, NormKind::L2));
  }
  b.R1_style = p3 + pt2 + ptt0;
  b.R2_style = th2 + tht0;
  b.margin = 1.0 - 2.0 * k_bound(m) * b.gamma_observed;
  return b;
}

double trajectory_distance(const std::vector<TrajectoryPoint>& a,
                           const std::vector<TrajectoryPoint>& b) {
  if (a.size() != b.size()) throw ValidationError("trajectory", "lengths differ");
  double p3 = 0.0, pt2 = 0.0, ptt0 = 0.0, th2 = 0.0, tht0 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    p3 = std::max(p3, norm(a[i].p - b[i].p, NormKind::H3viaGradLap));
    pt2 = std::max(pt2, norm(a[i].pt - b[i].pt, NormKind::H2viaLap));
    ptt0 = std::max(ptt0, norm(a[i].ptt - b[i].ptt, NormKind::L2));
    th2 = std::max(th2, norm(a[i].theta - b[i].theta, NormKind::H2viaLap));
    tht0 = std::max(tht0, norm(a[i].theta_t - b[i].theta_t, NormKind::L2));
  }
  return p3 + pt2 + ptt0 + th2 + tht0;
}

}  // namespace thermolens
