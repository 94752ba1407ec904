#include "thermolens/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "thermolens/errors.hpp"

namespace thermolens {

double Envelope::value(double t) const {
  return offset + amp * std::exp(-decay * t) * std::cos(omega * t + phase);
}

double Envelope::d1(double t) const {
  const double e = amp * std::exp(-decay * t);
  const double ph = omega * t + phase;
  return e * (-decay * std::cos(ph) - omega * std::sin(ph));
}

double Envelope::d2(double t) const {
  const double e = amp * std::exp(-decay * t);
  const double ph = omega * t + phase;
  return e * ((decay * decay - omega * omega) * std::cos(ph) + 2.0 * decay * omega * std::sin(ph));
}

namespace {

double eigen(const ManufacturedSolution& ms, const Grid& g, int mx, int my) {
  return ms.discrete_laplacian ? discrete_eigenvalue(g, mx, my) : continuum_eigenvalue(g, mx, my);
}

}  // namespace

Field ManufacturedSolution::p(const Grid& g, double t) const {
  return (p_amp * p_env.value(t)) * sine_mode(g, p_mx, p_my);
}
Field ManufacturedSolution::pt(const Grid& g, double t) const {
  return (p_amp * p_env.d1(t)) * sine_mode(g, p_mx, p_my);
}
Field ManufacturedSolution::ptt(const Grid& g, double t) const {
  return (p_amp * p_env.d2(t)) * sine_mode(g, p_mx, p_my);
}
Field ManufacturedSolution::theta(const Grid& g, double t) const {
  return (theta_amp * theta_env.value(t)) * sine_mode(g, theta_mx, theta_my);
}
Field ManufacturedSolution::theta_t(const Grid& g, double t) const {
  return (theta_amp * theta_env.d1(t)) * sine_mode(g, theta_mx, theta_my);
}

MmsForcing mms_forcing(const ManufacturedSolution& ms, const MediumParams& m,
                       const SoundSpeedLaw& law, const AbsorptionModel& absorption, const Grid& g,
                       double t) {
  if (absorption.kind != AbsorptionKind::Instantaneous) {
    throw ValidationError("absorption.model", "manufactured solutions need the instantaneous model");
  }
  const Field p = ms.p(g, t);
  const Field pt = ms.pt(g, t);
  const Field ptt = ms.ptt(g, t);
  const Field th = ms.theta(g, t);
  const Field tht = ms.theta_t(g, t);
  const double lam_p = eigen(ms, g, ms.p_mx, ms.p_my);
  const double lam_t = eigen(ms, g, ms.theta_mx, ms.theta_my);
  const double perf = m.rho_b * m.C_b * m.W;

  MmsForcing out{Field(g), Field(g)};
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double k = k_of_theta(m, law, th[i]);
    const double q = q_of_theta(law, th[i]);
    const double alpha = 1.0 - 2.0 * k * p[i];
    out.f1[i] = alpha * ptt[i] - q * lam_p * p[i] - m.b * lam_p * pt[i] - 2.0 * k * pt[i] * pt[i];
    const double absorbed = absorption.scale * pt[i] * pt[i];
    out.f2[i] = m.rho_a * m.C_a * tht[i] - m.kappa_a * lam_t * th[i] + perf * (th[i] - m.Theta_a) -
                absorbed;
  }
  return out;
}

RunHooks mms_hooks(const ManufacturedSolution& ms, const SimConfig& cfg, const Grid& g) {
  RunHooks h;
  const MediumParams m = cfg.medium;
  const SoundSpeedLaw law = cfg.law;
  const AbsorptionModel abs = cfg.absorption;
  h.f1 = [=](double t) { return mms_forcing(ms, m, law, abs, g, t).f1; };
  h.f2 = [=](double t) { return mms_forcing(ms, m, law, abs, g, t).f2; };
  h.p0 = ms.p(g, 0.0);
  h.p1 = ms.pt(g, 0.0);
  h.theta0 = ms.theta(g, 0.0);
  return h;
}

ModalWave modal_oracle_damped_wave(double kappa, double c2, double b, double p0, double p1,
                                   double t) {
  if (!(kappa > 0.0)) throw ValidationError("kappa", "must be > 0");
  const double damp = b * kappa;
  const double stiff = c2 * kappa;
  const double disc = damp * damp - 4.0 * stiff;
  ModalWave w;
  const double repeated_tol = 1e-12 * std::max(damp * damp, 4.0 * stiff);
  if (disc > repeated_tol) {
    const double sq = std::sqrt(disc);
    // Root pair without cancellation.
    const double l1 = -0.5 * (damp + sq);
    const double l2 = stiff / l1;
    const double A = (p1 - l2 * p0) / (l1 - l2);
    const double B = p0 - A;
    const double e1 = std::exp(l1 * t);
    const double e2 = std::exp(l2 * t);
    w.p = A * e1 + B * e2;
    w.pt = A * l1 * e1 + B * l2 * e2;
    w.ptt = A * l1 * l1 * e1 + B * l2 * l2 * e2;
  } else if (disc < -repeated_tol) {
    const double mu = -0.5 * damp;
    const double nu = 0.5 * std::sqrt(-disc);
    const double e = std::exp(mu * t);
    const double c = std::cos(nu * t);
    const double s = std::sin(nu * t);
    const double B = (p1 - mu * p0) / nu;
    w.p = e * (p0 * c + B * s);
    w.pt = mu * w.p + e * (-p0 * nu * s + B * nu * c);
    w.ptt = -damp * w.pt - stiff * w.p;
  } else {
    const double lam = -0.5 * damp;
    const double e = std::exp(lam * t);
    const double B = p1 - lam * p0;
    w.p = (p0 + B * t) * e;
    w.pt = B * e + lam * w.p;
    w.ptt = -damp * w.pt - stiff * w.p;
  }
  return w;
}

double modal_oracle_heat(double kappa, const MediumParams& m, double amp0, double t) {
  if (!(kappa > 0.0)) throw ValidationError("kappa", "must be > 0");
  const double rate = (m.kappa_a * kappa + m.rho_b * m.C_b * m.W) / (m.rho_a * m.C_a);
  return amp0 * std::exp(-rate * t);
}

double mode_amplitude(const Field& f, int mx, int my) {
  const Field phi = sine_mode(f.grid, mx, my);
  return inner(f, phi) / inner(phi, phi);
}

double relative_l2_error(const Field& approx, const Field& exact) {
  const double e = norm(approx - exact, NormKind::L2);
  const double base = norm(exact, NormKind::L2);
  return base > 0.0 ? e / base : e;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw ValidationError("levels", "need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / denom;
}

ConvergenceStudy convergence_study(const SimConfig& base, const ManufacturedSolution& ms,
                                   const std::vector<std::pair<int, double>>& levels) {
  if (levels.size() < 3) throw ValidationError("levels", "need at least three levels");
  ConvergenceStudy study;
  study.levels.resize(levels.size());
  std::vector<SimulationResult> runs(levels.size());
  std::vector<Grid> grids(levels.size());

  const auto count = static_cast<std::ptrdiff_t>(levels.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    SimConfig cfg = base;
    cfg.grid.nx = levels[i].first;
    if (cfg.grid.dims == 2) cfg.grid.ny = levels[i].first;
    cfg.dt = levels[i].second;
    cfg.output_every = std::max<long>(1, std::lround(cfg.t_end / cfg.dt));
    grids[i] = cfg.grid.make();
    runs[i] = run_simulation(cfg, mms_hooks(ms, cfg, grids[i]));
  }

  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!runs[i].ok()) std::rethrow_exception(runs[i].exception);
    const Grid& g = grids[i];
    const TrajectoryPoint& last = runs[i].trajectory.back();
    double err = 0.0;
    const Field pe = ms.p(g, last.t);
    const Field te = ms.theta(g, last.t);
    if (norm(pe, NormKind::L2) > 0.0) err += relative_l2_error(last.p, pe);
    if (norm(te, NormKind::L2) > 0.0) err += relative_l2_error(last.theta, te);
    study.levels[i] = ConvergenceLevel{levels[i].first, levels[i].second, g.h[0], err};
  }

  // Finest three levels.
  const std::size_t first = levels.size() - 3;
  std::vector<double> hs, dts, errs;
  for (std::size_t i = first; i < levels.size(); ++i) {
    hs.push_back(study.levels[i].h);
    dts.push_back(study.levels[i].dt);
    errs.push_back(study.levels[i].error);
  }
  const bool n_varies = hs.front() != hs.back();
  const bool dt_varies = dts.front() != dts.back();
  if (n_varies) study.spatial_order = loglog_slope(hs, errs);
  if (dt_varies) study.temporal_order = loglog_slope(dts, errs);
  return study;
}

std::vector<DependencePoint> continuous_dependence_probe(const SimConfig& cfg,
                                                         const std::vector<double>& deltas) {
  const Grid g = cfg.grid.make();
  const SimulationResult base = run_simulation(cfg);
  if (!base.ok()) std::rethrow_exception(base.exception);
  const Field p0 = make_initial(cfg.p0, g);
  const Field mode = sine_mode(g, 1, 1);

  std::vector<DependencePoint> out(deltas.size());
  const auto count = static_cast<std::ptrdiff_t>(deltas.size());
  std::vector<SimulationResult> runs(deltas.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    RunHooks hooks;
    hooks.p0 = p0 + deltas[i] * mode;
    runs[i] = run_simulation(cfg, hooks);
  }
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!runs[i].ok()) std::rethrow_exception(runs[i].exception);
    out[i].delta = deltas[i];
    out[i].distance = trajectory_distance(base.trajectory, runs[i].trajectory);
    out[i].ratio = deltas[i] != 0.0 ? out[i].distance / deltas[i] : 0.0;
  }
  return out;
}

namespace {

constexpr int kSpaceModes = 3;
constexpr int kTimeModes = 3;

}  // namespace

std::vector<PtSample> random_smooth_history(const Grid& g, int samples, double t_end,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  double a[kSpaceModes][kSpaceModes][kTimeModes];
  for (auto& plane : a)
    for (auto& row : plane)
      for (double& v : row) v = coef(rng);

  std::vector<Field> modes;
  for (int mx = 1; mx <= kSpaceModes; ++mx) {
    for (int my = 1; my <= (g.dims == 2 ? kSpaceModes : 1); ++my) modes.push_back(sine_mode(g, mx, my));
  }

  std::vector<PtSample> out;
  for (int k = 0; k < samples; ++k) {
    const double t = samples > 1 ? t_end * k / (samples - 1) : 0.0;
    Field f(g);
    std::size_t idx = 0;
    for (int mx = 0; mx < kSpaceModes; ++mx) {
      for (int my = 0; my < (g.dims == 2 ? kSpaceModes : 1); ++my, ++idx) {
        double c = 0.0;
        for (int j = 0; j < kTimeModes; ++j) {
          c += a[mx][my][j] * std::cos(j * std::numbers::pi * t / t_end);
        }
        f = f + c * modes[idx];
      }
    }
    out.push_back({t, std::move(f)});
  }
  return out;
}

double sampled_lipschitz_constant(const AbsorptionModel& model, const Grid& g, int trials,
                                  int samples, double t_end, std::uint64_t seed) {
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const auto u = random_smooth_history(g, samples, t_end, seed + 2 * static_cast<std::uint64_t>(i));
    const auto v = random_smooth_history(g, samples, t_end, seed + 2 * static_cast<std::uint64_t>(i) + 1);
    worst = std::max(worst, lipschitz_probe(model, u, v).ratio);
  }
  return worst;
}

}  // namespace thermolens
