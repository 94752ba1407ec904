#include "thermolens/linear_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "thermolens/errors.hpp"
#include "thermolens/kernels.hpp"

namespace thermolens {

CgResult solve_shifted_laplacian(const Field& d, const Field& rhs, Field& x,
                                 const SolverOptions& opts) {
  const Grid& g = rhs.grid;
  const std::size_t n = rhs.size();
  if (x.size() != n) x = Field(g);

  double lap_diag = 2.0 / (g.h[0] * g.h[0]);
  if (g.dims == 2) lap_diag += 2.0 / (g.h[1] * g.h[1]);

  std::vector<double> inv_m(n);
  for (std::size_t i = 0; i < n; ++i) inv_m[i] = 1.0 / (d[i] + lap_diag);

  auto apply = [&](std::span<const double> u, std::span<double> out) {
    kernels::laplacian(g, u, out);
    for (std::size_t i = 0; i < n; ++i) out[i] = d[i] * u[i] - out[i];
  };

  CgResult res;
  const double bnorm = std::sqrt(kernels::dot(rhs.span(), rhs.span()));
  if (bnorm == 0.0) {
    std::fill(x.values.begin(), x.values.end(), 0.0);
    return res;
  }

  std::vector<double> r(n), z(n), p(n), ap(n);
  apply(x.span(), ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ap[i];
  double rnorm = std::sqrt(kernels::dot(r, r));
  res.residual = rnorm / bnorm;
  if (res.residual < opts.rel_tol) return res;

  for (std::size_t i = 0; i < n; ++i) z[i] = inv_m[i] * r[i];
  p = z;
  double rz = kernels::dot(r, z);
  const int max_iter = opts.max_iter_factor * static_cast<int>(n);
  for (int it = 1; it <= max_iter; ++it) {
    apply(p, ap);
    const double pap = kernels::dot(p, ap);
    if (!(pap > 0.0)) {
      throw NonConvergenceError("conjugate gradient breakdown", it, res.residual);
    }
    const double a = rz / pap;
    kernels::axpby(a, p, 1.0, x.span());
    kernels::axpby(-a, ap, 1.0, r);
    rnorm = std::sqrt(kernels::dot(r, r));
    res.iterations = it;
    res.residual = rnorm / bnorm;
    if (res.residual < opts.rel_tol) return res;
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_m[i] * r[i];
    const double rz_new = kernels::dot(r, z);
    kernels::axpby(1.0, z, rz_new / rz, p);
    rz = rz_new;
  }
  throw NonConvergenceError("conjugate gradient did not converge", max_iter, res.residual);
}

FrozenCoefficients FrozenCoefficients::make(Field alpha, Field r, Field f1) {
  FrozenCoefficients c;
  const auto [amin, amax] = std::minmax_element(alpha.values.begin(), alpha.values.end());
  const auto [rmin, rmax] = std::minmax_element(r.values.begin(), r.values.end());
  if (!(*amin > 0.0)) {
    throw DegeneracyError(*amin, static_cast<std::size_t>(amin - alpha.values.begin()));
  }
  if (!(*rmin > 0.0)) throw ValidationError("coefficients.r", "must be > 0 pointwise");
  c.alpha_bounds = {*amin, *amax};
  c.r_bounds = {*rmin, *rmax};
  c.alpha = std::move(alpha);
  c.r = std::move(r);
  c.f1 = std::move(f1);
  return c;
}

FrozenCoefficients FrozenCoefficients::constant(const Grid& g, double alpha, double c2) {
  return make(Field(g, alpha), Field(g, c2), Field(g, 0.0));
}

Field initial_ptt(const Field& p0, const Field& p1, const FrozenCoefficients& coeffs, double b) {
  const Field lp0 = laplacian(p0);
  const Field lp1 = laplacian(p1);
  Field out(p0.grid);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(coeffs.alpha[i] > 0.0)) throw DegeneracyError(coeffs.alpha[i], i);
    out[i] = (coeffs.r[i] * lp0[i] + b * lp1[i] + coeffs.f1[i]) / coeffs.alpha[i];
  }
  return out;
}

AcousticState pressure_step(const AcousticState& s, const FrozenCoefficients& coeffs, double b,
                            double dt, const SolverOptions& opts, CgResult* stats) {
  if (!(dt > 0.0)) throw ValidationError("dt", "must be > 0");
  constexpr double beta = 0.25;
  constexpr double gamma = 0.5;
  const Grid& g = s.p.grid;
  const std::size_t n = s.p.size();

  Field p_pred(g), v_pred(g);
  for (std::size_t i = 0; i < n; ++i) {
    p_pred[i] = s.p[i] + dt * s.pt[i] + 0.5 * dt * dt * (1.0 - 2.0 * beta) * s.ptt[i];
    v_pred[i] = s.pt[i] + dt * (1.0 - gamma) * s.ptt[i];
  }
  const Field lp = laplacian(p_pred);
  const Field lv = laplacian(v_pred);

  // (alpha - s lap) a = rhs with s = beta dt^2 r + gamma dt b > 0; dividing
  // by s gives the symmetric positive definite form (alpha/s - lap) a = rhs/s.
  Field d(g), rhs(g);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(coeffs.alpha[i] > 0.0)) throw DegeneracyError(coeffs.alpha[i], i);
    const double si = beta * dt * dt * coeffs.r[i] + gamma * dt * b;
    d[i] = coeffs.alpha[i] / si;
    rhs[i] = (coeffs.f1[i] + coeffs.r[i] * lp[i] + b * lv[i]) / si;
  }
  Field a = s.ptt;
  const CgResult cg = solve_shifted_laplacian(d, rhs, a, opts);
  if (stats) *stats = cg;

  AcousticState out;
  out.t = s.t + dt;
  out.p = Field(g);
  out.pt = Field(g);
  for (std::size_t i = 0; i < n; ++i) {
    out.p[i] = p_pred[i] + beta * dt * dt * a[i];
    out.pt[i] = v_pred[i] + gamma * dt * a[i];
  }
  out.ptt = std::move(a);
  return out;
}

Field heat_rate(const Field& theta, const MediumParams& m, const Field& q, const Field& f2) {
  const Field lt = laplacian(theta);
  const double perf = m.rho_b * m.C_b * m.W;
  const double cap = m.rho_a * m.C_a;
  Field out(theta.grid);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (m.kappa_a * lt[i] - perf * (theta[i] - m.Theta_a) + q[i] + f2[i]) / cap;
  }
  return out;
}

ThermalState heat_step(const ThermalState& s, const MediumParams& m, const HeatForcing& f,
                       double dt, const SolverOptions& opts) {
  if (!(dt > 0.0)) throw ValidationError("dt", "must be > 0");
  const Grid& g = s.theta.grid;
  const std::size_t n = s.theta.size();
  const double perf = m.rho_b * m.C_b * m.W;
  const double cap = m.rho_a * m.C_a;
  const double half_k = 0.5 * m.kappa_a;

  const Field lt = laplacian(s.theta);
  Field d(g, (cap / dt + 0.5 * perf) / half_k);
  Field rhs(g);
  for (std::size_t i = 0; i < n; ++i) {
    const double explicit_part = (cap / dt - 0.5 * perf) * s.theta[i] + half_k * lt[i] +
                                 perf * m.Theta_a +
                                 0.5 * (f.q_old[i] + f.q_new[i] + f.f2_old[i] + f.f2_new[i]);
    rhs[i] = explicit_part / half_k;
  }
  Field theta = s.theta;
  solve_shifted_laplacian(d, rhs, theta, opts);

  ThermalState out;
  out.t = s.t + dt;
  out.theta_t = heat_rate(theta, m, f.q_new, f.f2_new);
  out.theta = std::move(theta);
  return out;
}

ThermalState heat_step(const ThermalState& s, const MediumParams& m, const Field& q,
                       const Field& f2, double dt, const SolverOptions& opts) {
  return heat_step(s, m, HeatForcing{q, q, f2, f2}, dt, opts);
}

double heat_positivity_dt_cap(const Grid& g, const MediumParams& m) {
  double inv_h2 = 1.0 / (g.h[0] * g.h[0]);
  if (g.dims == 2) inv_h2 += 1.0 / (g.h[1] * g.h[1]);
  const double denom = m.kappa_a * inv_h2 + 0.5 * m.rho_b * m.C_b * m.W;
  return denom > 0.0 ? m.rho_a * m.C_a / denom : std::numeric_limits<double>::infinity();
}

}  // namespace thermolens
