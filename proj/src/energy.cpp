#include "thermolens/energy.hpp"

#include <algorithm>
#include <cmath>

#include "thermolens/errors.hpp"

namespace thermolens {

namespace {

double sq(double v) { return v * v; }

}  // namespace

AcousticEnergies acoustic_energies(const AcousticState& s, const FrozenCoefficients& c, double b) {
  if (b < 0.0) throw ValidationError("b", "must be >= 0");
  const Field lp = laplacian(s.p);
  const Field lpt = laplacian(s.pt);
  const double grad_lap_p = norm(lp, NormKind::H1semi);

  AcousticEnergies e;
  e.E0 = 0.5 * (sq(weighted_l2(s.pt, c.alpha)) + sq(weighted_gradient_l2(s.p, c.r)));
  e.E1 = 0.5 * (sq(weighted_l2(s.ptt, c.alpha)) + sq(weighted_gradient_l2(s.pt, c.r)) +
                sq(weighted_l2(lp, c.r)));
  e.E2 = 0.5 * b * sq(grad_lap_p);
  e.D_p = b * sq(norm(s.ptt, NormKind::H1semi)) + b * sq(norm(lpt, NormKind::L2)) +
          sq(weighted_gradient_l2(lp, c.r)) + b * sq(norm(s.pt, NormKind::H1semi));
  return e;
}

double initial_acoustic_energy(const Field& p0, const Field& p1, const FrozenCoefficients& c,
                               double b) {
  const Field ptt0 = initial_ptt(p0, p1, c, b);
  const Field lp0 = laplacian(p0);
  return 0.5 * (sq(weighted_l2(p1, c.alpha)) + sq(weighted_gradient_l2(p0, c.r)) +
                sq(weighted_gradient_l2(p1, c.r)) + sq(weighted_l2(ptt0, c.alpha)) +
                b * sq(norm(lp0, NormKind::H1semi)) + sq(weighted_l2(lp0, c.r)));
}

HeatEnergies heat_energy(const ThermalState& s) {
  HeatEnergies h;
  h.E_theta = 0.5 * (sq(norm(s.theta, NormKind::L2)) + sq(norm(s.theta, NormKind::H1semi)) +
                     sq(norm(s.theta, NormKind::H2viaLap)) + sq(norm(s.theta_t, NormKind::L2)));
  h.D_theta = sq(norm(s.theta_t, NormKind::L2)) + sq(norm(s.theta_t, NormKind::H1semi));
  return h;
}

LambdaF lambda_F(const CoefficientLevel& prev, const CoefficientLevel& cur) {
  const double dt = cur.t - prev.t;
  if (!(dt > 0.0)) throw ValidationError("lambda_F", "previous coefficient level missing");
  const Grid& g = cur.alpha.grid;
  const Field r_t = (1.0 / dt) * (cur.r - prev.r);
  const Field a_t = (1.0 / dt) * (cur.alpha - prev.alpha);
  const Field f_t = (1.0 / dt) * (cur.f1 - prev.f1);
  const double grad_r_l4 = edge_norm(gradient(cur.r, Ghost::Interior), g, 4.0);
  const double grad_a_l3 = edge_norm(gradient(cur.alpha, Ghost::Interior), g, 3.0);

  LambdaF out;
  out.Lambda = sq(norm(r_t, NormKind::L2)) + grad_r_l4 + norm(a_t, NormKind::L2) +
               sq(norm(a_t, NormKind::L3)) + sq(grad_a_l3);
  out.Fterm = sq(norm(cur.f1, NormKind::L2)) + sq(norm(cur.f1, NormKind::H1semi)) +
              (1.0 + sq(grad_a_l3)) * sq(norm(f_t, NormKind::L2));
  return out;
}

GronwallResult gronwall_check(const std::vector<EnergyReport>& series, double cap,
                              bool include_dissipation) {
  GronwallResult res;
  double worst_ratio = 0.0;
  for (std::size_t n = 0; n + 1 < series.size(); ++n) {
    const auto& a = series[n];
    const auto& z = series[n + 1];
    const double dt = z.t - a.t;
    if (!(dt > 0.0)) continue;
    const double lhs = (z.E_total() - a.E_total()) / dt + (include_dissipation ? a.D_p : 0.0);
    const double rhs = (1.0 + a.Lambda) * a.E_total() + a.Fterm;
    res.max_violation = std::max(res.max_violation, lhs - cap * rhs);
    if (lhs <= 0.0) continue;
    const double ratio = rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity();
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      res.worst_step = n;
    }
  }
  res.fitted_C = worst_ratio;
  res.passes = res.fitted_C <= cap;
  return res;
}

GronwallCertificate gronwall_certificate(const std::vector<EnergyReport>& series, double C) {
  GronwallCertificate cert;
  if (series.empty()) return cert;
  cert.bound.resize(series.size());
  double int_f = 0.0;
  double int_l = 0.0;
  const double e0 = series.front().E_total();
  for (std::size_t n = 0; n < series.size(); ++n) {
    if (n > 0) {
      const auto& a = series[n - 1];
      const double dt = series[n].t - a.t;
      int_f += dt * a.Fterm;
      int_l += dt * (1.0 + a.Lambda);
    }
    const double bound = (e0 + C * int_f) * std::exp(C * int_l);
    cert.bound[n] = bound;
    const double e = series[n].E_total();
    // Relative slack for roundoff in the energies themselves.
    if (e > bound * (1.0 + 1e-12) + 1e-300) cert.holds = false;
    if (bound > 0.0) cert.max_ratio = std::max(cert.max_ratio, e / bound);
  }
  return cert;
}

}  // namespace thermolens
