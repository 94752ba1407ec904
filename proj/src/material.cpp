#include "thermolens/material.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "thermolens/errors.hpp"

namespace thermolens {

void validate(const MediumParams& m) {
  auto positive = [](const char* key, double v) {
    if (!(v > 0.0)) throw ValidationError(std::string("medium.") + key, "must be > 0");
  };
  auto nonnegative = [](const char* key, double v) {
    if (!(v >= 0.0)) throw ValidationError(std::string("medium.") + key, "must be >= 0");
  };
  positive("rho", m.rho);
  nonnegative("beta_acou", m.beta_acou);
  positive("b", m.b);
  positive("rho_a", m.rho_a);
  positive("C_a", m.C_a);
  positive("kappa_a", m.kappa_a);
  positive("rho_b", m.rho_b);
  positive("C_b", m.C_b);
  nonnegative("W", m.W);
  if (!std::isfinite(m.Theta_a)) throw ValidationError("medium.Theta_a", "must be finite");
  positive("c_a", m.c_a);
  positive("omega", m.omega);
  positive("q0", m.q0);
  nonnegative("gamma1", m.gamma1);
  nonnegative("gamma2", m.gamma2);
}

SoundSpeedLaw SoundSpeedLaw::constant(double c, double floor_q0) {
  return SoundSpeedLaw{{c}, floor_q0};
}

SoundSpeedLaw SoundSpeedLaw::water(double floor_q0) {
  return SoundSpeedLaw{{1402.39, 5.0371, -5.8085e-2, 3.3420e-4, -1.4780e-6, 3.1464e-9}, floor_q0};
}

double polynomial(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<double> derivative(const std::vector<double>& coeffs) {
  if (coeffs.size() <= 1) return {0.0};
  std::vector<double> d(coeffs.size() - 1);
  for (std::size_t i = 1; i < coeffs.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs[i];
  return d;
}

double sound_speed(const SoundSpeedLaw& law, double theta) {
  return std::max(polynomial(law.coefficients, theta), std::sqrt(law.floor_q0));
}

double q_of_theta(const SoundSpeedLaw& law, double theta) {
  if (is_clamped(law, theta)) return law.floor_q0;
  const double c = polynomial(law.coefficients, theta);
  return c * c;
}

bool is_clamped(const SoundSpeedLaw& law, double theta) {
  const double c = polynomial(law.coefficients, theta);
  return c < 0.0 || c * c < law.floor_q0;
}

double k_of_theta(const MediumParams& m, const SoundSpeedLaw& law, double theta) {
  return m.beta_acou / (m.rho * q_of_theta(law, theta));
}

double k_bound(const MediumParams& m) { return m.beta_acou / (m.rho * m.q0); }

double sound_diffusivity(double alpha_abs, double c_a, double omega) {
  if (!(omega > 0.0)) throw ValidationError("omega", "must be > 0");
  if (!(c_a > 0.0)) throw ValidationError("c_a", "must be > 0");
  if (!(alpha_abs >= 0.0)) throw ValidationError("alpha_abs", "must be >= 0");
  return alpha_abs * c_a * c_a * c_a / (omega * omega);
}

AssumptionReport validate_assumptions(const MediumParams& m, const SoundSpeedLaw& law,
                                      double theta_lo, double theta_hi, int samples) {
  if (samples < 2) throw ValidationError("samples", "need at least 2");
  if (!(theta_hi >= theta_lo)) throw ValidationError("theta_range", "empty range");

  AssumptionReport rep;
  rep.min_q = std::numeric_limits<double>::infinity();
  rep.min_q_raw = std::numeric_limits<double>::infinity();

  // Step for the finite differences: small against the sampling interval,
  // large enough to stay well above roundoff in q ~ 1e6.
  const double span = std::max(theta_hi - theta_lo, 1.0);
  const double d = 1e-4 * span;
  auto q = [&](double t) { return q_of_theta(law, t); };
  auto k = [&](double t) { return k_of_theta(m, law, t); };
  auto envelope = [](double t, double g) { return 1.0 + std::pow(std::abs(t), g); };

  for (int i = 0; i < samples; ++i) {
    const double t = theta_lo + (theta_hi - theta_lo) * i / (samples - 1);
    const double c_raw = polynomial(law.coefficients, t);
    rep.min_q_raw = std::min(rep.min_q_raw, c_raw * c_raw);
    rep.min_q = std::min(rep.min_q, q(t));
    if (is_clamped(law, t)) ++rep.clamped_samples;

    const double dq = std::abs(q(t + d) - q(t - d)) / (2 * d);
    const double d2q = std::abs(q(t + d) - 2 * q(t) + q(t - d)) / (d * d);
    const double dk = std::abs(k(t + d) - k(t - d)) / (2 * d);
    const double d2k = std::abs(k(t + d) - 2 * k(t) + k(t - d)) / (d * d);
    rep.max_dq = std::max(rep.max_dq, dq);
    rep.max_d2q = std::max(rep.max_d2q, d2q);
    rep.max_dk = std::max(rep.max_dk, dk);
    rep.max_d2k = std::max(rep.max_d2k, d2k);
    rep.fit_dq = std::max(rep.fit_dq, dq / envelope(t, m.gamma1 + 1));
    rep.fit_d2q = std::max(rep.fit_d2q, d2q / envelope(t, m.gamma1));
    rep.fit_dk = std::max(rep.fit_dk, dk / envelope(t, m.gamma2 + 1));
    rep.fit_d2k = std::max(rep.fit_d2k, d2k / envelope(t, m.gamma2));
  }
  if (rep.min_q_raw < m.q0) {
    rep.violations.push_back("sampled c^2 = " + std::to_string(rep.min_q_raw) +
                             " below q0 = " + std::to_string(m.q0));
  }
  if (rep.min_q < m.q0) {
    rep.violations.push_back("clamped q below q0: floor_q0 is smaller than q0");
  }
  return rep;
}

}  // namespace thermolens
