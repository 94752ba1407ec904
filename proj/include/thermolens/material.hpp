#pragma once

#include <string>
#include <vector>

namespace thermolens {

// Constant medium parameters. Units: SI, temperatures in degrees Celsius.
struct MediumParams {
  double rho = 1000.0;       // mass density, kg/m^3
  double beta_acou = 0.0;    // nonlinearity coefficient
  double b = 6e-9;           // sound diffusivity, m^2/s
  double rho_a = 1000.0;     // ambient (tissue) density
  double C_a = 4000.0;       // ambient heat capacity, J/(kg K)
  double kappa_a = 0.5;      // thermal conductivity, W/(m K)
  double rho_b = 1000.0;     // blood density
  double C_b = 4000.0;       // blood heat capacity
  double W = 0.0;            // perfusion rate, 1/s
  double Theta_a = 37.0;     // ambient temperature
  double c_a = 1500.0;       // ambient sound speed, m/s
  double omega = 1.0;        // angular excitation frequency, rad/s
  double q0 = 1.0;           // lower bound for q = c^2, m^2/s^2
  double gamma1 = 0.0;       // growth exponent of q''
  double gamma2 = 0.0;       // growth exponent of k''

  bool operator==(const MediumParams&) const = default;
};

// Throws ValidationError naming "medium.<key>" for the first violated bound.
void validate(const MediumParams& m);

// c(theta) = sum_i coefficients[i] theta^i, clamped so that c^2 >= floor_q0.
struct SoundSpeedLaw {
  std::vector<double> coefficients;
  double floor_q0 = 0.0;

  static SoundSpeedLaw constant(double c, double floor_q0 = 0.0);
  // Quintic fit for pure water, theta in degrees Celsius.
  static SoundSpeedLaw water(double floor_q0 = 0.0);

  bool operator==(const SoundSpeedLaw&) const = default;
};

// Horner evaluation without clamping.
double polynomial(const std::vector<double>& coeffs, double x);
std::vector<double> derivative(const std::vector<double>& coeffs);

double sound_speed(const SoundSpeedLaw& law, double theta);
double q_of_theta(const SoundSpeedLaw& law, double theta);
// True when the floor is active at theta.
bool is_clamped(const SoundSpeedLaw& law, double theta);
double k_of_theta(const MediumParams& m, const SoundSpeedLaw& law, double theta);
// Uniform bound |k| <= beta / (rho q0).
double k_bound(const MediumParams& m);

// b = alpha c_a^3 / omega^2.
double sound_diffusivity(double alpha_abs, double c_a, double omega);

struct AssumptionReport {
  double min_q = 0.0;          // sampled min of the clamped q
  double min_q_raw = 0.0;      // sampled min of the unclamped polynomial square
  std::size_t clamped_samples = 0;
  // Sampled maxima of finite-difference derivatives.
  double max_dq = 0.0, max_d2q = 0.0, max_dk = 0.0, max_d2k = 0.0;
  // Smallest C with |g(theta)| <= C (1 + |theta|^gamma) on the samples.
  double fit_dq = 0.0, fit_d2q = 0.0, fit_dk = 0.0, fit_d2k = 0.0;
  std::vector<std::string> violations;
};

AssumptionReport validate_assumptions(const MediumParams& m, const SoundSpeedLaw& law,
                                      double theta_lo, double theta_hi, int samples);

}  // namespace thermolens
