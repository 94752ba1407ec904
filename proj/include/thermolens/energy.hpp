#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "thermolens/linear_solvers.hpp"

namespace thermolens {

struct AcousticEnergies {
  double E0 = 0.0, E1 = 0.0, E2 = 0.0, D_p = 0.0;
  double total() const { return E0 + E1 + E2; }
};

// Lower- and higher-order energies of the pressure and their dissipation
// rate, weighted by the frozen alpha and r.
AcousticEnergies acoustic_energies(const AcousticState& s, const FrozenCoefficients& c, double b);

// Initial energy assembled from the data (p0, p1) and the p_tt(0) formula.
double initial_acoustic_energy(const Field& p0, const Field& p1, const FrozenCoefficients& c,
                               double b);

struct HeatEnergies {
  double E_theta = 0.0;
  double D_theta = 0.0;  // without the H^-1 norm of theta_tt
};

HeatEnergies heat_energy(const ThermalState& s);

// One time level of the coefficients entering Lambda and F.
struct CoefficientLevel {
  double t = 0.0;
  Field alpha, r, f1;
};

struct LambdaF {
  double Lambda = 0.0;
  double Fterm = 0.0;
};

// Time derivatives by backward differences between `prev` and `cur`. The
// H^-1 norm of d/dt f1 is replaced by its L2 norm (an upper bound up to
// the Poincare constant).
LambdaF lambda_F(const CoefficientLevel& prev, const CoefficientLevel& cur);

struct EnergyReport {
  double t = 0.0;
  double E0 = 0.0, E1 = 0.0, E2 = 0.0;
  double D_p = 0.0;
  double E_theta = 0.0, D_theta = 0.0;
  double Lambda = 0.0, Fterm = 0.0;
  double min_alpha = 1.0;

  double E_total() const { return E0 + E1 + E2; }
  bool operator==(const EnergyReport&) const = default;
};

struct GronwallResult {
  bool passes = false;
  double fitted_C = 0.0;  // infinity when no C works
  double max_violation = 0.0;
  std::size_t worst_step = 0;
};

// Smallest C >= 0 with
//   (E_{n+1} - E_n)/dt_n + D_n <= C (1 + Lambda_n) E_n + C F_n
// for every step. `passes` is fitted_C <= cap; max_violation is the largest
// excess of the left side over the right side evaluated at C = cap.
GronwallResult gronwall_check(const std::vector<EnergyReport>& series, double cap,
                              bool include_dissipation = true);

struct GronwallCertificate {
  bool holds = true;
  double max_ratio = 0.0;  // max_n E_n / bound_n
  std::vector<double> bound;
};

// Checks E_n <= (E_0 + C sum dt F) exp(C sum dt (1 + Lambda)) with left
// Riemann sums, the discrete consequence of the per-step inequality.
GronwallCertificate gronwall_certificate(const std::vector<EnergyReport>& series, double C);

}  // namespace thermolens
