#pragma once

#include <utility>

#include "thermolens/grid.hpp"
#include "thermolens/material.hpp"

namespace thermolens {

struct SolverOptions {
  double rel_tol = 1e-10;
  int max_iter_factor = 10;  // max iterations = factor * unknowns

  bool operator==(const SolverOptions&) const = default;
};

struct CgResult {
  int iterations = 0;
  double residual = 0.0;  // relative
};

// Solves (diag(d) - laplacian) x = rhs by Jacobi-preconditioned CG, d >= 0.
// x holds the initial guess on entry. Throws NonConvergenceError.
CgResult solve_shifted_laplacian(const Field& d, const Field& rhs, Field& x,
                                 const SolverOptions& opts = {});

// Coefficients of alpha p_tt - r lap p - b lap p_t = f1, frozen over one step.
struct FrozenCoefficients {
  Field alpha;
  Field r;
  Field f1;
  std::pair<double, double> alpha_bounds{0.0, 0.0};
  std::pair<double, double> r_bounds{0.0, 0.0};

  // Bounds are the pointwise extrema. Throws DegeneracyError if alpha <= 0
  // anywhere and ValidationError if r <= 0 anywhere.
  static FrozenCoefficients make(Field alpha, Field r, Field f1);
  // alpha = 1, r = c2, f1 = 0.
  static FrozenCoefficients constant(const Grid& g, double alpha, double c2);
};

struct AcousticState {
  Field p, pt, ptt;
  double t = 0.0;
};

struct ThermalState {
  Field theta, theta_t;
  double t = 0.0;
};

// alpha^{-1} (r lap p0 + b lap p1 + f1).
Field initial_ptt(const Field& p0, const Field& p1, const FrozenCoefficients& coeffs, double b);

// One average-acceleration Newmark step (gamma = 1/2, beta = 1/4); the
// equation is enforced at the new time level with `coeffs`.
AcousticState pressure_step(const AcousticState& s, const FrozenCoefficients& coeffs, double b,
                            double dt, const SolverOptions& opts = {},
                            CgResult* stats = nullptr);

// Heat sources at the old and new time level of a step.
struct HeatForcing {
  Field q_old, q_new;
  Field f2_old, f2_new;
};

// Crank-Nicolson step of rho_a C_a theta_t - kappa_a lap theta
// + rho_b C_b W (theta - Theta_a) = Q + f2.
ThermalState heat_step(const ThermalState& s, const MediumParams& m, const HeatForcing& forcing,
                       double dt, const SolverOptions& opts = {});
// Sources held constant over the step.
ThermalState heat_step(const ThermalState& s, const MediumParams& m, const Field& q,
                       const Field& f2, double dt, const SolverOptions& opts = {});

// theta_t from the heat equation at one time level.
Field heat_rate(const Field& theta, const MediumParams& m, const Field& q, const Field& f2);

// Largest dt for which the Crank-Nicolson update keeps nonnegative data
// nonnegative (explicit half has a nonnegative diagonal).
double heat_positivity_dt_cap(const Grid& g, const MediumParams& m);

}  // namespace thermolens
