#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "thermolens/absorption.hpp"
#include "thermolens/coupled.hpp"

namespace thermolens {

// e(t) = offset + amp exp(-decay t) cos(omega t + phase)
struct Envelope {
  double offset = 1.0;
  double amp = 0.0;
  double omega = 0.0;
  double decay = 0.0;
  double phase = 0.0;

  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;
};

// p = p_amp * mode(p_mx, p_my) * P(t), theta = theta_amp * mode(...) * H(t).
// Sine modes vanish together with their laplacian on the boundary.
struct ManufacturedSolution {
  double p_amp = 0.0;
  int p_mx = 1, p_my = 1;
  Envelope p_env;
  double theta_amp = 0.0;
  int theta_mx = 1, theta_my = 1;
  Envelope theta_env;
  // Use stencil eigenvalues instead of the continuum ones. The discrete
  // solution then has no spatial error, which isolates the time stepping.
  bool discrete_laplacian = false;

  Field p(const Grid& g, double t) const;
  Field pt(const Grid& g, double t) const;
  Field ptt(const Grid& g, double t) const;
  Field theta(const Grid& g, double t) const;
  Field theta_t(const Grid& g, double t) const;
};

struct MmsForcing {
  Field f1, f2;
};

// Residuals of the coupled system at the exact solution; laplacians are
// evaluated analytically. Only the instantaneous absorption model is
// supported.
MmsForcing mms_forcing(const ManufacturedSolution& ms, const MediumParams& m,
                       const SoundSpeedLaw& law, const AbsorptionModel& absorption, const Grid& g,
                       double t);

// Hooks that make `ms` an exact solution of the run on grid g.
RunHooks mms_hooks(const ManufacturedSolution& ms, const SimConfig& cfg, const Grid& g);

struct ModalWave {
  double p = 0.0, pt = 0.0, ptt = 0.0;
};

// Mode amplitude of y'' + b kappa y' + c2 kappa y = 0, y(0) = p0, y'(0) = p1,
// kappa > 0 the magnitude of the laplacian eigenvalue.
ModalWave modal_oracle_damped_wave(double kappa, double c2, double b, double p0, double p1,
                                   double t);
// amp0 exp(-(kappa_a kappa + rho_b C_b W) t / (rho_a C_a))
double modal_oracle_heat(double kappa, const MediumParams& m, double amp0, double t);

// Projection of f onto sine_mode(mx, my).
double mode_amplitude(const Field& f, int mx, int my = 1);

struct ConvergenceLevel {
  int n = 0;
  double dt = 0.0;
  double h = 0.0;
  double error = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceLevel> levels;
  double spatial_order = std::numeric_limits<double>::quiet_NaN();
  double temporal_order = std::numeric_limits<double>::quiet_NaN();
};

// Runs the manufactured solution at each (n, dt) and fits log-log slopes on
// the finest three levels. Level error: relative L2 error of p plus that of
// theta at the final time (terms with a vanishing exact field are skipped).
// Levels are independent and run concurrently.
ConvergenceStudy convergence_study(const SimConfig& base, const ManufacturedSolution& ms,
                                   const std::vector<std::pair<int, double>>& levels);

double relative_l2_error(const Field& approx, const Field& exact);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct DependencePoint {
  double delta = 0.0;
  double distance = 0.0;
  double ratio = 0.0;
};

// Perturbs p0 by delta * lowest sine mode and measures the sup-in-time
// distance to the unperturbed run.
std::vector<DependencePoint> continuous_dependence_probe(const SimConfig& cfg,
                                                         const std::vector<double>& deltas);

// p_t histories built from a few smooth space-time modes with random
// coefficients in [-1, 1]; identical continuum fields on every grid.
std::vector<PtSample> random_smooth_history(const Grid& g, int samples, double t_end,
                                            std::uint64_t seed);

// Largest lipschitz_probe ratio over `trials` random pairs.
double sampled_lipschitz_constant(const AbsorptionModel& model, const Grid& g, int trials,
                                  int samples, double t_end, std::uint64_t seed);

}  // namespace thermolens
