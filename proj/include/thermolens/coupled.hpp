#pragma once

#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "thermolens/absorption.hpp"
#include "thermolens/energy.hpp"
#include "thermolens/grid.hpp"
#include "thermolens/linear_solvers.hpp"
#include "thermolens/material.hpp"

namespace thermolens {

struct GridSpec {
  int dims = 1;
  double lx = 1.0, ly = 1.0;
  int nx = 63, ny = 63;

  Grid make() const { return dims == 2 ? Grid::rect(lx, ly, nx, ny) : Grid::line(lx, nx); }
  bool operator==(const GridSpec&) const = default;
};

enum class InitialKind { Zero, Sine, Gaussian, GaussianSlope };

// Closed-form initial field. Gaussian: amplitude exp(-|x - center|^2 / width^2).
// GaussianSlope: x-derivative of that profile; as p1 = -c * slope of p0 it
// launches a single pulse travelling in +x.
struct InitialSpec {
  InitialKind kind = InitialKind::Zero;
  double amplitude = 0.0;
  int mx = 1, my = 1;
  double cx = 0.5, cy = 0.5;
  double width = 0.1;

  bool operator==(const InitialSpec&) const = default;
};

Field make_initial(const InitialSpec& spec, const Grid& g);

struct PicardOptions {
  double tol = 1e-10;
  int max_iter = 50;
  bool operator==(const PicardOptions&) const = default;
};

struct SimConfig {
  GridSpec grid;
  MediumParams medium;
  SoundSpeedLaw law;
  AbsorptionModel absorption;
  int history_decimation = 1;
  std::size_t history_capacity = 0;
  double dt = 1e-3;
  double t_end = 1e-2;
  PicardOptions picard;
  SolverOptions linear;
  double degeneracy_floor = 0.1;
  InitialSpec p0, p1, theta0;
  int output_every = 1;
  double gronwall_cap = 1e6;

  bool operator==(const SimConfig&) const = default;
};

// Throws ValidationError naming the offending key.
void validate(const SimConfig& cfg);

// Same configuration with c frozen at its ambient-temperature value.
SimConfig frozen_temperature_variant(const SimConfig& cfg);

// Optional extras for manufactured-solution runs.
struct RunHooks {
  std::function<Field(double)> f1;  // added to the pressure equation
  std::function<Field(double)> f2;  // added to the heat equation
  std::optional<Field> p0, p1, theta0;
};

struct Diagnostics {
  double min_alpha = 1.0;
  std::size_t clamp_events = 0;
  std::vector<int> picard_iterations;
  std::vector<std::vector<double>> picard_residuals;
};

struct CoupledState {
  AcousticState acoustic;
  ThermalState thermal;
  PtHistory history;
  Field q_current;  // absorbed energy at the current time level
  Diagnostics diagnostics;
};

struct PicardStep {
  CoupledState state;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> residuals;
};

// Builds the t = 0 state. Throws DegeneracyError when the initial data
// violate the floor.
CoupledState initial_state(const SimConfig& cfg, const RunHooks& hooks = {});

// Advances by cfg.dt: repeatedly freezes alpha = 1 - 2k(theta*)p*,
// r = q(theta*), f1 = 2k(theta*)(p*_t)^2 at the new level, solves the
// pressure then the heat equation, until the relative change is below tol.
PicardStep picard_step(const CoupledState& state, const SimConfig& cfg,
                       const RunHooks& hooks = {});

struct Nondegeneracy {
  double min_value = 1.0;
  std::size_t location = 0;
};

Nondegeneracy check_nondegeneracy(const Field& p, const Field& theta, const MediumParams& m,
                                  const SoundSpeedLaw& law);

// Coefficients of the linearized pressure equation at (p, theta).
FrozenCoefficients coefficients_at(const Field& p, const Field& pt, const Field& theta,
                                   const MediumParams& m, const SoundSpeedLaw& law,
                                   const Field* f1_extra = nullptr);

struct TrajectoryPoint {
  double t = 0.0;
  Field p, pt, ptt, theta, theta_t;
};

enum class RunError { None, Validation, Solver, Io };

struct SimulationResult {
  std::vector<TrajectoryPoint> trajectory;
  std::vector<EnergyReport> reports;
  Diagnostics diagnostics;
  RunError error = RunError::None;
  std::string error_message;
  std::exception_ptr exception;

  bool ok() const { return error == RunError::None; }
};

SimulationResult run_simulation(const SimConfig& cfg, const RunHooks& hooks = {});

struct BallDiagnostics {
  double gamma_observed = 0.0;
  double R1_style = 0.0;
  double R2_style = 0.0;
  double margin = 1.0;  // 1 - 2 k1 gamma_observed
};

BallDiagnostics ball_diagnostics(const std::vector<TrajectoryPoint>& trajectory,
                                 const MediumParams& m);

// Sup-in-time norm of the difference of two trajectories with matching
// times, built from the same pieces as the ball radii.
double trajectory_distance(const std::vector<TrajectoryPoint>& a,
                           const std::vector<TrajectoryPoint>& b);

}  // namespace thermolens
