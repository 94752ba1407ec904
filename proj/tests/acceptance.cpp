// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "thermolens/config.hpp"
#include "thermolens/energy.hpp"
#include "thermolens/errors.hpp"
#include "thermolens/verification.hpp"

using namespace thermolens;

namespace {

const std::string kSource = THERMOLENS_SOURCE_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string cfg_path(const std::string& name) { return kSource + "/configs/" + name + ".cfg"; }
SimConfig shipped(const std::string& name) { return load_config(cfg_path(name)).sim; }

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

SimulationResult run_checked(const SimConfig& c) {
  SimulationResult r = run_simulation(c);
  if (!r.ok()) std::rethrow_exception(r.exception);
  return r;
}

double heat_modal_error(SimConfig c) {
  c.output_every = std::max<long>(1, std::lround(c.t_end / c.dt));
  const SimulationResult r = run_checked(c);
  const Grid g = c.grid.make();
  const double kappa = -discrete_eigenvalue(g, 1);
  const double amp = modal_oracle_heat(kappa, c.medium, c.theta0.amplitude, r.trajectory.back().t);
  return relative_l2_error(r.trajectory.back().theta - Field(g, c.medium.Theta_a), amp * sine_mode(g, 1));
}

Outcome heat_modal() {
  const SimConfig c = shipped("heat-modal");
  const double e = heat_modal_error(c);
  std::vector<double> dts, errs;
  for (double f : {4.0, 2.0, 1.0}) {
    SimConfig l = c;
    l.dt = c.dt * f;
    dts.push_back(l.dt);
    errs.push_back(heat_modal_error(l));
  }
  const double order = loglog_slope(dts, errs);
  return {c.grid.nx == 255 && e < 1e-3 && std::abs(order - 2.0) <= 0.1,
          "n=" + std::to_string(c.grid.nx) + " error " + fmt("%.3e", e) + ", temporal order " +
              fmt("%.3f", order)};
}

double wave_modal_error(SimConfig c) {
  c.output_every = std::max<long>(1, std::lround(c.t_end / c.dt));
  const SimulationResult r = run_checked(c);
  const Grid g = c.grid.make();
  const double kappa = -discrete_eigenvalue(g, 1);
  const double c2 = q_of_theta(c.law, c.medium.Theta_a);
  const ModalWave w =
      modal_oracle_damped_wave(kappa, c2, c.medium.b, c.p0.amplitude, c.p1.amplitude, r.trajectory.back().t);
  return relative_l2_error(r.trajectory.back().p, w.p * sine_mode(g, 1));
}

Outcome wave_modal() {
  SimConfig under = shipped("wave-modal");
  SimConfig over = under;
  over.medium.b = 1.0;
  const double kappa = -discrete_eigenvalue(under.grid.make(), 1);
  const auto disc = [&](const SimConfig& c) { return std::pow(c.medium.b * kappa, 2) - 4.0 * kappa; };
  const double eu = wave_modal_error(under);
  const double eo = wave_modal_error(over);
  return {disc(under) < 0.0 && disc(over) > 0.0 && eu < 1e-3 && eo < 1e-3,
          "underdamped error " + fmt("%.3e", eu) + ", overdamped error " + fmt("%.3e", eo)};
}

Outcome energy_decay() {
  const Grid g = Grid::line(1.0, 255);
  const double b = 1.0, dt = 1e-3;
  const auto coeffs = FrozenCoefficients::constant(g, 1.0, 1.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Field p0 = sine_mode(g, 1), p1 = 0.5 * sine_mode(g, 3);
  for (int m = 2; m <= 12; ++m) {
    p0 = p0 + u(rng) / m * sine_mode(g, m);
    p1 = p1 + u(rng) / m * sine_mode(g, m);
  }
  AcousticState s{p0, p1, initial_ptt(p0, p1, coeffs, b), 0.0};
  double e = acoustic_energies(s, coeffs, b).total();
  double worst = -std::numeric_limits<double>::infinity();
  const int steps = 1000;
  for (int k = 0; k < steps; ++k) {
    s = pressure_step(s, coeffs, b, dt);
    const double next = acoustic_energies(s, coeffs, b).total();
    worst = std::max(worst, (next - e) / e);
    e = next;
  }
  return {worst <= 1e-12, std::to_string(steps) + " steps, largest relative increase " + fmt("%.3e", worst)};
}

Outcome gronwall() {
  const SimConfig c = shipped("lensing-demo");
  const SimulationResult r = run_checked(c);
  const GronwallResult g = gronwall_check(r.reports, c.gronwall_cap);
  const GronwallCertificate cert = gronwall_certificate(r.reports, g.fitted_C);
  return {std::isfinite(g.fitted_C) && g.passes && cert.holds,
          "C " + fmt("%.4g", g.fitted_C) + ", max E/bound " + fmt("%.6f", cert.max_ratio) + " over " +
              std::to_string(r.reports.size()) + " reports"};
}

SimConfig scaled(SimConfig c, double f) {
  c.p0.amplitude *= f;
  c.p1.amplitude *= f;
  return c;
}

Outcome contraction() {
  const SimConfig c = shipped("small-data-demo");
  const double smallness = 2.0 * k_bound(c.medium) * std::abs(c.p0.amplitude);
  const SimulationResult a = run_checked(c);
  const SimulationResult h = run_checked(scaled(c, 0.5));
  double worst_ratio = 0.0;
  for (const auto& res : a.diagnostics.picard_residuals) {
    for (std::size_t k = 1; k < res.size(); ++k) {
      const double ratio = res[k - 1] > 0.0 ? res[k] / res[k - 1] : 0.0;
      worst_ratio = std::max(worst_ratio, ratio);
    }
  }
  const auto& ia = a.diagnostics.picard_iterations;
  const auto& ih = h.diagnostics.picard_iterations;
  int increases = ia.size() == ih.size() ? 0 : 1;
  for (std::size_t i = 0; i < std::min(ia.size(), ih.size()); ++i) increases += ih[i] > ia[i];
  return {smallness <= 0.01 && worst_ratio < 1.0 && increases == 0,
          "2 k1 |p0| " + fmt("%.4f", smallness) + ", largest residual ratio " + fmt("%.3e", worst_ratio) +
              ", steps with more iterations at half amplitude " + std::to_string(increases)};
}

Outcome degeneracy() {
  const SimConfig c = shipped("degenerate");
  const double product = 2.0 * k_bound(c.medium) * c.p0.amplitude;
  const SimulationResult r = run_simulation(c);
  bool typed = false;
  try {
    if (r.exception) std::rethrow_exception(r.exception);
  } catch (const DegeneracyError&) {
    typed = true;
  } catch (...) {
  }
  const std::string path = cfg_path("degenerate");
  const std::string out_dir = (std::filesystem::temp_directory_path() / "thermolens_acceptance").string();
  const char* argv[] = {"thermolens", "--quiet", "--output-dir", out_dir.c_str(), "simulate",
                        path.c_str()};
  std::ostringstream out, err;
  const int code = cli_main(6, argv, out, err);
  return {typed && r.trajectory.empty() && code == 2,
          "2 k1 |p0| " + fmt("%.2f", product) + ", error " + (typed ? "degeneracy" : "other") +
              ", stored time levels " + std::to_string(r.trajectory.size()) + ", exit code " +
              std::to_string(code)};
}

Outcome absorption_properties() {
  const std::vector<AbsorptionModel> models{AbsorptionModel::instantaneous(1.0),
                                            AbsorptionModel::windowed(1.0, 0.1, 3, 0.1),
                                            AbsorptionModel::full(1.0, 0.5)};
  bool zero_ok = true, stable = true;
  double spread = 0.0;
  for (const auto& m : models) {
    const Grid g = Grid::line(1.0, 63);
    const std::vector<PtSample> zero{{0.0, Field(g)}, {0.5, Field(g)}, {1.0, Field(g)}};
    zero_ok = zero_ok && max_abs(absorbed_energy(m, zero)) == 0.0;
    const double coarse = sampled_lipschitz_constant(m, Grid::line(1.0, 63), 100, 41, 1.0, 11);
    const double fine = sampled_lipschitz_constant(m, Grid::line(1.0, 127), 100, 41, 1.0, 11);
    const double s = std::abs(fine - coarse) / coarse;
    spread = std::max(spread, s);
    stable = stable && std::isfinite(coarse) && coarse > 0.0 && s <= 0.2;
  }
  // Backward differences of the full average past its horizon.
  const Grid g = Grid::line(1.0, 63);
  const auto u = random_smooth_history(g, 41, 1.0, 12);
  const AbsorptionModel full = models[2];
  bool frozen = true;
  Field prev = absorbed_energy(full, std::vector<PtSample>(u.begin(), u.begin() + 21));
  for (std::size_t k = 21; k < u.size(); ++k) {
    const Field q = absorbed_energy(full, std::vector<PtSample>(u.begin(), u.begin() + k + 1));
    const Field dq = (1.0 / (u[k].t - u[k - 1].t)) * (q - prev);
    frozen = frozen && max_abs(dq) == 0.0;
    prev = q;
  }
  return {zero_ok && stable && frozen, std::string("Q(0) = 0 ") + (zero_ok ? "exactly" : "violated") +
                                           ", lipschitz spread n=63/127 " + fmt("%.2e", spread) +
                                           ", post-horizon dQ/dt " + (frozen ? "identically 0" : "nonzero")};
}

Outcome mms_coupled() {
  const ConfigDocument d = load_config(cfg_path("coupled-mms"));
  const ConvergenceStudy st = convergence_study(d.sim, d.mms->solution, d.mms->levels);
  std::string ns;
  for (const auto& l : st.levels) ns += (ns.empty() ? "" : "/") + std::to_string(l.n);
  return {st.spatial_order >= 1.9 && d.mms->solution.p_amp != 0.0 && d.sim.medium.beta_acou > 0.0,
          "n=" + ns + ", spatial order " + fmt("%.3f", st.spatial_order)};
}

Outcome dependence() {
  const SimConfig c = shipped("small-data-demo");
  const auto pts = continuous_dependence_probe(c, {0.0, 1e-3, 2e-3});
  const double ratio = pts[2].distance / pts[1].distance;
  return {pts[0].distance == 0.0 && ratio >= 1.6 && ratio <= 2.4,
          "delta=0 distance " + fmt("%.1e", pts[0].distance) + ", ratio " + fmt("%.5f", ratio)};
}

std::size_t argmax_abs(const Field& f) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < f.size(); ++i) {
    if (std::abs(f[i]) > std::abs(f[best])) best = i;
  }
  return best;
}

Outcome lensing() {
  const SimConfig c = shipped("lensing-demo");
  const SimulationResult coupled = run_checked(c);
  const SimulationResult frozen = run_checked(frozen_temperature_variant(c));
  long shift = 0;
  for (std::size_t k = 0; k < coupled.trajectory.size(); ++k) {
    const long a = static_cast<long>(argmax_abs(coupled.trajectory[k].p));
    const long b = static_cast<long>(argmax_abs(frozen.trajectory[k].p));
    shift = std::max(shift, std::abs(a - b));
  }
  const long final_shift = std::abs(static_cast<long>(argmax_abs(coupled.trajectory.back().p)) -
                                    static_cast<long>(argmax_abs(frozen.trajectory.back().p)));
  bool monotone = true;
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& tp : coupled.trajectory) {
    const double m = *std::max_element(tp.theta.values.begin(), tp.theta.values.end());
    monotone = monotone && m >= prev;
    prev = m;
  }
  return {shift >= 1 && monotone, "max |p| location shift " + std::to_string(shift) + " cells (final " +
                                      std::to_string(final_shift) + "), max theta " +
                                      (monotone ? "nondecreasing" : "decreases") + ", final " +
                                      fmt("%.4g", prev)};
}

struct Criterion {
  const char* name;
  double budget_s;  // 0: no runtime limit
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"modal heat oracle", 10.0, heat_modal},
      {"modal damped-wave oracle", 30.0, wave_modal},
      {"energy decay", 0.0, energy_decay},
      {"gronwall certificate", 0.0, gronwall},
      {"picard contraction", 0.0, contraction},
      {"non-degeneracy guard", 0.0, degeneracy},
      {"absorbed energy properties", 0.0, absorption_properties},
      {"coupled manufactured solution", 120.0, mms_coupled},
      {"continuous dependence", 0.0, dependence},
      {"thermal lensing", 120.0, lensing},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && (c.budget_s == 0.0 || secs <= c.budget_s);
    failed += !pass;
    std::string timing = fmt("%.2f s", secs);
    if (c.budget_s > 0.0) timing += fmt(" of %.0f s", c.budget_s);
    std::printf("%s %2zu %s: %s [%s]\n", pass ? "PASS" : "FAIL", i + 1, c.name, o.detail.c_str(),
                timing.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
