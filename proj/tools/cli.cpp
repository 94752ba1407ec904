#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "thermolens/config.hpp"
#include "thermolens/errors.hpp"
#include "thermolens/io.hpp"
#include "thermolens/kernels.hpp"
#include "thermolens/snapshot.hpp"

namespace thermolens {

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kValidation = 1, kSolver = 2, kIo = 3 };

struct Common {
  std::string output_dir = ".";
  bool quiet = false;
  int threads = 0;
};

std::string fmt(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

int exit_code(RunError e) {
  switch (e) {
    case RunError::None: return kOk;
    case RunError::Validation: return kValidation;
    case RunError::Solver: return kSolver;
    case RunError::Io: return kIo;
  }
  return kSolver;
}

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir, "cannot create output directory: " + ec.message());
  return fs::path(dir);
}

void write_meta(const fs::path& dir, const nlohmann::json& meta) {
  write_text(dir / "run_meta.json", meta.dump(2) + "\n");
}

nlohmann::json base_meta(const std::string& command, const std::string& config) {
  const auto now = std::chrono::system_clock::now();
  return {{"command", command},
          {"config", config},
          {"threads", kernels::max_threads()},
          {"started_unix", std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count()}};
}

double max_picard(const Diagnostics& d) {
  return d.picard_iterations.empty()
             ? 0.0
             : *std::max_element(d.picard_iterations.begin(), d.picard_iterations.end());
}

int run_simulate(const std::string& path, const Common& o, std::ostream& out, std::ostream& err) {
  const ConfigDocument doc = load_config(path);
  const SimConfig& cfg = doc.sim;
  const fs::path dir = prepare_dir(o.output_dir);
  const auto t0 = std::chrono::steady_clock::now();
  const SimulationResult res = run_simulation(cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  // Partial output is still written when the run stops early.
  write_timeseries(res.reports, dir / "series.csv");
  write_text(dir / "config.resolved.cfg", render_config(cfg));
  const fs::path snaps = prepare_dir((dir / "snapshots").string());
  for (std::size_t i = 0; i < res.trajectory.size(); ++i) {
    // Named by time step.
    char name[32];
    std::snprintf(name, sizeof name, "%06ld", std::lround(res.trajectory[i].t / cfg.dt));
    write_snapshot(res.trajectory[i].p, snaps / ("p_" + std::string(name) + ".tlns"));
    write_snapshot(res.trajectory[i].theta, snaps / ("theta_" + std::string(name) + ".tlns"));
  }

  const GronwallResult gr = gronwall_check(res.reports, cfg.gronwall_cap);
  nlohmann::json meta = base_meta("simulate", path);
  meta["status"] = res.ok() ? "ok" : res.error_message;
  meta["exit_code"] = exit_code(res.error);
  meta["wall_seconds"] = wall;
  meta["reports"] = res.reports.size();
  meta["snapshot_times"] = nlohmann::json::array();
  for (const auto& p : res.trajectory) meta["snapshot_times"].push_back(p.t);
  meta["steps"] = res.diagnostics.picard_iterations.size();
  meta["picard_max_iterations"] = max_picard(res.diagnostics);
  meta["min_alpha"] = res.diagnostics.min_alpha;
  meta["clamp_events"] = res.diagnostics.clamp_events;
  meta["gronwall"] = {{"fitted_C", std::isfinite(gr.fitted_C) ? nlohmann::json(gr.fitted_C) : nlohmann::json("inf")},
                      {"passes", gr.passes}};
  write_meta(dir, meta);

  if (!res.ok()) {
    err << "simulate: " << res.error_message << "\n";
    return exit_code(res.error);
  }
  if (!o.quiet) {
    const auto& last = res.reports.back();
    out << "steps " << res.diagnostics.picard_iterations.size() << ", reports " << res.reports.size()
        << ", t_end " << fmt(last.t) << "\n";
    out << "E_total " << fmt(res.reports.front().E_total()) << " -> " << fmt(last.E_total())
        << ", E_theta " << fmt(res.reports.front().E_theta) << " -> " << fmt(last.E_theta) << "\n";
    out << "min_alpha " << fmt(res.diagnostics.min_alpha) << ", max picard iterations "
        << max_picard(res.diagnostics) << ", gronwall C " << fmt(gr.fitted_C) << "\n";
    out << "outputs in " << dir.string() << "\n";
  }
  return kOk;
}

const MmsSettings& require_mms(const ConfigDocument& doc) {
  if (!doc.mms) throw ValidationError("mms", "section [mms] is required for this command");
  return *doc.mms;
}

int run_verify_mms(const std::string& path, const Common& o, std::ostream& out) {
  const ConfigDocument doc = load_config(path);
  const ManufacturedSolution& ms = require_mms(doc).solution;
  SimConfig cfg = doc.sim;
  cfg.output_every = std::max<long>(1, std::lround(cfg.t_end / cfg.dt));
  const Grid g = cfg.grid.make();
  const SimulationResult res = run_simulation(cfg, mms_hooks(ms, cfg, g));
  if (!res.ok()) std::rethrow_exception(res.exception);
  const TrajectoryPoint& last = res.trajectory.back();
  const double ep = relative_l2_error(last.p, ms.p(g, last.t));
  const double et = relative_l2_error(last.theta, ms.theta(g, last.t));
  if (!o.quiet) {
    out << "t " << fmt(last.t) << ": relative L2 error p " << fmt(ep) << ", theta " << fmt(et) << "\n";
  }
  return kOk;
}

bool single_mode(const InitialSpec& s, int& mx, int& my) {
  if (s.kind == InitialKind::Zero) return true;
  if (s.kind != InitialKind::Sine) return false;
  if (mx == 0) {
    mx = s.mx;
    my = s.my;
  }
  return s.mx == mx && s.my == my;
}

int run_verify_modal(const std::string& path, const Common& o, std::ostream& out) {
  const ConfigDocument doc = load_config(path);
  SimConfig cfg = doc.sim;
  int mx = 0, my = 0;
  if (!single_mode(cfg.p0, mx, my) || !single_mode(cfg.p1, mx, my)) {
    throw ValidationError("initial.p0", "modal check needs p0 and p1 in one sine mode");
  }
  int tx = 0, ty = 0;
  if (!single_mode(cfg.theta0, tx, ty)) {
    throw ValidationError("initial.theta0", "modal check needs a single sine mode");
  }
  const bool wave = mx != 0;
  const bool heat = tx != 0;
  if (wave && (cfg.medium.beta_acou != 0.0 || cfg.law.coefficients.size() != 1)) {
    throw ValidationError("medium.beta_acou",
                          "modal wave check needs beta_acou = 0 and a constant sound speed");
  }
  if (wave && heat && cfg.absorption.scale != 0.0) {
    throw ValidationError("absorption.scale", "modal heat check with a pressure field needs scale = 0");
  }
  cfg.output_every = std::max<long>(1, std::lround(cfg.t_end / cfg.dt));
  const SimulationResult res = run_simulation(cfg);
  if (!res.ok()) std::rethrow_exception(res.exception);
  const Grid g = cfg.grid.make();
  const TrajectoryPoint& last = res.trajectory.back();
  if (wave) {
    const double kappa = -discrete_eigenvalue(g, mx, my);
    const double a0 = cfg.p0.kind == InitialKind::Sine ? cfg.p0.amplitude : 0.0;
    const double a1 = cfg.p1.kind == InitialKind::Sine ? cfg.p1.amplitude : 0.0;
    const double c2 = q_of_theta(cfg.law, cfg.medium.Theta_a);
    const ModalWave w = modal_oracle_damped_wave(kappa, c2, cfg.medium.b, a0, a1, last.t);
    const double e = relative_l2_error(last.p, w.p * sine_mode(g, mx, my));
    const double disc = std::pow(cfg.medium.b * kappa, 2) - 4.0 * c2 * kappa;
    if (!o.quiet) {
      out << "wave mode (" << mx << "," << my << ") " << (disc > 0 ? "overdamped" : "underdamped")
          << ": relative L2 error " << fmt(e) << "\n";
    }
  }
  if (heat) {
    const double kappa = -discrete_eigenvalue(g, tx, ty);
    const double amp = modal_oracle_heat(kappa, cfg.medium, cfg.theta0.amplitude, last.t);
    const Field ambient(g, cfg.medium.Theta_a);
    const double e = relative_l2_error(last.theta - ambient, amp * sine_mode(g, tx, ty));
    if (!o.quiet) out << "heat mode (" << tx << "," << ty << "): relative L2 error " << fmt(e) << "\n";
  }
  if (!wave && !heat && !o.quiet) out << "zero data: nothing to compare\n";
  return kOk;
}

int run_verify_convergence(const std::string& path, const Common& o, std::ostream& out) {
  const ConfigDocument doc = load_config(path);
  const MmsSettings& mms = require_mms(doc);
  if (mms.levels.size() < 3) throw ValidationError("mms.levels", "need at least three n:dt levels");
  const ConvergenceStudy st = convergence_study(doc.sim, mms.solution, mms.levels);
  const fs::path dir = prepare_dir(o.output_dir);
  write_text(dir / "study.csv", render_study(st));
  if (!o.quiet) {
    for (const auto& l : st.levels) {
      out << "n " << l.n << "  dt " << fmt(l.dt) << "  error " << fmt(l.error) << "\n";
    }
    out << "spatial order " << fmt(st.spatial_order, 4) << "\n";
    out << "temporal order " << fmt(st.temporal_order, 4) << "\n";
  }
  return kOk;
}

int run_probe_lipschitz(const std::string& path, int trials, const Common& o, std::ostream& out) {
  const ConfigDocument doc = load_config(path);
  const SimConfig& cfg = doc.sim;
  const Grid coarse = cfg.grid.make();
  GridSpec fine_spec = cfg.grid;
  fine_spec.nx = 2 * cfg.grid.nx + 1;
  fine_spec.ny = 2 * cfg.grid.ny + 1;
  const Grid fine = fine_spec.make();
  const int samples = 41;
  const double horizon = cfg.t_end > 0.0 ? cfg.t_end : 1.0;
  const double lc = sampled_lipschitz_constant(cfg.absorption, coarse, trials, samples, horizon, 1);
  const double lf = sampled_lipschitz_constant(cfg.absorption, fine, trials, samples, horizon, 1);
  const std::vector<PtSample> zero{{0.0, Field(coarse)}, {horizon, Field(coarse)}};
  const double q0 = max_abs(absorbed_energy(cfg.absorption, zero));
  if (!o.quiet) {
    out << "Q(0) max " << fmt(q0) << "\n";
    out << "lipschitz ratio n=" << coarse.n[0] << ": " << fmt(lc) << ", n=" << fine.n[0] << ": "
        << fmt(lf) << ", relative spread " << fmt(std::abs(lf - lc) / std::max(lc, 1e-300), 3) << "\n";
  }
  return kOk;
}

int run_probe_dependence(const std::string& path, double delta, const Common& o, std::ostream& out) {
  if (!(delta > 0.0)) throw ValidationError("delta", "must be > 0");
  const ConfigDocument doc = load_config(path);
  const auto pts = continuous_dependence_probe(doc.sim, {0.0, delta, 2.0 * delta});
  if (!o.quiet) {
    for (const auto& p : pts) {
      out << "delta " << fmt(p.delta) << "  distance " << fmt(p.distance, 9) << "\n";
    }
    out << "distance(2 delta) / distance(delta) " << fmt(pts[2].distance / pts[1].distance, 6) << "\n";
  }
  return kOk;
}

int run_report(const std::string& path, double cap, std::ostream& out) {
  const std::vector<EnergyReport> series = read_timeseries(path);
  if (series.empty()) {
    out << "empty series\n";
    return kOk;
  }
  double e_max = 0.0, a_min = series.front().min_alpha;
  for (const auto& r : series) {
    e_max = std::max(e_max, r.E_total());
    a_min = std::min(a_min, r.min_alpha);
  }
  out << "reports " << series.size() << ", t " << fmt(series.front().t) << " .. "
      << fmt(series.back().t) << "\n";
  out << "E_total first " << fmt(series.front().E_total()) << ", last "
      << fmt(series.back().E_total()) << ", max " << fmt(e_max) << "\n";
  out << "E_theta first " << fmt(series.front().E_theta) << ", last "
      << fmt(series.back().E_theta) << "\n";
  out << "min_alpha " << fmt(a_min) << " (the pressure equation degenerates at 0)\n";
  if (series.size() >= 2) {
    const GronwallResult gr = gronwall_check(series, cap);
    out << "gronwall fitted C " << fmt(gr.fitted_C) << (gr.passes ? " (within cap)" : " (exceeds cap)")
        << ", worst step " << gr.worst_step << "\n";
    if (std::isfinite(gr.fitted_C)) {
      const GronwallCertificate cert = gronwall_certificate(series, gr.fitted_C);
      out << "integrated bound " << (cert.holds ? "holds" : "violated") << ", max E/bound "
          << fmt(cert.max_ratio) << "\n";
    }
  }
  return kOk;
}

int run_sweep(const std::string& path, const std::string& key, const std::vector<std::string>& values,
              const Common& o, std::ostream& out) {
  const std::string text = read_text(path);
  std::vector<SimConfig> cfgs;
  for (const auto& v : values) cfgs.push_back(apply_override(text, key, v).sim);

  std::vector<SimulationResult> runs(cfgs.size());
  const auto count = static_cast<std::ptrdiff_t>(cfgs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) runs[i] = run_simulation(cfgs[i]);

  std::string csv = key + ",status,t_final,E_total_final,E_theta_final,min_alpha,max_picard\n";
  int worst = kOk;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i];
    const std::string status = r.ok() ? "ok" : (r.error == RunError::Solver ? "solver_error" : "error");
    const EnergyReport last = r.reports.empty() ? EnergyReport{} : r.reports.back();
    csv += values[i] + ',' + status + ',' + fmt(last.t, 17) + ',' + fmt(last.E_total(), 17) + ',' +
           fmt(last.E_theta, 17) + ',' + fmt(r.diagnostics.min_alpha, 17) + ',' +
           fmt(max_picard(r.diagnostics)) + '\n';
    worst = std::max(worst, exit_code(r.error));
    if (!o.quiet) {
      out << key << " = " << values[i] << ": " << status << ", min_alpha "
          << fmt(r.diagnostics.min_alpha) << ", E_total " << fmt(last.E_total()) << "\n";
    }
  }
  write_text(prepare_dir(o.output_dir) / "sweep.csv", csv);
  return worst;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coupled Westervelt-Pennes solver for thermal lensing studies"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--output-dir", common.output_dir, "Directory for output files")->capture_default_str();
  app.add_flag("--quiet", common.quiet, "Suppress the summary on standard output");
  app.add_option("--threads", common.threads, "OpenMP threads for the kernels (0 = runtime default)")
      ->check(CLI::NonNegativeNumber);
  app.fallthrough();

  std::string config;
  auto* simulate = app.add_subcommand("simulate", "Run a configuration and write series and snapshots");
  simulate->add_option("config", config, "Configuration file")->required();

  auto* verify = app.add_subcommand("verify", "Verification against exact solutions");
  verify->require_subcommand(1);
  auto* v_mms = verify->add_subcommand("mms", "Single manufactured-solution run");
  auto* v_modal = verify->add_subcommand("modal", "Single-mode run against the modal oracles");
  auto* v_conv = verify->add_subcommand("convergence", "Manufactured-solution convergence study");
  for (auto* s : {v_mms, v_modal, v_conv}) s->add_option("config", config, "Configuration file")->required();

  auto* probe = app.add_subcommand("probe", "Numerical probes of the analysis assumptions");
  probe->require_subcommand(1);
  int trials = 100;
  double delta = 1e-3;
  auto* p_lip = probe->add_subcommand("lipschitz", "Sampled Lipschitz ratio of the absorbed energy");
  p_lip->add_option("config", config, "Configuration file")->required();
  p_lip->add_option("--trials", trials, "Random pairs per grid")->check(CLI::PositiveNumber);
  auto* p_dep = probe->add_subcommand("dependence", "Continuous dependence on the initial pressure");
  p_dep->add_option("config", config, "Configuration file")->required();
  p_dep->add_option("--delta", delta, "Perturbation size")->capture_default_str();

  std::string series;
  double cap = 1e6;
  auto* report = app.add_subcommand("report", "Summarize an energy series CSV");
  report->add_option("series", series, "series.csv written by simulate")->required();
  report->add_option("--cap", cap, "Largest admissible Gronwall constant")->capture_default_str();

  std::string key;
  std::vector<std::string> values;
  auto* sweep = app.add_subcommand("sweep", "Run one configuration for several values of a key");
  sweep->add_option("config", config, "Configuration file")->required();
  sweep->add_option("--key", key, "section.key to vary")->required();
  sweep->add_option("--values", values, "Values to try")->required()->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (common.threads > 0) kernels::set_threads(common.threads);
    if (*simulate) return run_simulate(config, common, out, err);
    if (*v_mms) return run_verify_mms(config, common, out);
    if (*v_modal) return run_verify_modal(config, common, out);
    if (*v_conv) return run_verify_convergence(config, common, out);
    if (*p_lip) return run_probe_lipschitz(config, trials, common, out);
    if (*p_dep) return run_probe_dependence(config, delta, common, out);
    if (*report) return run_report(series, cap, out);
    if (*sweep) return run_sweep(config, key, values, common, out);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kValidation;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return kSolver;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIo;
  }
  return kValidation;
}

}  // namespace thermolens
