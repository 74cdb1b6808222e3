#include "drivers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "bogoliubov.hpp"
#include "io.hpp"
#include "spectral.hpp"
#include "states.hpp"
#include "version.hpp"

namespace mgpe {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::shared_ptr<const std::vector<double>> load_potential(const std::string& path,
                                                          const Grid1D& grid) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open potential file '" + path + "'");
  std::vector<double> v;
  v.reserve(grid.n());
  double x;
  while (in >> x) v.push_back(x);
  if (v.size() != grid.n()) {
    fail(ErrorKind::Config, "potential file '" + path + "' has " +
                                std::to_string(v.size()) + " samples, grid expects " +
                                std::to_string(grid.n()));
  }
  return std::make_shared<const std::vector<double>>(std::move(v));
}

std::vector<SolitonSpec> soliton_specs(const RunConfig& cfg) {
  const auto& xs = cfg.soliton_positions;
  const auto& bs = cfg.soliton_speeds;
  if (xs.empty() || xs.size() > 2) {
    fail(ErrorKind::Config, "solitons need 1 or 2 entries in 'positions'");
  }
  if (bs.size() != xs.size()) {
    fail(ErrorKind::Config, "'positions' and 'speeds' must have the same length");
  }
  std::vector<SolitonSpec> specs;
  for (std::size_t i = 0; i < xs.size(); ++i) specs.push_back({xs[i], bs[i]});
  return specs;
}

std::string kind_name(DynamicsKind k) {
  switch (k) {
    case DynamicsKind::Conservative: return "conservative";
    case DynamicsKind::Pitaevskii: return "pitaevskii";
    case DynamicsKind::Metriplectic: return "metriplectic";
  }
  return "?";
}

Json config_echo(const RunConfig& cfg) {
  Json echo = Json::object();
  for (const auto& [key, value] : cfg.entries) echo[key] = value;
  return echo;
}

Json base_metadata(const RunConfig& cfg, const std::string& driver) {
  Json meta;
  meta["driver"] = driver;
  meta["version"] = kVersionString;
  meta["config_file"] = cfg.source_path;
  meta["config"] = config_echo(cfg);
  meta["defaults_applied"] = cfg.defaults_applied;
  meta["warnings"] = cfg.warnings;
  return meta;
}

void write_metadata(const fs::path& out_dir, Json meta,
                    std::chrono::steady_clock::time_point started) {
  const auto elapsed = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - started)
                           .count();
  meta["wall_time_seconds"] = elapsed;
  write_text_file((out_dir / "metadata.json").string(), meta.dump(2) + "\n");
}

fs::path prepare_out_dir(const RunConfig& cfg) {
  if (cfg.out_dir.empty()) fail(ErrorKind::Config, "output.directory is required");
  fs::path out(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) fail(ErrorKind::Io, "cannot create output directory '" + cfg.out_dir + "'");
  return out;
}

struct SimulationOptions {
  std::string driver;
  bool require_stages = false;
  bool require_thermal = false;
  bool track_solitons = false;
  bool thermalization_report = false;
};

void run_simulation(const std::string& config_path, const SimulationOptions& opts) {
  const auto started = std::chrono::steady_clock::now();
  RunConfig cfg = parse_config(config_path);
  if (opts.require_stages && !cfg.stages) {
    fail(ErrorKind::Config, opts.driver + " needs a [physics] stages schedule");
  }
  if (opts.require_thermal && cfg.initial != RunConfig::InitialKind::Thermal) {
    fail(ErrorKind::Config, opts.driver + " needs initial.kind = thermal");
  }
  if (opts.track_solitons && cfg.initial != RunConfig::InitialKind::Solitons) {
    fail(ErrorKind::Config, opts.driver + " needs initial.kind = solitons");
  }
  if (!cfg.stages && !(cfg.t_end > 0.0)) {
    fail(ErrorKind::Config, "integration.t_end must be positive (or give stages)");
  }

  const Grid1D grid = cfg.make_grid();
  ModelParams params = params_from_config(cfg, grid);
  ComplexField psi = initial_from_config(cfg, grid, params);

  Json meta = base_metadata(cfg, opts.driver);
  meta["dynamics"] = kind_name(cfg.dynamics);
  meta["renormalize"] = cfg.renormalize;

  if (cfg.mu_auto) {
    ModelParams probe = params;
    probe.mu = 0.0;
    params.mu = observables(psi, probe, 0.0).mu_mean;
    meta["mu_resolved"] = params.mu;
  }
  if (cfg.initial == RunConfig::InitialKind::Solitons) {
    const auto specs = soliton_specs(cfg);
    meta["soliton_periodicity_defect"] =
        soliton_periodicity_defect(grid, params, specs);
  }
  if (cfg.initial == RunConfig::InitialKind::Thermal) {
    meta["thermal_cutoff"] = cfg.cutoff;
    meta["thermal_condensate_fraction"] = cfg.condensate_fraction;
    meta["thermal_seed"] = cfg.seed;
  }

  const fs::path out = prepare_out_dir(cfg);
  const LambdaSchedule schedule = cfg.schedule(params.lambda);
  meta["planned_steps"] = planned_steps(schedule, cfg.dt);
  meta["dt"] = cfg.dt;

  std::unique_ptr<ObservableCsvWriter> csv;
  if (cfg.write_csv) {
    csv = std::make_unique<ObservableCsvWriter>((out / "observables.csv").string());
  }
  fs::path snap_dir = out / "snapshots";
  if (cfg.write_snapshots && cfg.snapshot_stride > 0) {
    std::error_code ec;
    fs::create_directories(snap_dir, ec);
    if (ec) fail(ErrorKind::Io, "cannot create snapshot directory");
  }

  std::vector<Observables> records;
  HeatmapData heat;
  std::vector<std::vector<TrackedMinimum>> track;
  std::vector<double> track_times;
  std::size_t snap_count = 0;
  const std::size_t n_solitons = cfg.soliton_positions.size();

  EvolveSinks sinks;
  sinks.observable = [&](const Observables& rec) {
    records.push_back(rec);
    if (csv) csv->write(rec);
  };
  sinks.snapshot = [&](double t, double lambda, const ComplexField& f) {
    if (cfg.write_snapshots) {
      char name[32];
      std::snprintf(name, sizeof(name), "snap_%06zu.gpf", snap_count);
      write_snapshot((snap_dir / name).string(), f, t, lambda);
    }
    ++snap_count;
    const std::vector<double> rho = density(f);
    if (cfg.heatmap) {
      heat.times.push_back(t);
      heat.rows.push_back(rho);
    }
    if (opts.track_solitons) {
      std::vector<double> prev;
      if (!track.empty()) {
        for (const auto& m : track.back()) prev.push_back(m.x);
      }
      track.push_back(track_minima(f.grid, rho, n_solitons, prev));
      track_times.push_back(t);
    }
  };
  sinks.warn = [&](const std::string& msg) {
    std::cerr << "[" << opts.driver << "] warning: " << msg << "\n";
  };

  EvolutionConfig ecfg;
  ecfg.dt = cfg.dt;
  ecfg.observable_stride = cfg.observable_stride;
  ecfg.snapshot_stride = cfg.snapshot_stride;
  ecfg.renormalize = cfg.renormalize;

  ComplexField final_state = evolve(psi, params, cfg.dynamics, schedule, ecfg, sinks);

  if (csv) csv->close();
  write_snapshot((out / "final.gpf").string(), final_state,
                 schedule.total_duration(),
                 schedule.stages.back().lambda);

  if (cfg.heatmap) {
    if (heat.rows.size() >= 2) {
      emit_heatmap(heat, (out / "heatmap.csv").string(), (out / "heatmap.pgm").string(),
                   (out / "heatmap_meta.json").string());
    } else {
      meta["heatmap_skipped"] = "fewer than two snapshots retained";
    }
  }

  if (opts.track_solitons && !track.empty()) {
    std::string text = "t";
    for (std::size_t s = 0; s < n_solitons; ++s) {
      text += ",x_" + std::to_string(s) + ",rho_min_" + std::to_string(s);
    }
    text += "\n";
    for (std::size_t r = 0; r < track.size(); ++r) {
      text += format_double(track_times[r]);
      for (const auto& m : track[r]) {
        text += "," + format_double(m.x) + "," + format_double(m.rho);
      }
      text += "\n";
    }
    write_text_file((out / "soliton_track.csv").string(), text);
  }

  if (opts.thermalization_report && cfg.stages) {
    const double stage1_end = cfg.stages->stages.front().duration;
    std::vector<Observables> stage1;
    for (const auto& rec : records) {
      if (rec.t <= stage1_end * (1.0 + 1e-12)) stage1.push_back(rec);
    }
    if (stage1.size() >= 100) {
      const auto report = thermalization_check(stage1);
      meta["thermalization"] = {{"mean", report.mean},
                                {"variance", report.variance},
                                {"stationary", report.stationary}};
      std::printf("thermalization: mean = %.6g, variance = %.6g, stationary = %s\n",
                  report.mean, report.variance, report.stationary ? "yes" : "no");
    } else {
      meta["thermalization"] = "skipped: fewer than 100 records in the first stage";
    }
  }

  if (!records.empty()) {
    const Observables& last = records.back();
    meta["final"] = {{"t", last.t},
                     {"norm", last.norm},
                     {"free_energy", last.free_energy},
                     {"mu_mean", last.mu_mean},
                     {"mu_var", last.mu_var},
                     {"dissipation_rate", last.dissipation_rate},
                     {"ground_mode_occ", last.ground_mode_occ}};
  }
  meta["observable_records"] = records.size();
  meta["snapshots"] = snap_count;
  write_metadata(out, std::move(meta), started);
}

}  // namespace

ModelParams params_from_config(const RunConfig& cfg, const Grid1D& grid) {
  ModelParams p;
  p.coupling = cfg.coupling;
  p.mu = cfg.mu_auto ? 0.0 : cfg.mu;
  p.lambda = cfg.lambda.value_or(0.0);
  if (!cfg.potential_path.empty()) {
    p.potential = load_potential(cfg.potential_path, grid);
  }
  p.validate(grid);
  return p;
}

ComplexField initial_from_config(const RunConfig& cfg, const Grid1D& grid,
                                 const ModelParams& p) {
  switch (cfg.initial) {
    case RunConfig::InitialKind::Uniform:
      return uniform_state(grid);
    case RunConfig::InitialKind::PlaneWave:
      return plane_wave(grid, cfg.plane_wave_mode);
    case RunConfig::InitialKind::Solitons: {
      const auto specs = soliton_specs(cfg);
      if (specs.size() == 1) return gray_soliton(grid, p, specs[0]);
      return two_soliton_state(grid, p, specs[0], specs[1]);
    }
    case RunConfig::InitialKind::Thermal: {
      ThermalSpec spec;
      spec.temperature = cfg.temperature;
      spec.mode_cutoff = cfg.cutoff;
      spec.seed = cfg.seed;
      spec.condensate_fraction = cfg.condensate_fraction;
      return thermal_sample(grid, p, spec);
    }
    case RunConfig::InitialKind::Noise:
      return noise_state(grid, cfg.seed);
    case RunConfig::InitialKind::File: {
      Snapshot snap = read_snapshot(cfg.initial_path);
      if (!(snap.field.grid == grid)) {
        fail(ErrorKind::Config, "initial snapshot grid does not match [grid]");
      }
      return std::move(snap.field);
    }
  }
  fail(ErrorKind::Config, "unhandled initial kind");
}

std::vector<TrackedMinimum> track_minima(const Grid1D& g, const std::vector<double>& rho,
                                         std::size_t count,
                                         const std::vector<double>& previous_x) {
  const std::size_t n = rho.size();
  if (count == 0 || count > 4 || n != g.n()) {
    fail(ErrorKind::Argument, "track_minima: bad arguments");
  }
  std::vector<bool> masked(n, false);
  const std::size_t halfwidth = std::max<std::size_t>(4, n / 32);
  std::vector<TrackedMinimum> found;

  for (std::size_t c = 0; c < count; ++c) {
    std::size_t best = n;
    double best_rho = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (masked[j]) continue;
      if (best == n || rho[j] < best_rho) {
        best = j;
        best_rho = rho[j];
      }
    }
    if (best == n) break;
    const std::size_t jm = (best + n - 1) % n;
    const std::size_t jp = (best + 1) % n;
    const double ym = rho[jm], y0 = rho[best], yp = rho[jp];
    const double denom = ym - 2.0 * y0 + yp;
    double shift = 0.0;
    double value = y0;
    if (denom > 0.0) {
      shift = std::clamp(0.5 * (ym - yp) / denom, -0.5, 0.5);
      value = y0 - 0.25 * (ym - yp) * shift;
    }
    double x = g.x(best) + shift * g.spacing();
    if (x < 0.0) x += g.length();
    if (x >= g.length()) x -= g.length();
    found.push_back({x, value});
    for (std::size_t d = 0; d <= halfwidth; ++d) {
      masked[(best + d) % n] = true;
      masked[(best + n - d) % n] = true;
    }
  }

  // Keep the trace identities stable: match each previous position to the
  // nearest new minimum (periodic distance).
  if (previous_x.size() == found.size() && !previous_x.empty()) {
    std::vector<TrackedMinimum> ordered(found.size());
    std::vector<bool> used(found.size(), false);
    for (std::size_t i = 0; i < previous_x.size(); ++i) {
      std::size_t pick = 0;
      double best_d = -1.0;
      for (std::size_t j = 0; j < found.size(); ++j) {
        if (used[j]) continue;
        double d = std::abs(found[j].x - previous_x[i]);
        d = std::min(d, g.length() - d);
        if (best_d < 0.0 || d < best_d) {
          best_d = d;
          pick = j;
        }
      }
      used[pick] = true;
      ordered[i] = found[pick];
    }
    return ordered;
  }
  std::sort(found.begin(), found.end(),
            [](const TrackedMinimum& a, const TrackedMinimum& b) { return a.x < b.x; });
  return found;
}

void run_evolve(const std::string& config_path) {
  SimulationOptions opts;
  opts.driver = "evolve";
  run_simulation(config_path, opts);
}

void run_quench(const std::string& config_path) {
  SimulationOptions opts;
  opts.driver = "quench";
  opts.require_stages = true;
  opts.require_thermal = true;
  opts.thermalization_report = true;
  run_simulation(config_path, opts);
}

void run_solitons(const std::string& config_path) {
  SimulationOptions opts;
  opts.driver = "solitons";
  opts.track_solitons = true;
  run_simulation(config_path, opts);
}

void run_groundstate(const std::string& config_path) {
  const auto started = std::chrono::steady_clock::now();
  RunConfig cfg = parse_config(config_path);
  const Grid1D grid = cfg.make_grid();
  const ModelParams params = params_from_config(cfg, grid);
  const ComplexField start = initial_from_config(cfg, grid, params);
  const fs::path out = prepare_out_dir(cfg);

  GroundStateResult result = ground_state_ite(start, params, cfg.gs_tol, cfg.gs_max_iters);

  write_snapshot((out / "groundstate.gpf").string(), result.psi, 0.0, 0.0);
  Json meta = base_metadata(cfg, "groundstate");
  meta["mu_estimate"] = result.mu;
  meta["residual"] = result.residual;
  meta["iterations"] = result.iterations;
  meta["tol"] = cfg.gs_tol;
  write_metadata(out, std::move(meta), started);
  std::printf("groundstate: mu = %.12g, residual = %.3g, iterations = %llu\n", result.mu,
              result.residual, static_cast<unsigned long long>(result.iterations));
}

void run_dispersion(const std::string& config_path) {
  const auto started = std::chrono::steady_clock::now();
  RunConfig cfg = parse_config(config_path);
  if (cfg.disp_modes.empty()) {
    fail(ErrorKind::Config, "dispersion needs [dispersion] modes");
  }
  if (!(cfg.disp_dt_factor > 0.0) || cfg.disp_dt_factor > 1.0) {
    fail(ErrorKind::Config, "dispersion dt_factor must be in (0, 1]");
  }
  const Grid1D grid = cfg.make_grid();
  const ModelParams base = params_from_config(cfg, grid);
  std::vector<double> lambdas = cfg.disp_lambdas;
  if (lambdas.empty()) lambdas.push_back(base.lambda);
  const fs::path out = prepare_out_dir(cfg);

  struct Row {
    double lambda;
    int mode;
    DispersionPoint fit;
    DispersionPoint analytic;
    Complex sound;
    double residual;
  };

  const double n0 = 1.0 / grid.length();
  const double dt = cfg.disp_dt_factor * rk4_stability_limit(grid);

  std::vector<std::pair<double, int>> jobs;
  for (double lam : lambdas) {
    for (int m : cfg.disp_modes) jobs.emplace_back(lam, m);
  }

  auto run_job = [&](std::pair<double, int> job) {
    ModelParams p = base;
    p.lambda = job.first;
    MeasureDispersionOptions mopts;
    mopts.amplitude = cfg.disp_amplitude;
    mopts.periods = cfg.disp_periods;
    mopts.samples = cfg.disp_samples;
    mopts.dt = dt;
    const MeasuredDispersion measured = measure_dispersion(grid, p, job.second, mopts);
    const DispersionPoint analytic = analytic_dispersion(measured.point.k, p, n0);
    // Long-wavelength small-damping approximation c_s k - i lambda k^2 / 2,
    // tabulated for comparison only.
    const double k = measured.point.k;
    const Complex sound(std::sqrt(base.coupling * n0) * k, -job.first * 0.5 * k * k);
    return Row{job.first, job.second, measured.point, analytic, sound, measured.residual};
  };

  // Modes fan out to a small worker pool; results keep the job order.
  std::vector<std::future<Row>> futures;
  futures.reserve(jobs.size());
  for (const auto& job : jobs) {
    futures.push_back(std::async(std::launch::async, run_job, job));
  }
  std::vector<Row> rows;
  rows.reserve(jobs.size());
  for (auto& f : futures) rows.push_back(f.get());

  std::printf("%8s %4s %10s | %12s %12s | %12s %12s | %12s %12s | %9s\n", "lambda", "m",
              "k", "fit Re", "fit Im", "LFE Re", "LFE Im", "sound Re", "sound Im",
              "residual");
  for (const Row& r : rows) {
    std::printf("%8.4g %4d %10.5g | %12.6g %12.6g | %12.6g %12.6g | %12.6g %12.6g | %9.2e\n",
                r.lambda, r.mode, r.fit.k, r.fit.omega.real(), r.fit.omega.imag(),
                r.analytic.omega.real(), r.analytic.omega.imag(), r.sound.real(),
                r.sound.imag(), r.residual);
  }

  std::string csv =
      "k,omega_re,omega_im,analytic_re,analytic_im,residual,sound_re,sound_im,lambda,mode\n";
  for (const Row& r : rows) {
    csv += format_double(r.fit.k) + "," + format_double(r.fit.omega.real()) + "," +
           format_double(r.fit.omega.imag()) + "," + format_double(r.analytic.omega.real()) +
           "," + format_double(r.analytic.omega.imag()) + "," + format_double(r.residual) +
           "," + format_double(r.sound.real()) + "," + format_double(r.sound.imag()) + "," +
           format_double(r.lambda) + "," + std::to_string(r.mode) + "\n";
  }
  write_text_file((out / "dispersion.csv").string(), csv);

  Json meta = base_metadata(cfg, "dispersion");
  meta["dt"] = dt;
  meta["points"] = rows.size();
  write_metadata(out, std::move(meta), started);
}

}  // namespace mgpe
