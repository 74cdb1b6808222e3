#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dynamics.hpp"

namespace mgpe {

// Parsed run configuration. The on-disk format is flat sectioned key-value
// text (see configs/example.cfg); unknown sections or keys are hard errors so
// typos cannot silently change a run.
struct RunConfig {
  enum class InitialKind { Uniform, PlaneWave, Solitons, Thermal, Noise, File };

  // [grid]
  std::size_t n_points = 0;
  double length = 1.0;

  // [physics]
  double coupling = 0.0;
  std::optional<double> lambda;           // constant dissipation
  std::optional<LambdaSchedule> stages;   // or per-stage schedule
  bool mu_auto = false;
  double mu = 0.0;
  std::string potential_path;             // empty = V = 0
  DynamicsKind dynamics = DynamicsKind::Metriplectic;

  // [initial]
  InitialKind initial = InitialKind::Uniform;
  int plane_wave_mode = 1;
  std::vector<double> soliton_positions;
  std::vector<double> soliton_speeds;
  double temperature = 0.0;
  std::size_t cutoff = 0;
  std::uint64_t seed = 0;
  double condensate_fraction = 0.1;
  std::string initial_path;

  // [integration]
  bool dt_auto = true;
  double dt = 0.0;          // resolved value (auto rule applied)
  double t_end = 0.0;
  std::uint64_t observable_stride = 1;
  std::uint64_t snapshot_stride = 0;
  bool renormalize = false;

  // [output]
  std::string out_dir;
  bool heatmap = false;
  bool write_csv = true;
  bool write_snapshots = true;

  // [dispersion]
  std::vector<int> disp_modes;
  std::vector<double> disp_lambdas;
  double disp_amplitude = 1e-4;
  double disp_periods = 1.5;
  std::size_t disp_samples = 160;
  double disp_dt_factor = 0.8;

  // [groundstate]
  double gs_tol = 1e-8;
  std::uint64_t gs_max_iters = 2000000;

  // Bookkeeping echoed into run metadata.
  std::vector<std::pair<std::string, std::string>> entries;  // section.key -> raw value
  std::vector<std::string> defaults_applied;
  std::vector<std::string> warnings;
  std::string source_path;

  LambdaSchedule schedule(double default_lambda = 0.0) const;
  Grid1D make_grid() const;
};

RunConfig parse_config(const std::string& path);

}  // namespace mgpe
