#pragma once

#include <string>

#include "config.hpp"

namespace mgpe {

// CLI driver entry points. Each parses the config, runs, and writes all
// artifacts under the configured output directory (observables CSV, GPF1
// snapshots, optional heatmap, metadata.json). Failures throw mgpe::Error;
// the C API maps the error kind onto process exit codes.
void run_evolve(const std::string& config_path);
void run_groundstate(const std::string& config_path);
void run_dispersion(const std::string& config_path);
void run_quench(const std::string& config_path);
void run_solitons(const std::string& config_path);

// Shared helpers, also used by tests.
ModelParams params_from_config(const RunConfig& cfg, const Grid1D& grid);
ComplexField initial_from_config(const RunConfig& cfg, const Grid1D& grid,
                                 const ModelParams& p);

// Per-snapshot parabolic interpolation of density minima; returns refined
// (position, minimum density) pairs matched against the previous positions.
struct TrackedMinimum {
  double x;
  double rho;
};
std::vector<TrackedMinimum> track_minima(const Grid1D& g, const std::vector<double>& rho,
                                         std::size_t count,
                                         const std::vector<double>& previous_x);

}  // namespace mgpe
