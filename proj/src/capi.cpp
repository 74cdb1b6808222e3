// C boundary of the simulation core: opaque handles over the C++ types,
// exceptions mapped onto mgpe_status codes, thread-local error text.

#include "mgpe/mgpe.h"

#include <cstring>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include "core/bogoliubov.hpp"
#include "core/drivers.hpp"
#include "core/dynamics.hpp"
#include "core/spectral.hpp"
#include "core/states.hpp"
#include "core/version.hpp"

struct mgpe_grid {
  mgpe::Grid1D grid;
};
struct mgpe_field {
  mgpe::ComplexField field;
};
struct mgpe_model {
  mgpe::ModelParams params;
};
struct mgpe_schedule {
  mgpe::LambdaSchedule schedule;
};

namespace {

thread_local std::string g_last_error;

mgpe_status status_of(mgpe::ErrorKind kind) {
  switch (kind) {
    case mgpe::ErrorKind::Argument: return MGPE_ERR_ARGUMENT;
    case mgpe::ErrorKind::Config: return MGPE_ERR_CONFIG;
    case mgpe::ErrorKind::Divergence: return MGPE_ERR_DIVERGENCE;
    case mgpe::ErrorKind::Io: return MGPE_ERR_IO;
    case mgpe::ErrorKind::Convergence: return MGPE_ERR_CONVERGENCE;
  }
  return MGPE_ERR_ARGUMENT;
}

template <typename Fn>
mgpe_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return MGPE_OK;
  } catch (const mgpe::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MGPE_ERR_ARGUMENT;
  } catch (...) {
    g_last_error = "unknown failure";
    return MGPE_ERR_ARGUMENT;
  }
}

mgpe_status require(bool ok, const char* msg) {
  if (ok) return MGPE_OK;
  g_last_error = msg;
  return MGPE_ERR_ARGUMENT;
}

}  // namespace

extern "C" {

const char* mgpe_version(void) { return mgpe::kVersionString; }

const char* mgpe_last_error(void) { return g_last_error.c_str(); }

mgpe_status mgpe_grid_create(size_t n_points, double length, mgpe_grid** out) {
  if (auto rc = require(out != nullptr, "grid_create: out is NULL")) return rc;
  return guarded([&] { *out = new mgpe_grid{mgpe::Grid1D(n_points, length)}; });
}

void mgpe_grid_destroy(mgpe_grid* grid) { delete grid; }

size_t mgpe_grid_points(const mgpe_grid* grid) { return grid ? grid->grid.n() : 0; }

double mgpe_grid_length(const mgpe_grid* grid) {
  return grid ? grid->grid.length() : 0.0;
}

mgpe_status mgpe_model_create(double coupling, double mu, double lambda,
                              mgpe_model** out) {
  if (auto rc = require(out != nullptr, "model_create: out is NULL")) return rc;
  return guarded([&] {
    mgpe::ModelParams p;
    p.coupling = coupling;
    p.mu = mu;
    p.lambda = lambda;
    if (!(coupling >= 0.0)) mgpe::fail(mgpe::ErrorKind::Argument, "coupling must be >= 0");
    if (!(lambda >= 0.0)) mgpe::fail(mgpe::ErrorKind::Argument, "lambda must be >= 0");
    *out = new mgpe_model{std::move(p)};
  });
}

mgpe_status mgpe_model_set_potential(mgpe_model* model, const mgpe_grid* grid,
                                     const double* samples) {
  if (auto rc = require(model && grid && samples, "set_potential: NULL argument")) {
    return rc;
  }
  return guarded([&] {
    model->params.potential = std::make_shared<const std::vector<double>>(
        samples, samples + grid->grid.n());
    model->params.validate(grid->grid);
  });
}

mgpe_status mgpe_model_set_lambda(mgpe_model* model, double lambda) {
  if (auto rc = require(model != nullptr, "set_lambda: model is NULL")) return rc;
  if (auto rc = require(lambda >= 0.0, "set_lambda: lambda must be >= 0")) return rc;
  model->params.lambda = lambda;
  return MGPE_OK;
}

mgpe_status mgpe_model_set_mu(mgpe_model* model, double mu) {
  if (auto rc = require(model != nullptr, "set_mu: model is NULL")) return rc;
  model->params.mu = mu;
  return MGPE_OK;
}

void mgpe_model_destroy(mgpe_model* model) { delete model; }

mgpe_status mgpe_field_create(const mgpe_grid* grid, const double* interleaved,
                              mgpe_field** out) {
  if (auto rc = require(grid && interleaved && out, "field_create: NULL argument")) {
    return rc;
  }
  return guarded([&] {
    std::vector<mgpe::Complex> v(grid->grid.n());
    for (std::size_t j = 0; j < v.size(); ++j) {
      v[j] = mgpe::Complex(interleaved[2 * j], interleaved[2 * j + 1]);
    }
    *out = new mgpe_field{mgpe::ComplexField(grid->grid, std::move(v))};
  });
}

mgpe_status mgpe_field_clone(const mgpe_field* field, mgpe_field** out) {
  if (auto rc = require(field && out, "field_clone: NULL argument")) return rc;
  return guarded([&] { *out = new mgpe_field{field->field}; });
}

void mgpe_field_destroy(mgpe_field* field) { delete field; }

size_t mgpe_field_points(const mgpe_field* field) {
  return field ? field->field.n() : 0;
}

mgpe_status mgpe_field_data(const mgpe_field* field, double* interleaved_out) {
  if (auto rc = require(field && interleaved_out, "field_data: NULL argument")) return rc;
  for (std::size_t j = 0; j < field->field.n(); ++j) {
    interleaved_out[2 * j] = field->field.values[j].real();
    interleaved_out[2 * j + 1] = field->field.values[j].imag();
  }
  return MGPE_OK;
}

mgpe_status mgpe_field_density(const mgpe_field* field, double* density_out) {
  if (auto rc = require(field && density_out, "field_density: NULL argument")) return rc;
  return guarded([&] {
    const std::vector<double> rho = mgpe::density(field->field);
    std::memcpy(density_out, rho.data(), rho.size() * sizeof(double));
  });
}

mgpe_status mgpe_field_norm_sq(const mgpe_field* field, double* out) {
  if (auto rc = require(field && out, "field_norm_sq: NULL argument")) return rc;
  *out = mgpe::norm_sq(field->field);
  return MGPE_OK;
}

mgpe_status mgpe_state_uniform(const mgpe_grid* grid, mgpe_field** out) {
  if (auto rc = require(grid && out, "state_uniform: NULL argument")) return rc;
  return guarded([&] { *out = new mgpe_field{mgpe::uniform_state(grid->grid)}; });
}

mgpe_status mgpe_state_plane_wave(const mgpe_grid* grid, int mode, mgpe_field** out) {
  if (auto rc = require(grid && out, "state_plane_wave: NULL argument")) return rc;
  return guarded([&] { *out = new mgpe_field{mgpe::plane_wave(grid->grid, mode)}; });
}

mgpe_status mgpe_state_solitons(const mgpe_grid* grid, const mgpe_model* model,
                                const mgpe_soliton_spec* specs, size_t count,
                                mgpe_field** out) {
  if (auto rc = require(grid && model && specs && out, "state_solitons: NULL argument")) {
    return rc;
  }
  if (auto rc = require(count == 1 || count == 2, "state_solitons: count must be 1 or 2")) {
    return rc;
  }
  return guarded([&] {
    const mgpe::SolitonSpec a{specs[0].position, specs[0].speed_fraction};
    if (count == 1) {
      *out = new mgpe_field{mgpe::gray_soliton(grid->grid, model->params, a)};
    } else {
      const mgpe::SolitonSpec b{specs[1].position, specs[1].speed_fraction};
      *out = new mgpe_field{mgpe::two_soliton_state(grid->grid, model->params, a, b)};
    }
  });
}

mgpe_status mgpe_state_thermal(const mgpe_grid* grid, const mgpe_model* model,
                               const mgpe_thermal_spec* spec, mgpe_field** out) {
  if (auto rc = require(grid && model && spec && out, "state_thermal: NULL argument")) {
    return rc;
  }
  return guarded([&] {
    mgpe::ThermalSpec s;
    s.temperature = spec->temperature;
    s.mode_cutoff = spec->mode_cutoff;
    s.seed = spec->seed;
    s.condensate_fraction = spec->condensate_fraction;
    *out = new mgpe_field{mgpe::thermal_sample(grid->grid, model->params, s)};
  });
}

namespace {

mgpe_observables to_c(const mgpe::Observables& rec) {
  mgpe_observables out;
  out.t = rec.t;
  out.norm = rec.norm;
  out.free_energy = rec.free_energy;
  out.mu_mean = rec.mu_mean;
  out.mu_var = rec.mu_var;
  out.dissipation_rate = rec.dissipation_rate;
  out.ground_mode_occ = rec.ground_mode_occ;
  return out;
}

}  // namespace

mgpe_status mgpe_compute_observables(const mgpe_field* field, const mgpe_model* model,
                                     double t, mgpe_observables* out) {
  if (auto rc = require(field && model && out, "compute_observables: NULL argument")) {
    return rc;
  }
  return guarded([&] { *out = to_c(mgpe::observables(field->field, model->params, t)); });
}

mgpe_status mgpe_free_energy(const mgpe_field* field, const mgpe_model* model,
                             double* out) {
  if (auto rc = require(field && model && out, "free_energy: NULL argument")) return rc;
  return guarded([&] { *out = mgpe::free_energy(field->field, model->params); });
}

mgpe_status mgpe_schedule_create(const double* stage_durations,
                                 const double* stage_lambdas, size_t stage_count,
                                 mgpe_schedule** out) {
  if (auto rc = require(stage_durations && stage_lambdas && out && stage_count > 0,
                        "schedule_create: bad arguments")) {
    return rc;
  }
  return guarded([&] {
    mgpe::LambdaSchedule s;
    for (size_t i = 0; i < stage_count; ++i) {
      s.stages.push_back({stage_durations[i], stage_lambdas[i]});
    }
    s.validate();
    *out = new mgpe_schedule{std::move(s)};
  });
}

void mgpe_schedule_destroy(mgpe_schedule* schedule) { delete schedule; }

mgpe_status mgpe_evolve(mgpe_field* field, const mgpe_model* model,
                        mgpe_dynamics dynamics, const mgpe_schedule* schedule,
                        const mgpe_evolve_options* options,
                        mgpe_observable_callback on_observable,
                        mgpe_snapshot_callback on_snapshot, void* user) {
  if (auto rc = require(field && model && schedule, "evolve: NULL argument")) return rc;
  if (auto rc = require(dynamics >= MGPE_DYNAMICS_CONSERVATIVE &&
                            dynamics <= MGPE_DYNAMICS_METRIPLECTIC,
                        "evolve: bad dynamics kind")) {
    return rc;
  }
  return guarded([&] {
    mgpe::EvolutionConfig cfg;
    if (options) {
      cfg.dt = options->dt;
      cfg.observable_stride = options->observable_stride;
      cfg.snapshot_stride = options->snapshot_stride;
      cfg.renormalize = options->renormalize != 0;
    }
    if (!(cfg.dt > 0.0)) cfg.dt = mgpe::auto_dt(field->field.grid);

    mgpe::EvolveSinks sinks;
    if (on_observable) {
      sinks.observable = [&](const mgpe::Observables& rec) {
        const mgpe_observables c = to_c(rec);
        on_observable(&c, user);
      };
    }
    std::vector<double> interleaved;
    if (on_snapshot) {
      interleaved.resize(2 * field->field.n());
      sinks.snapshot = [&](double t, double lambda, const mgpe::ComplexField& f) {
        for (std::size_t j = 0; j < f.n(); ++j) {
          interleaved[2 * j] = f.values[j].real();
          interleaved[2 * j + 1] = f.values[j].imag();
        }
        on_snapshot(t, lambda, interleaved.data(), f.n(), user);
      };
    }

    const auto kind = static_cast<mgpe::DynamicsKind>(dynamics);
    field->field = mgpe::evolve(field->field, model->params, kind, schedule->schedule,
                                cfg, sinks);
  });
}

mgpe_status mgpe_ground_state(mgpe_field* field, const mgpe_model* model, double tol,
                              uint64_t max_iters, double* mu_out, double* residual_out) {
  if (auto rc = require(field && model, "ground_state: NULL argument")) return rc;
  return guarded([&] {
    mgpe::GroundStateResult result =
        mgpe::ground_state_ite(field->field, model->params, tol, max_iters);
    field->field = std::move(result.psi);
    if (mu_out) *mu_out = result.mu;
    if (residual_out) *residual_out = result.residual;
  });
}

mgpe_status mgpe_dispersion_analytic(double k, const mgpe_model* model, double n0,
                                     mgpe_dispersion_point* out) {
  if (auto rc = require(model && out, "dispersion_analytic: NULL argument")) return rc;
  return guarded([&] {
    const mgpe::DispersionPoint p = mgpe::analytic_dispersion(k, model->params, n0);
    out->k = p.k;
    out->omega_re = p.omega.real();
    out->omega_im = p.omega.imag();
    out->v_over_u_re = p.v_over_u.real();
    out->v_over_u_im = p.v_over_u.imag();
  });
}

mgpe_status mgpe_dispersion_measure(const mgpe_grid* grid, const mgpe_model* model,
                                    int mode,
                                    const mgpe_dispersion_measure_options* options,
                                    mgpe_dispersion_point* out, double* residual_out) {
  if (auto rc = require(grid && model && out, "dispersion_measure: NULL argument")) {
    return rc;
  }
  return guarded([&] {
    mgpe::MeasureDispersionOptions opts;
    if (options) {
      if (options->amplitude > 0.0) opts.amplitude = options->amplitude;
      if (options->dt > 0.0) opts.dt = options->dt;
      if (options->periods > 0.0) opts.periods = options->periods;
      if (options->samples > 0) opts.samples = options->samples;
    }
    const mgpe::MeasuredDispersion m =
        mgpe::measure_dispersion(grid->grid, model->params, mode, opts);
    out->k = m.point.k;
    out->omega_re = m.point.omega.real();
    out->omega_im = m.point.omega.imag();
    out->v_over_u_re = m.point.v_over_u.real();
    out->v_over_u_im = m.point.v_over_u.imag();
    if (residual_out) *residual_out = m.residual;
  });
}

mgpe_status mgpe_stability_report_compute(const mgpe_field* field,
                                          const mgpe_model* model,
                                          mgpe_stability_report* out) {
  if (auto rc = require(field && model && out, "stability_report: NULL argument")) {
    return rc;
  }
  return guarded([&] {
    const mgpe::StabilityReport rep =
        mgpe::linearized_stability_report(field->field, model->params);
    out->max_growth_rate = rep.max_growth_rate;
    out->near_zero_modes = rep.near_zero_modes;
    out->all_decay = rep.all_decay ? 1 : 0;
    out->matrix_dim = rep.matrix_dim;
  });
}

mgpe_status mgpe_run_evolve(const char* config_path) {
  if (auto rc = require(config_path != nullptr, "run_evolve: config_path is NULL")) {
    return rc;
  }
  return guarded([&] { mgpe::run_evolve(config_path); });
}

mgpe_status mgpe_run_groundstate(const char* config_path) {
  if (auto rc = require(config_path != nullptr, "run_groundstate: config_path is NULL")) {
    return rc;
  }
  return guarded([&] { mgpe::run_groundstate(config_path); });
}

mgpe_status mgpe_run_dispersion(const char* config_path) {
  if (auto rc = require(config_path != nullptr, "run_dispersion: config_path is NULL")) {
    return rc;
  }
  return guarded([&] { mgpe::run_dispersion(config_path); });
}

mgpe_status mgpe_run_quench(const char* config_path) {
  if (auto rc = require(config_path != nullptr, "run_quench: config_path is NULL")) {
    return rc;
  }
  return guarded([&] { mgpe::run_quench(config_path); });
}

mgpe_status mgpe_run_solitons(const char* config_path) {
  if (auto rc = require(config_path != nullptr, "run_solitons: config_path is NULL")) {
    return rc;
  }
  return guarded([&] { mgpe::run_solitons(config_path); });
}

}  // extern "C"
