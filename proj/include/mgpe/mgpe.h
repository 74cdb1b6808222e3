/* mgpe — 1D Gross-Pitaevskii dynamics with norm-conserving dissipation.
 *
 * C interface to the simulation core. All objects are opaque handles created
 * and destroyed through this API; every fallible call returns an mgpe_status
 * and leaves a human-readable message in mgpe_last_error() (thread-local).
 * Complex fields cross the boundary as interleaved (re, im) double pairs.
 */
#ifndef MGPE_H
#define MGPE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mgpe_status {
  MGPE_OK = 0,
  MGPE_ERR_ARGUMENT = 1,    /* bad handles, shapes, preconditions */
  MGPE_ERR_CONFIG = 2,      /* configuration file problems */
  MGPE_ERR_DIVERGENCE = 3,  /* NaN/Inf during time stepping */
  MGPE_ERR_IO = 4,          /* file system failures */
  MGPE_ERR_CONVERGENCE = 5  /* solver or fit did not converge */
} mgpe_status;

typedef enum mgpe_dynamics {
  MGPE_DYNAMICS_CONSERVATIVE = 0,
  MGPE_DYNAMICS_PITAEVSKII = 1,
  MGPE_DYNAMICS_METRIPLECTIC = 2
} mgpe_dynamics;

const char* mgpe_version(void);
/* Message for the most recent failure on this thread; empty string if none. */
const char* mgpe_last_error(void);

typedef struct mgpe_grid mgpe_grid;
typedef struct mgpe_field mgpe_field;
typedef struct mgpe_model mgpe_model;
typedef struct mgpe_schedule mgpe_schedule;

/* ---- grid ------------------------------------------------------------ */

/* n_points must be a power of two; length > 0 (box units). */
mgpe_status mgpe_grid_create(size_t n_points, double length, mgpe_grid** out);
void mgpe_grid_destroy(mgpe_grid* grid);
size_t mgpe_grid_points(const mgpe_grid* grid);
double mgpe_grid_length(const mgpe_grid* grid);

/* ---- model parameters ------------------------------------------------ */

mgpe_status mgpe_model_create(double coupling, double mu, double lambda,
                              mgpe_model** out);
/* Copies n_points samples of the external potential V(x). */
mgpe_status mgpe_model_set_potential(mgpe_model* model, const mgpe_grid* grid,
                                     const double* samples);
mgpe_status mgpe_model_set_lambda(mgpe_model* model, double lambda);
mgpe_status mgpe_model_set_mu(mgpe_model* model, double mu);
void mgpe_model_destroy(mgpe_model* model);

/* ---- fields ---------------------------------------------------------- */

/* interleaved holds 2*n doubles: re0, im0, re1, im1, ... */
mgpe_status mgpe_field_create(const mgpe_grid* grid, const double* interleaved,
                              mgpe_field** out);
mgpe_status mgpe_field_clone(const mgpe_field* field, mgpe_field** out);
void mgpe_field_destroy(mgpe_field* field);
size_t mgpe_field_points(const mgpe_field* field);
mgpe_status mgpe_field_data(const mgpe_field* field, double* interleaved_out);
mgpe_status mgpe_field_density(const mgpe_field* field, double* density_out);
mgpe_status mgpe_field_norm_sq(const mgpe_field* field, double* out);

/* ---- initial states -------------------------------------------------- */

mgpe_status mgpe_state_uniform(const mgpe_grid* grid, mgpe_field** out);
mgpe_status mgpe_state_plane_wave(const mgpe_grid* grid, int mode, mgpe_field** out);

typedef struct mgpe_soliton_spec {
  double position;       /* center in [0, L) */
  double speed_fraction; /* beta = v/c_s, |beta| < 1 */
} mgpe_soliton_spec;

/* count is 1 or 2; the state is renormalized to unit norm. */
mgpe_status mgpe_state_solitons(const mgpe_grid* grid, const mgpe_model* model,
                                const mgpe_soliton_spec* specs, size_t count,
                                mgpe_field** out);

typedef struct mgpe_thermal_spec {
  double temperature;        /* box units */
  uint32_t mode_cutoff;      /* populate 0 < |m| <= cutoff */
  uint64_t seed;             /* deterministic sampling */
  double condensate_fraction;/* pre-rescale weight of mode 0 */
} mgpe_thermal_spec;

mgpe_status mgpe_state_thermal(const mgpe_grid* grid, const mgpe_model* model,
                               const mgpe_thermal_spec* spec, mgpe_field** out);

/* ---- observables ------------------------------------------------------ */

typedef struct mgpe_observables {
  double t;
  double norm;
  double free_energy;
  double mu_mean;
  double mu_var;
  double dissipation_rate;
  double ground_mode_occ;
} mgpe_observables;

mgpe_status mgpe_compute_observables(const mgpe_field* field, const mgpe_model* model,
                                     double t, mgpe_observables* out);
mgpe_status mgpe_free_energy(const mgpe_field* field, const mgpe_model* model,
                             double* out);

/* ---- time evolution ---------------------------------------------------- */

/* stage_durations/stage_lambdas are parallel arrays of length stage_count. */
mgpe_status mgpe_schedule_create(const double* stage_durations,
                                 const double* stage_lambdas, size_t stage_count,
                                 mgpe_schedule** out);
void mgpe_schedule_destroy(mgpe_schedule* schedule);

typedef struct mgpe_evolve_options {
  double dt;                  /* <= 0 resolves to 0.4 x RK4 stability bound */
  uint64_t observable_stride; /* 0 disables observable records */
  uint64_t snapshot_stride;   /* 0 disables snapshots */
  int renormalize;            /* nonzero: rescale to the initial norm each step */
} mgpe_evolve_options;

typedef void (*mgpe_observable_callback)(const mgpe_observables* record, void* user);
typedef void (*mgpe_snapshot_callback)(double t, double lambda,
                                       const double* interleaved, size_t n_points,
                                       void* user);

/* Advances the field in place through the schedule. Callbacks may be NULL. */
mgpe_status mgpe_evolve(mgpe_field* field, const mgpe_model* model,
                        mgpe_dynamics dynamics, const mgpe_schedule* schedule,
                        const mgpe_evolve_options* options,
                        mgpe_observable_callback on_observable,
                        mgpe_snapshot_callback on_snapshot, void* user);

/* Projected-gradient descent to the free-energy minimum at fixed norm.
 * Replaces the field with the converged state. */
mgpe_status mgpe_ground_state(mgpe_field* field, const mgpe_model* model, double tol,
                              uint64_t max_iters, double* mu_out, double* residual_out);

/* ---- linear response --------------------------------------------------- */

typedef struct mgpe_dispersion_point {
  double k;
  double omega_re;
  double omega_im;
  double v_over_u_re;
  double v_over_u_im;
} mgpe_dispersion_point;

/* Damped Bogoliubov dispersion around the uniform background of density n0. */
mgpe_status mgpe_dispersion_analytic(double k, const mgpe_model* model, double n0,
                                     mgpe_dispersion_point* out);

typedef struct mgpe_dispersion_measure_options {
  double amplitude; /* <= 0 resolves to 1e-4 */
  double dt;        /* <= 0 resolves to the auto rule */
  double periods;   /* <= 0 resolves to 1.5 */
  uint32_t samples; /* 0 resolves to 160 */
} mgpe_dispersion_measure_options;

/* Fits the complex mode frequency from a metriplectic evolution of a weakly
 * perturbed uniform state; options may be NULL for defaults. */
mgpe_status mgpe_dispersion_measure(const mgpe_grid* grid, const mgpe_model* model,
                                    int mode,
                                    const mgpe_dispersion_measure_options* options,
                                    mgpe_dispersion_point* out, double* residual_out);

typedef struct mgpe_stability_report {
  double max_growth_rate;
  size_t near_zero_modes;
  int all_decay;
  size_t matrix_dim;
} mgpe_stability_report;

/* Dense linearized spectrum around a stationary state (n <= 512). */
mgpe_status mgpe_stability_report_compute(const mgpe_field* field,
                                          const mgpe_model* model,
                                          mgpe_stability_report* out);

/* ---- configured drivers ------------------------------------------------ */

/* Each runs one configuration file end to end and writes its artifacts under
 * the configured output directory. The returned status doubles as the CLI
 * exit code: 0 ok, 2 config error, 3 divergence, 4 I/O, 5 non-convergence. */
mgpe_status mgpe_run_evolve(const char* config_path);
mgpe_status mgpe_run_groundstate(const char* config_path);
mgpe_status mgpe_run_dispersion(const char* config_path);
mgpe_status mgpe_run_quench(const char* config_path);
mgpe_status mgpe_run_solitons(const char* config_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MGPE_H */
