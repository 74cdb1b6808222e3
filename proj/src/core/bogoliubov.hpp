#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "model.hpp"

namespace mgpe {

// One point of the fluctuation dispersion around the uniform background.
// omega has Re >= 0 (oscillation) and Im <= 0 (decay); v_over_u is the ratio
// of the counter-rotating to co-rotating plane-wave amplitude.
struct DispersionPoint {
  double k = 0.0;
  Complex omega{0.0, 0.0};
  Complex v_over_u{0.0, 0.0};
};

// Dispersion of plane-wave fluctuations around the uniform state with
// background density n0, V = 0 and mu = G n0, from the determinant of the
// linearized 2x2 system with the damped kernel. For k != 0 the projection
// integrals drop out; the k = 0 call returns the projection-protected phase
// zero mode. At lambda = 0 this reduces to omega_B = sqrt(eps (eps + 2 G n0)),
// eps = k^2/2.
DispersionPoint analytic_dispersion(double k, const ModelParams& p, double n0);

struct MeasureDispersionOptions {
  double amplitude = 1e-4;   // relative perturbation of the background
  double dt = 0.0;           // integrator step; <= 0 resolves to auto_dt
  double periods = 1.5;      // fit window in oscillation periods of the mode
  std::size_t samples = 160; // recorded points across the window
};

struct MeasuredDispersion {
  DispersionPoint point;
  double residual = 0.0;   // relative misfit of the two-frequency model
  double window = 0.0;     // time span of the fitted series
  std::size_t samples = 0;
};

// Evolves (1/sqrt(L))(1 + amplitude cos(k_m x)) under metriplectic dynamics,
// records the +m and -m mode amplitudes and fits the two-frequency model
// a exp(-i omega t) + b exp(+i conj(omega) t) jointly on both series.
MeasuredDispersion measure_dispersion(const Grid1D& g, const ModelParams& p, int mode,
                                      const MeasureDispersionOptions& opts = {});

// Fits the two-frequency model to uniformly sampled complex series via linear
// prediction; exposed for testing on synthetic data.
struct TwoFrequencyFit {
  Complex omega;
  double residual;
};
TwoFrequencyFit fit_two_frequency(const std::vector<std::vector<Complex>>& series,
                                  double sample_dt);

struct StabilityReport {
  double max_growth_rate = 0.0;   // largest Re(eigenvalue) on the leaf
  std::size_t near_zero_modes = 0;
  bool all_decay = false;         // max_growth_rate <= 1e-8
  std::size_t matrix_dim = 0;
  std::vector<Complex> eigenvalues;  // restricted spectrum, unsorted
};

// Dense spectrum of the dynamics linearized around a stationary state,
// restricted to the norm-preserving tangent space (the leaf the dissipative
// bracket acts on). Known symmetry neutrals (global phase, translation for
// non-uniform states) are deflated analytically and counted as near-zero
// modes. Requires ||Q eta||/||psi|| < 1e-6 and n <= 512.
StabilityReport linearized_stability_report(const ComplexField& psi, const ModelParams& p);

}  // namespace mgpe
