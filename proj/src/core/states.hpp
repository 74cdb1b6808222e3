#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "model.hpp"

namespace mgpe {

// One notch of the Zakharov-Shabat soliton family. speed_fraction is
// beta = v / c_s; beta = 0 is the black soliton (pi phase jump, zero node).
struct SolitonSpec {
  double position = 0.5;        // center x0 in [0, L)
  double speed_fraction = 0.0;  // |beta| < 1
};

// Classical-field (Rayleigh-Jeans) sample: mode 0 seeded with
// sqrt(condensate_fraction), modes 0 < |m| <= mode_cutoff drawn as complex
// Gaussians with variance T / (k^2/2 + G/L), then the field is rescaled to
// unit norm. Deterministic for a fixed seed.
struct ThermalSpec {
  double temperature = 0.0;
  std::size_t mode_cutoff = 0;
  std::uint64_t seed = 0;
  double condensate_fraction = 0.1;
};

// Unit-norm uniform state 1/sqrt(L).
ComplexField uniform_state(const Grid1D& g);
// Unit-norm plane wave exp(i k_m x)/sqrt(L); |m| < n/2.
ComplexField plane_wave(const Grid1D& g, int m);

// Single soliton profile sqrt(n0) [i beta + gamma tanh(gamma (x - x0)/(sqrt(2) xi))],
// gamma = sqrt(1 - beta^2), healing length xi = 1/sqrt(2 G n0), renormalized to
// unit norm. For odd total winding the periodic continuation necessarily
// carries a seam defect at the box edge; see soliton_periodicity_defect.
ComplexField gray_soliton(const Grid1D& g, const ModelParams& p, const SolitonSpec& spec);

// Product ansatz of two soliton factors, renormalized to unit norm. Two black
// solitons wind by 2 pi total and are exactly compatible with the periodic box.
ComplexField two_soliton_state(const Grid1D& g, const ModelParams& p,
                               const SolitonSpec& a, const SolitonSpec& b);

// |profile(L) - profile(0)| / background amplitude of the analytic profile:
// the boundary mismatch the periodic grid inherits (O(beta) per soliton pair,
// O(1) for odd winding).
double soliton_periodicity_defect(const Grid1D& g, const ModelParams& p,
                                  std::span<const SolitonSpec> specs);

ComplexField thermal_sample(const Grid1D& g, const ModelParams& p, const ThermalSpec& spec);

// Unit-norm field with independent complex Gaussian samples per grid point;
// deterministic for a fixed seed. A generic rough starting guess.
ComplexField noise_state(const Grid1D& g, std::uint64_t seed);

// Interaction-shifted single-mode energy used by the sampler.
double thermal_mode_energy(const Grid1D& g, const ModelParams& p, int m);

struct ThermalizationReport {
  double mean = 0.0;      // ground_mode_occ over the trailing half
  double variance = 0.0;
  bool stationary = false;
};

// Compares first-half and second-half means of ground_mode_occ; stationary if
// they differ by less than 3 pooled standard errors. Needs >= 100 records.
ThermalizationReport thermalization_check(std::span<const Observables> records);

}  // namespace mgpe
