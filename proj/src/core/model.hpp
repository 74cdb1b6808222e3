#pragma once

#include <memory>
#include <vector>

#include "grid.hpp"

namespace mgpe {

// Physical parameters in box units (hbar = m = 1, lengths in L, time in
// m L^2/hbar, energy in hbar^2/m L^2). The field is normalized to
// ||psi||^2 = 1 and the interaction constant carries the particle number,
// G = g*N, so configs can quote values like gN = 1e4 directly.
struct ModelParams {
  double coupling = 0.0;  // G >= 0 (repulsive gas)
  double mu = 0.0;        // chemical-potential offset
  double lambda = 0.0;    // dissipation coefficient, >= 0
  std::shared_ptr<const std::vector<double>> potential;  // V(x) samples; null => V = 0

  bool has_potential() const { return potential && !potential->empty(); }
  void validate(const Grid1D& g) const;
};

// F[psi] = int dx [ 1/2 |grad psi|^2 + (V - mu)|psi|^2 + 1/2 G |psi|^4 ].
// The -mu |psi|^2 term makes the fixed-norm stationarity condition
// delta F / delta psi* = 0 attainable.
double free_energy(const ComplexField& psi, const ModelParams& p);

// eta = delta F / delta psi* = -1/2 lap psi + (V - mu) psi + G |psi|^2 psi.
ComplexField gp_operator(const ComplexField& psi, const ModelParams& p);

// Q v = v - psi <psi, v> / ||psi||^2, the projection away from psi.
ComplexField project_q(const ComplexField& psi, const ComplexField& v);

std::vector<double> density(const ComplexField& psi);
// J_j = Im(conj(psi_j) (grad psi)_j), the particle current in box units.
std::vector<double> current(const ComplexField& psi);

// Per-sample scalars recorded along a trajectory.
struct Observables {
  double t = 0.0;
  double norm = 0.0;              // N = ||psi||^2
  double free_energy = 0.0;       // F
  double mu_mean = 0.0;           // Re<psi,eta>/N
  double mu_var = 0.0;            // ||eta||^2/N - mu_mean^2, >= 0
  double dissipation_rate = 0.0;  // -2 lambda <eta|Q|eta>, <= 0
  double ground_mode_occ = 0.0;   // |<e_0, psi>|^2
};

Observables observables(const ComplexField& psi, const ModelParams& p, double t);

}  // namespace mgpe
