#include "model.hpp"

#include <cmath>
#include <string>

#include "fft.hpp"
#include "spectral.hpp"

namespace mgpe {

void ModelParams::validate(const Grid1D& g) const {
  if (!(coupling >= 0.0) || !std::isfinite(coupling)) {
    fail(ErrorKind::Argument, "coupling must be finite and >= 0");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    fail(ErrorKind::Argument, "lambda must be finite and >= 0");
  }
  if (!std::isfinite(mu)) fail(ErrorKind::Argument, "mu must be finite");
  if (has_potential() && potential->size() != g.n()) {
    fail(ErrorKind::Argument,
         "potential has " + std::to_string(potential->size()) +
             " samples, grid expects " + std::to_string(g.n()));
  }
}

double free_energy(const ComplexField& psi, const ModelParams& p) {
  p.validate(psi.grid);
  const std::size_t n = psi.n();
  const Grid1D& g = psi.grid;

  // Kinetic part via Parseval: int |grad psi|^2 = L sum k^2 |c_m|^2.
  Fft& fft = fft_for(n);
  std::vector<Complex> modes(n);
  fft.forward(psi.values, modes);
  double kinetic = 0.0;
  const double inv_n2 = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const double k = g.wavenumber(j);
    kinetic += k * k * std::norm(modes[j]) * inv_n2;
  }
  kinetic *= 0.5 * g.length();

  double local = 0.0;
  const double* v = p.has_potential() ? p.potential->data() : nullptr;
  for (std::size_t j = 0; j < n; ++j) {
    const double rho = std::norm(psi.values[j]);
    const double vr = v ? v[j] : 0.0;
    local += (vr - p.mu) * rho + 0.5 * p.coupling * rho * rho;
  }
  local *= g.spacing();

  return kinetic + local;
}

ComplexField gp_operator(const ComplexField& psi, const ModelParams& p) {
  p.validate(psi.grid);
  const std::size_t n = psi.n();
  Fft& fft = fft_for(n);
  std::vector<Complex> modes(n);
  fft.forward(psi.values, modes);
  for (std::size_t j = 0; j < n; ++j) {
    const double k = psi.grid.wavenumber(j);
    modes[j] *= 0.5 * k * k;  // -1/2 lap -> +k^2/2 per mode
  }
  std::vector<Complex> eta(n);
  fft.inverse(modes, eta);

  const double* v = p.has_potential() ? p.potential->data() : nullptr;
  for (std::size_t j = 0; j < n; ++j) {
    const double vr = v ? v[j] : 0.0;
    eta[j] += (vr - p.mu + p.coupling * std::norm(psi.values[j])) * psi.values[j];
  }
  return ComplexField(psi.grid, std::move(eta));
}

ComplexField project_q(const ComplexField& psi, const ComplexField& v) {
  require_same_grid(psi.grid, v.grid, "project_q");
  const double nsq = norm_sq(psi);
  if (!(nsq > 0.0)) {
    fail(ErrorKind::Argument, "project_q: zero-norm reference state");
  }
  const Complex overlap = inner_product(psi, v) / nsq;
  std::vector<Complex> out(v.values);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] -= psi.values[j] * overlap;
  return ComplexField(psi.grid, std::move(out));
}

std::vector<double> density(const ComplexField& psi) {
  std::vector<double> rho(psi.n());
  for (std::size_t j = 0; j < rho.size(); ++j) rho[j] = std::norm(psi.values[j]);
  return rho;
}

std::vector<double> current(const ComplexField& psi) {
  const ComplexField grad = gradient(psi);
  std::vector<double> j_out(psi.n());
  for (std::size_t j = 0; j < j_out.size(); ++j) {
    j_out[j] = std::imag(std::conj(psi.values[j]) * grad.values[j]);
  }
  return j_out;
}

Observables observables(const ComplexField& psi, const ModelParams& p, double t) {
  const double n_total = norm_sq(psi);
  if (!(n_total > 0.0)) fail(ErrorKind::Argument, "observables: zero-norm state");

  const ComplexField eta = gp_operator(psi, p);
  const Complex psi_eta = inner_product(psi, eta);

  Observables rec;
  rec.t = t;
  rec.norm = n_total;
  rec.free_energy = free_energy(psi, p);
  rec.mu_mean = psi_eta.real() / n_total;

  // mu_var as ||eta - mu_mean psi||^2 / N: algebraically equal to
  // ||eta||^2/N - mu_mean^2 but nonnegative by construction.
  double dev = 0.0;
  for (std::size_t j = 0; j < psi.n(); ++j) {
    dev += std::norm(eta.values[j] - rec.mu_mean * psi.values[j]);
  }
  dev *= psi.grid.spacing();
  rec.mu_var = dev / n_total;

  // <eta|Q|eta> as ||Q eta||^2, again nonnegative by construction.
  double q_eta_sq = 0.0;
  const Complex overlap = psi_eta / n_total;
  for (std::size_t j = 0; j < psi.n(); ++j) {
    q_eta_sq += std::norm(eta.values[j] - overlap * psi.values[j]);
  }
  q_eta_sq *= psi.grid.spacing();
  rec.dissipation_rate = -2.0 * p.lambda * q_eta_sq;

  rec.ground_mode_occ = std::norm(mode_amplitude(psi, 0));
  return rec;
}

}  // namespace mgpe
