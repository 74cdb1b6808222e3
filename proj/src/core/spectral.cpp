#include "spectral.hpp"

#include <cmath>
#include <string>

#include "fft.hpp"

namespace mgpe {

Complex inner_product(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.grid, b.grid, "inner_product");
  Complex acc(0.0, 0.0);
  for (std::size_t j = 0; j < a.n(); ++j) acc += std::conj(a.values[j]) * b.values[j];
  return acc * a.grid.spacing();
}

double norm_sq(const ComplexField& a) {
  double acc = 0.0;
  for (const Complex& z : a.values) acc += std::norm(z);
  return acc * a.grid.spacing();
}

namespace {

// Common path for the derivative operators: transform, scale each mode by a
// k-dependent complex factor, transform back.
template <typename MultiplierFn>
ComplexField apply_mode_multiplier(const ComplexField& a, MultiplierFn mult) {
  const std::size_t n = a.n();
  Fft& fft = fft_for(n);
  std::vector<Complex> modes(n);
  fft.forward(a.values, modes);
  for (std::size_t j = 0; j < n; ++j) modes[j] *= mult(a.grid.wavenumber(j));
  std::vector<Complex> out(n);
  fft.inverse(modes, out);
  return ComplexField(a.grid, std::move(out));
}

}  // namespace

ComplexField laplacian(const ComplexField& a) {
  return apply_mode_multiplier(a, [](double k) { return Complex(-k * k, 0.0); });
}

ComplexField gradient(const ComplexField& a) {
  return apply_mode_multiplier(a, [](double k) { return Complex(0.0, k); });
}

Complex mode_amplitude(const ComplexField& a, int m) {
  const std::size_t n = a.n();
  if (std::abs(m) >= static_cast<int>(n / 2)) {
    fail(ErrorKind::Argument,
         "mode index " + std::to_string(m) + " out of range for n = " + std::to_string(n));
  }
  // <e_m, a> accumulated with an incremental twiddle rotation; the phase is
  // re-anchored periodically to keep the rotation on the unit circle.
  const double theta = -2.0 * kPi * static_cast<double>(m) / static_cast<double>(n);
  const Complex step(std::cos(theta), std::sin(theta));
  Complex acc(0.0, 0.0);
  Complex phase(1.0, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    acc += a.values[j] * phase;
    phase *= step;
    if ((j & 255u) == 255u) {
      const double t = theta * static_cast<double>(j + 1);
      phase = Complex(std::cos(t), std::sin(t));
    }
  }
  return acc * (a.grid.spacing() / std::sqrt(a.grid.length()));
}

std::vector<Complex> to_modes(const ComplexField& a) {
  const std::size_t n = a.n();
  Fft& fft = fft_for(n);
  std::vector<Complex> modes(n);
  fft.forward(a.values, modes);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (Complex& c : modes) c *= inv_n;
  return modes;
}

ComplexField field_from_modes(const Grid1D& g, std::span<const Complex> modes) {
  if (modes.size() != g.n()) {
    fail(ErrorKind::Argument, "mode array size does not match grid");
  }
  const std::size_t n = g.n();
  Fft& fft = fft_for(n);
  // inverse() divides by n, so pre-scale to undo it: a = sum c_m e^{ikx}.
  std::vector<Complex> scaled(modes.begin(), modes.end());
  for (Complex& c : scaled) c *= static_cast<double>(n);
  std::vector<Complex> out(n);
  fft.inverse(scaled, out);
  return ComplexField(g, std::move(out));
}

}  // namespace mgpe
