#include "doctest.h"

#include <cmath>

#include "core/spectral.hpp"
#include "oracles.hpp"

using namespace mgpe;

namespace {

ComplexField random_bandlimited(const Grid1D& g, std::uint64_t seed) {
  oracle::Rng rng(seed);
  std::vector<Complex> modes(g.n(), Complex(0.0, 0.0));
  for (std::size_t j = 0; j < g.n(); ++j) {
    // Leave the unmatched Nyquist slot empty so interpolants are smooth.
    if (g.mode(j) == -static_cast<int>(g.n() / 2)) continue;
    modes[j] = rng.complex_normal();
  }
  return field_from_modes(g, modes);
}

// Trigonometric interpolant evaluated off-grid.
Complex interpolant(const ComplexField& f, const std::vector<Complex>& modes, double x) {
  Complex acc(0.0, 0.0);
  for (std::size_t j = 0; j < f.n(); ++j) {
    const double k = f.grid.wavenumber(j);
    acc += modes[j] * Complex(std::cos(k * x), std::sin(k * x));
  }
  return acc;
}

}  // namespace

TEST_CASE("grid construction enforces power-of-two sizes") {
  CHECK_NOTHROW(Grid1D(8, 1.0));
  CHECK_THROWS_AS(Grid1D(12, 1.0), Error);
  CHECK_THROWS_AS(Grid1D(0, 1.0), Error);
  CHECK_THROWS_AS(Grid1D(8, -1.0), Error);
  const Grid1D g(8, 2.0);
  CHECK(g.spacing() == doctest::Approx(0.25));
  CHECK(g.mode(4) == -4);
  CHECK(g.wavenumber(1) == doctest::Approx(kPi));
}

TEST_CASE("inner_product on uniform and plane-wave fields") {
  const Grid1D g(8, 1.0);
  const ComplexField ones(g, std::vector<Complex>(8, Complex(1.0, 0.0)));
  const Complex ip = inner_product(ones, ones);
  CHECK(ip.real() == doctest::Approx(1.0));
  CHECK(ip.imag() == doctest::Approx(0.0));

  std::vector<Complex> wave(8);
  for (std::size_t j = 0; j < 8; ++j) {
    const double ph = 2.0 * kPi * g.x(j);
    wave[j] = Complex(std::cos(ph), std::sin(ph));
  }
  const ComplexField exp_wave(g, wave);
  const Complex ortho = inner_product(exp_wave, ones);
  CHECK(std::abs(ortho) < 1e-14);
}

TEST_CASE("inner_product rejects mismatched grids") {
  const Grid1D a(8, 1.0), b(16, 1.0);
  CHECK_THROWS_AS(inner_product(ComplexField::zeros(a), ComplexField::zeros(b)), Error);
}

TEST_CASE("inner_product matches Gauss quadrature of the trigonometric interpolant") {
  const Grid1D g(16, 1.0);
  const ComplexField a = random_bandlimited(g, 11);
  const ComplexField b = random_bandlimited(g, 23);
  const auto am = to_modes(a);
  const auto bm = to_modes(b);

  const oracle::GaussRule rule = oracle::gauss_legendre(64);
  const Complex expected = oracle::gauss_integrate(
      [&](double x) { return std::conj(interpolant(a, am, x)) * interpolant(b, bm, x); },
      0.0, 1.0, rule);
  const Complex got = inner_product(a, b);
  CHECK(std::abs(got - expected) < 1e-12 * std::abs(expected) + 1e-12);
}

TEST_CASE("norm_sq basics") {
  const Grid1D g(8, 1.0);
  CHECK(norm_sq(ComplexField(g, std::vector<Complex>(8, Complex(1.0, 0.0)))) ==
        doctest::Approx(1.0));

  std::vector<Complex> wave(8);
  for (std::size_t j = 0; j < 8; ++j) {
    const double ph = 2.0 * kPi * g.x(j);
    wave[j] = 2.0 * Complex(std::cos(ph), std::sin(ph));
  }
  CHECK(norm_sq(ComplexField(g, wave)) == doctest::Approx(4.0));
}

TEST_CASE("norm_sq of a black soliton profile matches adaptive quadrature") {
  // Density is smooth across the periodic seam even though the sign flips.
  const Grid1D g(1024, 1.0);
  const double g_n0 = 400.0;
  const double w_inv = std::sqrt(g_n0);
  auto profile = [&](double x) { return std::tanh(w_inv * (x - 0.5)); };

  std::vector<Complex> v(g.n());
  for (std::size_t j = 0; j < g.n(); ++j) v[j] = Complex(profile(g.x(j)), 0.0);
  const ComplexField psi(g, v);

  const double expected = oracle::adaptive_quadrature(
      [&](double x) {
        const double p = profile(x);
        return p * p;
      },
      0.0, 1.0, 1e-14);
  CHECK(norm_sq(psi) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("laplacian and gradient on eigenfunctions") {
  const Grid1D g(64, 1.0);
  const ComplexField ones(g, std::vector<Complex>(64, Complex(0.7, -0.2)));
  for (const Complex& z : laplacian(ones).values) CHECK(std::abs(z) < 1e-10);
  for (const Complex& z : gradient(ones).values) CHECK(std::abs(z) < 1e-10);

  std::vector<Complex> wave(64);
  const double k = 2.0 * kPi;
  for (std::size_t j = 0; j < 64; ++j) {
    const double ph = k * g.x(j);
    wave[j] = Complex(std::cos(ph), std::sin(ph));
  }
  const ComplexField psi(g, wave);
  const ComplexField lap = laplacian(psi);
  const ComplexField grad = gradient(psi);
  for (std::size_t j = 0; j < 64; ++j) {
    CHECK(std::abs(lap.values[j] + k * k * psi.values[j]) < 1e-10);
    CHECK(std::abs(grad.values[j] - Complex(0.0, k) * psi.values[j]) < 1e-10);
  }
}

TEST_CASE("derivatives agree with 4th-order finite differences on a sharp profile") {
  const Grid1D g(4096, 1.0);
  std::vector<Complex> v(g.n());
  for (std::size_t j = 0; j < g.n(); ++j) {
    // Periodic tanh-like profile with O(1/0.35) gradients.
    v[j] = Complex(std::tanh(std::sin(2.0 * kPi * g.x(j)) / 0.35), 0.0);
  }
  const ComplexField psi(g, v);
  const double h = g.spacing();

  const auto fd1 = oracle::fd4_first(psi.values, h);
  const auto fd2 = oracle::fd4_second(psi.values, h);
  const ComplexField sp1 = gradient(psi);
  const ComplexField sp2 = laplacian(psi);

  double err1 = 0.0, err2 = 0.0, scale1 = 0.0, scale2 = 0.0;
  for (std::size_t j = 0; j < g.n(); ++j) {
    err1 = std::max(err1, std::abs(sp1.values[j] - fd1[j]));
    err2 = std::max(err2, std::abs(sp2.values[j] - fd2[j]));
    scale1 = std::max(scale1, std::abs(sp1.values[j]));
    scale2 = std::max(scale2, std::abs(sp2.values[j]));
  }
  // FD4 truncation: O(h^4 f^(5)) and O(h^4 f^(6)); the spectral result is
  // exact to round-off for this resolved profile.
  CHECK(err1 / scale1 < 1e-7);
  CHECK(err2 / scale2 < 1e-6);

  // Halving the resolution multiplies the FD-vs-spectral gap by about 16.
  const Grid1D gc(2048, 1.0);
  std::vector<Complex> vc(gc.n());
  for (std::size_t j = 0; j < gc.n(); ++j) {
    vc[j] = Complex(std::tanh(std::sin(2.0 * kPi * gc.x(j)) / 0.35), 0.0);
  }
  const ComplexField psic(gc, vc);
  const auto fd1c = oracle::fd4_first(psic.values, gc.spacing());
  const ComplexField sp1c = gradient(psic);
  double err1c = 0.0;
  for (std::size_t j = 0; j < gc.n(); ++j) {
    err1c = std::max(err1c, std::abs(sp1c.values[j] - fd1c[j]));
  }
  const double ratio = err1c / err1;
  CHECK(ratio > 8.0);
  CHECK(ratio < 32.0);
}

TEST_CASE("mode_amplitude projections") {
  const Grid1D g(64, 2.0);
  ComplexField uniform(g, std::vector<Complex>(64, Complex(1.0 / std::sqrt(2.0), 0.0)));
  CHECK(std::abs(mode_amplitude(uniform, 0) - Complex(1.0, 0.0)) < 1e-13);

  std::vector<Complex> wave(64);
  for (std::size_t j = 0; j < 64; ++j) {
    const double ph = 2.0 * kPi * g.x(j) / g.length();
    wave[j] = Complex(std::cos(ph), std::sin(ph));
  }
  const ComplexField psi(g, wave);
  CHECK(std::abs(mode_amplitude(psi, 1) - Complex(std::sqrt(2.0), 0.0)) < 1e-12);
  CHECK(std::abs(mode_amplitude(psi, 0)) < 1e-13);
  CHECK_THROWS_AS(mode_amplitude(psi, 32), Error);
  CHECK_THROWS_AS(mode_amplitude(psi, -32), Error);
}

TEST_CASE("Parseval: mode amplitudes resolve the norm") {
  const Grid1D g(64, 1.5);
  oracle::Rng rng(7);
  std::vector<Complex> v(g.n());
  for (Complex& z : v) z = rng.complex_normal();
  const ComplexField psi(g, v);

  double total = 0.0;
  for (int m = -31; m <= 31; ++m) total += std::norm(mode_amplitude(psi, m));
  // The unmatched Nyquist mode m = -n/2 is outside mode_amplitude's domain.
  const auto modes = to_modes(psi);
  for (std::size_t j = 0; j < g.n(); ++j) {
    if (g.mode(j) == -32) total += std::norm(modes[j]) * g.length();
  }
  CHECK(total == doctest::Approx(norm_sq(psi)).epsilon(1e-12));
}

TEST_CASE("laplacian is self-adjoint and transforms round-trip") {
  const Grid1D g(32, 1.0);
  const ComplexField a = random_bandlimited(g, 3);
  const ComplexField b = random_bandlimited(g, 5);
  const Complex lhs = inner_product(a, laplacian(b));
  const Complex rhs = inner_product(laplacian(a), b);
  CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs));

  const auto modes = to_modes(a);
  const ComplexField back = field_from_modes(g, modes);
  for (std::size_t j = 0; j < g.n(); ++j) {
    CHECK(std::abs(back.values[j] - a.values[j]) < 1e-13 * std::abs(a.values[j]) + 1e-15);
  }
}
