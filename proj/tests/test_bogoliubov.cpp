#include "doctest.h"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "core/bogoliubov.hpp"
#include "core/dynamics.hpp"
#include "core/spectral.hpp"
#include "core/states.hpp"
#include "oracles.hpp"

using namespace mgpe;

namespace {

// Direct numerical root of the damped 2x2 system for plane-wave
// fluctuations, assembled independently of the closed form under test.
// Root selection mirrors the implementation: oscillating root with Re >= 0,
// or the slow-decaying one when the mode is overdamped (both Re = 0).
Complex eigensolve_dispersion(double k, double g_n0, double lambda) {
  const double a = 0.5 * k * k + g_n0;
  const double b = g_n0;
  const Complex one_m(1.0, -lambda), one_p(1.0, lambda);
  Eigen::Matrix2cd m;
  m << one_m * a, one_m * b, -one_p * b, -one_p * a;
  const Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(m);
  Complex best = es.eigenvalues()(0);
  for (int i = 0; i < 2; ++i) {
    const Complex ev = es.eigenvalues()(i);
    if (ev.real() > best.real() + 1e-12 * std::abs(best) ||
        (std::abs(ev.real() - best.real()) <= 1e-12 * std::abs(best) &&
         ev.imag() > best.imag())) {
      best = ev;
    }
  }
  return best;
}

double omega_bogoliubov(double k, double g_n0) {
  const double eps = 0.5 * k * k;
  return std::sqrt(eps * (eps + 2.0 * g_n0));
}

}  // namespace

TEST_CASE("analytic dispersion: free-particle and Bogoliubov limits") {
  ModelParams p;
  p.coupling = 0.0;
  p.lambda = 0.0;
  const double k = 2.0 * kPi;
  const DispersionPoint free = analytic_dispersion(k, p, 1.0);
  CHECK(free.omega.real() == doctest::Approx(0.5 * k * k).epsilon(1e-14));
  CHECK(free.omega.imag() == doctest::Approx(0.0));
  CHECK(std::abs(free.v_over_u) < 1e-14);

  p.coupling = 1.0e4;
  const DispersionPoint bog = analytic_dispersion(k, p, 1.0);
  CHECK(bog.omega.real() == doctest::Approx(omega_bogoliubov(k, 1.0e4)).epsilon(1e-13));
  CHECK(bog.omega.imag() == doctest::Approx(0.0));
}

TEST_CASE("analytic dispersion agrees with a direct 2x2 eigensolve") {
  for (double lambda : {0.0, 0.01, 0.1}) {
    for (int m : {1, 2, 4, 8}) {
      const double k = 2.0 * kPi * m;
      ModelParams p;
      p.coupling = 1.0e4;
      p.lambda = lambda;
      const DispersionPoint pt = analytic_dispersion(k, p, 1.0);
      const Complex ref = eigensolve_dispersion(k, 1.0e4, lambda);
      CHECK(std::abs(pt.omega - ref) < 1e-12 * std::abs(ref));
    }
  }
}

TEST_CASE("analytic dispersion is continuous in lambda and damped for lambda > 0") {
  ModelParams p;
  p.coupling = 5.0e3;
  const double k = 4.0 * kPi;
  p.lambda = 0.0;
  const Complex base = analytic_dispersion(k, p, 1.0).omega;
  double prev_gap = 1e9;
  for (double lambda : {1e-2, 1e-3, 1e-4, 1e-5}) {
    p.lambda = lambda;
    const Complex omega = analytic_dispersion(k, p, 1.0).omega;
    const double gap = std::abs(omega - base);
    CHECK(gap < prev_gap);
    prev_gap = gap;
    CHECK(omega.imag() < 0.0);
    CHECK(omega.imag() > -2.0 * lambda * (0.5 * k * k + p.coupling));
  }

  // Small-lambda expansion: Im(omega) ~ -lambda (k^2/2 + G n0).
  p.lambda = 1e-3;
  const Complex omega = analytic_dispersion(k, p, 1.0).omega;
  CHECK(omega.imag() ==
        doctest::Approx(-p.lambda * (0.5 * k * k + p.coupling)).epsilon(1e-4));
}

TEST_CASE("analytic dispersion: sound speed at long wavelength, zero mode at k = 0") {
  ModelParams p;
  p.coupling = 1.0e4;
  const double c_s = std::sqrt(p.coupling);

  // Undamped phonons: Re(omega)/k -> c_s from above as k -> 0.
  p.lambda = 0.0;
  for (double k : {0.05, 0.02, 0.01}) {
    const DispersionPoint pt = analytic_dispersion(k, p, 1.0);
    CHECK(pt.omega.real() / k == doctest::Approx(c_s).epsilon(1e-6));
  }

  // Weak damping, underdamped window: phonons still travel at ~c_s and decay.
  p.lambda = 1e-3;
  for (double k : {2.0, 4.0}) {
    const DispersionPoint pt = analytic_dispersion(k, p, 1.0);
    CHECK(pt.omega.real() / k == doctest::Approx(c_s).epsilon(5e-3));
    CHECK(pt.omega.imag() < 0.0);
  }

  // Below lambda*G*n0/c_s the determinant's phonon branch is overdamped:
  // the mode stops oscillating but still decays.
  p.lambda = 0.01;
  const DispersionPoint od = analytic_dispersion(0.05, p, 1.0);
  CHECK(od.omega.real() == doctest::Approx(0.0));
  CHECK(od.omega.imag() < 0.0);

  const DispersionPoint zero = analytic_dispersion(0.0, p, 1.0);
  CHECK(zero.omega == Complex(0.0, 0.0));
  CHECK(zero.v_over_u == Complex(-1.0, 0.0));
}

TEST_CASE("analytic v_over_u matches the eigenvector of the 2x2 system") {
  ModelParams p;
  p.coupling = 2.0e3;
  p.lambda = 0.05;
  const double k = 2.0 * kPi * 3;
  const DispersionPoint pt = analytic_dispersion(k, p, 1.0);

  const double a = 0.5 * k * k + p.coupling;
  const double b = p.coupling;
  const Complex one_m(1.0, -p.lambda), one_p(1.0, p.lambda);
  Eigen::Matrix2cd m;
  m << one_m * a, one_m * b, -one_p * b, -one_p * a;
  const Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(m);
  const int pick = es.eigenvalues()(0).real() > es.eigenvalues()(1).real() ? 0 : 1;
  const Complex ratio = es.eigenvectors()(1, pick) / es.eigenvectors()(0, pick);
  CHECK(std::abs(pt.v_over_u - ratio) < 1e-10 * std::abs(ratio));
}

TEST_CASE("two-frequency fit recovers synthetic damped modes exactly") {
  const double dt = 2e-4;
  const Complex omega(613.2, -87.5);
  std::vector<Complex> series_a(150), series_b(150);
  const Complex a1(3e-5, 1e-5), a2(-1e-5, 2e-5), b1(2e-5, -2e-5), b2(1e-5, 1e-5);
  for (std::size_t i = 0; i < series_a.size(); ++i) {
    const double t = dt * static_cast<double>(i);
    const Complex em = std::exp(Complex(0.0, -1.0) * omega * t);
    const Complex ep = std::exp(Complex(0.0, 1.0) * std::conj(omega) * t);
    series_a[i] = a1 * em + a2 * ep;
    series_b[i] = b1 * em + b2 * ep;
  }
  const TwoFrequencyFit fit = fit_two_frequency({series_a, series_b}, dt);
  CHECK(std::abs(fit.omega - omega) < 1e-9 * std::abs(omega));
  CHECK(fit.residual < 1e-10);
}

TEST_CASE("measured dispersion matches the analytic prediction to 0.5%") {
  const Grid1D g(256, 1.0);
  for (double lambda : {0.0, 0.01}) {
    for (int mode : {1, 2}) {
      ModelParams p;
      p.coupling = 400.0;
      p.lambda = lambda;
      const MeasuredDispersion m = measure_dispersion(g, p, mode);
      const DispersionPoint ref = analytic_dispersion(m.point.k, p, 1.0 / g.length());
      CHECK(std::abs(m.point.omega - ref.omega) < 5e-3 * std::abs(ref.omega));
      if (lambda == 0.0) {
        CHECK(std::abs(m.point.omega.imag()) < 1e-3 * m.point.omega.real());
      }
      CHECK(m.residual < 1e-3);
    }
  }
}

TEST_CASE("measured dispersion is linear: halving the probe amplitude moves omega < 0.05%") {
  const Grid1D g(256, 1.0);
  ModelParams p;
  p.coupling = 400.0;
  p.lambda = 0.01;
  MeasureDispersionOptions opts;
  opts.amplitude = 1e-4;
  const MeasuredDispersion full = measure_dispersion(g, p, 1, opts);
  opts.amplitude = 5e-5;
  const MeasuredDispersion half = measure_dispersion(g, p, 1, opts);
  CHECK(std::abs(full.point.omega - half.point.omega) < 5e-4 * std::abs(full.point.omega));
}

TEST_CASE("stability report: uniform state with damping") {
  const Grid1D g(128, 1.0);
  ModelParams p;
  p.coupling = 100.0;
  p.mu = 100.0;
  p.lambda = 0.01;
  const StabilityReport rep = linearized_stability_report(uniform_state(g), p);
  CHECK(rep.all_decay);
  CHECK(rep.max_growth_rate <= 1e-8);
  CHECK(rep.near_zero_modes == 1);  // the global phase, nothing else
  CHECK(rep.matrix_dim == 2 * g.n() - 2);

  // Every non-neutral eigenvalue decays at a rate set by lambda.
  for (const Complex& ev : rep.eigenvalues) {
    if (std::abs(ev) < 1e-6) continue;
    CHECK(ev.real() < -1e-3);
  }
}

TEST_CASE("stability report: undamped uniform spectrum is +/- i omega_B") {
  const Grid1D g(128, 1.0);
  ModelParams p;
  p.coupling = 100.0;
  p.mu = 100.0;
  p.lambda = 0.0;
  const StabilityReport rep = linearized_stability_report(uniform_state(g), p);

  // Each spatial mode contributes a +/- i omega_B pair, so every enumerated
  // k appears twice in the |Im| multiset; the deflated phase neutral adds 0.
  std::vector<double> expected;
  expected.push_back(0.0);
  for (std::size_t j = 0; j < g.n(); ++j) {
    const int m = g.mode(j);
    if (m == 0) continue;
    const double w = omega_bogoliubov(std::abs(g.wavenumber(j)), p.coupling / g.length());
    expected.push_back(w);
    expected.push_back(w);
  }
  std::sort(expected.begin(), expected.end());

  std::vector<double> got;
  for (const Complex& ev : rep.eigenvalues) {
    CHECK(std::abs(ev.real()) < 1e-8);  // purely imaginary spectrum
    got.push_back(std::abs(ev.imag()));
  }
  got.push_back(0.0);  // the deflated phase neutral
  std::sort(got.begin(), got.end());

  REQUIRE(got.size() == expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(std::abs(got[i] - expected[i]) < 1e-8 * (1.0 + expected[i]));
  }
}

TEST_CASE("stability report: black-soliton pair is neutral without damping") {
  const Grid1D g(512, 1.0);
  ModelParams p;
  p.coupling = 3000.0;
  p.lambda = 0.0;
  const ComplexField psi = two_soliton_state(g, p, {0.25, 0.0}, {0.75, 0.0});
  const StabilityReport rep = linearized_stability_report(psi, p);
  // Conservative dynamics around the stationary pair: purely imaginary
  // spectrum, no growth.
  CHECK(rep.all_decay);
  for (const Complex& ev : rep.eigenvalues) CHECK(std::abs(ev.real()) < 1e-8);
  // Phase neutral, plus the translation sector of the pair.
  CHECK(rep.near_zero_modes >= 2);
}

TEST_CASE("stability report: damping turns the soliton saddle into a slow instability") {
  // A black soliton is a saddle of F at fixed norm: its graying mode carries
  // negative fluctuation energy, so norm-conserving dissipation amplifies it
  // at a rate ~ lambda |A|. This is the same channel that makes seeded gray
  // solitons decay; for an exactly black pair it only acts on round-off.
  const Grid1D g(512, 1.0);
  ModelParams p;
  p.coupling = 3000.0;
  p.lambda = 0.01;
  const ComplexField psi = two_soliton_state(g, p, {0.25, 0.0}, {0.75, 0.0});
  const StabilityReport rep = linearized_stability_report(psi, p);
  CHECK_FALSE(rep.all_decay);
  CHECK(rep.max_growth_rate > 1.0);
  CHECK(rep.max_growth_rate < 10.0 * p.lambda * p.coupling);

  // Cross-validate the linear rate against the nonlinear flow: seed noise and
  // track the density minimum, which rises like exp(2 * growth * t).
  ModelParams run = p;
  run.mu = observables(psi, p, 0.0).mu_mean;
  ComplexField seeded = psi;
  const ComplexField noise = noise_state(g, 99);
  for (std::size_t j = 0; j < g.n(); ++j) {
    seeded.values[j] += 1e-7 * noise.values[j];
  }
  const double s = 1.0 / std::sqrt(norm_sq(seeded));
  for (Complex& z : seeded.values) z *= s;

  const double dt = auto_dt(g);
  TrajectoryStepper stepper(g, run, DynamicsKind::Metriplectic);
  auto min_density = [&](const ComplexField& f) {
    const auto rho = density(f);
    double mn = rho[0];
    for (double r : rho) mn = std::min(mn, r);
    return mn;
  };
  const double t_window = 0.05;
  const auto steps = static_cast<std::uint64_t>(t_window / dt);
  // Let the non-growing transients die out before reading the slope.
  for (std::uint64_t i = 0; i < steps; ++i) stepper.step(seeded, dt);
  const double rho_a = min_density(seeded);
  for (std::uint64_t i = 0; i < steps; ++i) stepper.step(seeded, dt);
  const double rho_b = min_density(seeded);

  const double measured_growth = std::log(rho_b / rho_a) / (2.0 * t_window);
  CHECK(measured_growth == doctest::Approx(rep.max_growth_rate).epsilon(0.25));
}

TEST_CASE("stability report rejects non-stationary input") {
  const Grid1D g(128, 1.0);
  ModelParams p;
  p.coupling = 100.0;
  CHECK_THROWS_AS(linearized_stability_report(noise_state(g, 3), p), Error);
  CHECK_THROWS_AS(linearized_stability_report(uniform_state(Grid1D(1024, 1.0)), p), Error);
}
