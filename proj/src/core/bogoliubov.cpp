#include "bogoliubov.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <string>

#include "dynamics.hpp"
#include "spectral.hpp"

namespace mgpe {

DispersionPoint analytic_dispersion(double k, const ModelParams& p, double n0) {
  if (!(n0 >= 0.0) || !std::isfinite(k)) {
    fail(ErrorKind::Argument, "analytic_dispersion: bad arguments");
  }
  if (k == 0.0) {
    // Projection-protected phase mode: delta psi = i Psi, v/u = -1.
    return DispersionPoint{0.0, Complex(0.0, 0.0), Complex(-1.0, 0.0)};
  }
  const double lambda = p.lambda;
  const double a = 0.5 * k * k + p.coupling * n0;
  const double b = p.coupling * n0;
  // omega = -i lambda a + sqrt((1 + lambda^2)(a^2 - b^2) - lambda^2 a^2),
  // principal root, so Re >= 0 and Im <= 0. At lambda = 0 this is omega_B.
  const double disc = (1.0 + lambda * lambda) * (a * a - b * b) - lambda * lambda * a * a;
  const Complex root = std::sqrt(Complex(disc, 0.0));
  const Complex omega = Complex(0.0, -lambda * a) + root;
  const Complex il(0.0, lambda);
  const Complex v_over_u = -(1.0 + il) * b / (omega + (1.0 + il) * a);
  return DispersionPoint{k, omega, v_over_u};
}

TwoFrequencyFit fit_two_frequency(const std::vector<std::vector<Complex>>& series,
                                  double sample_dt) {
  std::size_t rows = 0;
  for (const auto& s : series) {
    if (s.size() < 6) fail(ErrorKind::Argument, "fit_two_frequency: series too short");
    rows += s.size() - 2;
  }
  if (!(sample_dt > 0.0)) fail(ErrorKind::Argument, "fit_two_frequency: bad sample_dt");

  // Linear prediction y[j+2] = c1 y[j+1] + c0 y[j], shared across series.
  Eigen::MatrixXcd lp(rows, 2);
  Eigen::VectorXcd target(rows);
  std::size_t r = 0;
  for (const auto& s : series) {
    for (std::size_t j = 0; j + 2 < s.size(); ++j, ++r) {
      lp(r, 0) = s[j];
      lp(r, 1) = s[j + 1];
      target(r) = s[j + 2];
    }
  }
  const Eigen::Vector2cd c = lp.colPivHouseholderQr().solve(target);
  const Complex c0 = c(0), c1 = c(1);

  // Roots of z^2 - c1 z - c0: z_minus carries exp(-i omega dt).
  const Complex disc = std::sqrt(c1 * c1 + 4.0 * c0);
  Complex z_minus = 0.5 * (c1 + disc);
  Complex z_plus = 0.5 * (c1 - disc);
  if (std::arg(z_minus) > std::arg(z_plus)) std::swap(z_minus, z_plus);

  const Complex omega_from_minus = Complex(0.0, 1.0) * std::log(z_minus) / sample_dt;
  const Complex omega_from_plus =
      std::conj(Complex(0.0, -1.0) * std::log(z_plus) / sample_dt);
  Complex omega = 0.5 * (omega_from_minus + omega_from_plus);
  if (omega.real() < 0.0) omega = -std::conj(omega);

  // Amplitudes per series by linear least squares, then the joint residual.
  double misfit = 0.0, power = 0.0;
  for (const auto& s : series) {
    const auto len = static_cast<Eigen::Index>(s.size());
    Eigen::MatrixXcd design(len, 2);
    Eigen::VectorXcd y(len);
    Complex pm(1.0, 0.0), pp(1.0, 0.0);
    for (Eigen::Index t = 0; t < len; ++t) {
      design(t, 0) = pm;
      design(t, 1) = pp;
      y(t) = s[static_cast<std::size_t>(t)];
      pm *= z_minus;
      pp *= z_plus;
    }
    const Eigen::Vector2cd amp = design.colPivHouseholderQr().solve(y);
    misfit += (design * amp - y).squaredNorm();
    power += y.squaredNorm();
  }
  const double residual = power > 0.0 ? std::sqrt(misfit / power) : 0.0;
  return TwoFrequencyFit{omega, residual};
}

namespace {

class FitFailure : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

}  // namespace

MeasuredDispersion measure_dispersion(const Grid1D& g, const ModelParams& p, int mode,
                                      const MeasureDispersionOptions& opts) {
  if (mode == 0 || std::abs(mode) >= static_cast<int>(g.n() / 2)) {
    fail(ErrorKind::Argument, "measure_dispersion: mode out of range");
  }
  if (!(opts.amplitude > 0.0) || opts.amplitude > 0.1) {
    fail(ErrorKind::Argument, "measure_dispersion: perturbation amplitude out of range");
  }

  const double n0 = 1.0 / g.length();
  ModelParams run = p;
  run.mu = p.coupling * n0;  // uniform background is stationary at this mu

  // Analytic point fixes only the sampling cadence; the fit itself is
  // independent of it.
  const double k = g.wavenumber_of_mode(mode);
  const DispersionPoint guess = analytic_dispersion(k, run, n0);
  const double omega_scale = std::max(std::abs(guess.omega), 1.0);

  const double dt = opts.dt > 0.0 ? opts.dt : auto_dt(g);
  const double period = 2.0 * kPi / omega_scale;
  const double window = std::max(opts.periods * period, 40.0 * dt);
  std::size_t samples = std::max<std::size_t>(opts.samples, 24);
  std::uint64_t stride = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(window / (static_cast<double>(samples) * dt)));
  // Keep the per-sample phase step comfortably under the aliasing limit.
  while (stride > 1 && omega_scale * static_cast<double>(stride) * dt > 1.5) stride /= 2;
  const double sample_dt = static_cast<double>(stride) * dt;
  samples = static_cast<std::size_t>(window / sample_dt) + 1;

  // psi = (1/sqrt(L)) (1 + amplitude cos(k x)).
  const std::size_t n = g.n();
  ComplexField psi = ComplexField::zeros(g);
  {
    const double amp0 = 1.0 / std::sqrt(g.length());
    for (std::size_t j = 0; j < n; ++j) {
      psi.values[j] = amp0 * (1.0 + opts.amplitude * std::cos(k * g.x(j)));
    }
  }

  // Recording vectors for <e_{+m}, psi> and <e_{-m}, psi>.
  std::vector<Complex> wp(n), wm(n);
  const double scale = g.spacing() / std::sqrt(g.length());
  for (std::size_t j = 0; j < n; ++j) {
    const double ph = k * g.x(j);
    wp[j] = scale * Complex(std::cos(ph), -std::sin(ph));
    wm[j] = scale * Complex(std::cos(ph), std::sin(ph));
  }
  auto project = [&](const std::vector<Complex>& w) {
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) acc += psi.values[j] * w[j];
    return acc;
  };

  std::vector<Complex> plus_series, minus_series;
  plus_series.reserve(samples);
  minus_series.reserve(samples);

  TrajectoryStepper stepper(g, run, DynamicsKind::Metriplectic);
  for (std::size_t s = 0; s < samples; ++s) {
    plus_series.push_back(project(wp));
    minus_series.push_back(project(wm));
    if (s + 1 == samples) break;
    for (std::uint64_t i = 0; i < stride; ++i) stepper.step(psi, dt);
  }

  const TwoFrequencyFit fit = fit_two_frequency({plus_series, minus_series}, sample_dt);
  if (fit.residual > 1e-3) {
    throw FitFailure(fit.residual,
                     "dispersion fit residual " + std::to_string(fit.residual) +
                         " exceeds 1e-3 of the signal for mode " + std::to_string(mode) +
                         " (" + std::to_string(plus_series.size()) + " samples, window " +
                         std::to_string(window) + ")");
  }

  MeasuredDispersion out;
  out.point.k = k;
  out.point.omega = fit.omega;
  // Amplitude ratio of the fitted root within the same linearized system.
  {
    const double lambda = run.lambda;
    const double a = 0.5 * k * k + run.coupling * n0;
    const double b = run.coupling * n0;
    const Complex il(0.0, lambda);
    out.point.v_over_u = -(1.0 + il) * b / (fit.omega + (1.0 + il) * a);
  }
  out.residual = fit.residual;
  out.window = sample_dt * static_cast<double>(plus_series.size() - 1);
  out.samples = plus_series.size();
  return out;
}

StabilityReport linearized_stability_report(const ComplexField& psi, const ModelParams& p) {
  const std::size_t n = psi.n();
  if (n > 512) {
    fail(ErrorKind::Argument, "stability report capped at 512 grid points");
  }
  const double nsq = norm_sq(psi);
  if (!(nsq > 0.0)) fail(ErrorKind::Argument, "stability report: zero-norm state");

  // Re-gauge mu so the state is a fixed point of the rotating-frame flow.
  ModelParams gauged = p;
  {
    const ComplexField eta_raw = gp_operator(psi, p);
    gauged.mu = p.mu + inner_product(psi, eta_raw).real() / nsq;
  }
  const ComplexField eta = gp_operator(psi, gauged);
  const ComplexField q_eta = project_q(psi, eta);
  const double residual = std::sqrt(norm_sq(q_eta) / nsq);
  if (!(residual < 1e-6)) {
    fail(ErrorKind::Argument,
         "stability report needs a stationary state: ||Q eta||/||psi|| = " +
             std::to_string(residual));
  }

  const Complex s_overlap = inner_product(psi, eta);
  const double lambda = gauged.lambda;

  // Exact Gateaux derivative of the metriplectic right-hand side at psi.
  auto linop = [&](const ComplexField& delta) {
    ComplexField d_eta = laplacian(delta);
    const double* v = gauged.has_potential() ? gauged.potential->data() : nullptr;
    for (std::size_t j = 0; j < n; ++j) {
      const double vr = v ? v[j] : 0.0;
      const Complex psi_j = psi.values[j];
      d_eta.values[j] = -0.5 * d_eta.values[j] +
                        (vr - gauged.mu + 2.0 * gauged.coupling * std::norm(psi_j)) *
                            delta.values[j] +
                        gauged.coupling * psi_j * psi_j * std::conj(delta.values[j]);
    }
    const Complex d_s = inner_product(delta, eta) + inner_product(psi, d_eta);
    const double d_n = 2.0 * inner_product(psi, delta).real();
    ComplexField out = ComplexField::zeros(psi.grid);
    const Complex i_unit(0.0, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
      const Complex d_q = d_eta.values[j] - delta.values[j] * (s_overlap / nsq) -
                          psi.values[j] * (d_s / nsq) +
                          psi.values[j] * (s_overlap * d_n / (nsq * nsq));
      out.values[j] = -i_unit * d_eta.values[j] - lambda * d_q;
    }
    return out;
  };

  // Real 2n x 2n matrix over the (Re, Im) split.
  const auto dim = static_cast<Eigen::Index>(2 * n);
  Eigen::MatrixXd a_full(dim, dim);
  ComplexField delta = ComplexField::zeros(psi.grid);
  for (std::size_t j = 0; j < 2 * n; ++j) {
    const std::size_t site = j % n;
    const bool imag_part = j >= n;
    delta.values[site] = imag_part ? Complex(0.0, 1.0) : Complex(1.0, 0.0);
    const ComplexField out = linop(delta);
    delta.values[site] = Complex(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      a_full(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = out.values[i].real();
      a_full(static_cast<Eigen::Index>(i + n), static_cast<Eigen::Index>(j)) =
          out.values[i].imag();
    }
  }

  // Restrict to the norm-preserving tangent space and deflate the exact
  // gauge neutral (global phase). Both are assembled as R^{2n} directions.
  std::vector<Eigen::VectorXd> removed;
  auto embed = [&](const Complex* field) {
    Eigen::VectorXd v(dim);
    for (std::size_t i = 0; i < n; ++i) {
      v(static_cast<Eigen::Index>(i)) = field[i].real();
      v(static_cast<Eigen::Index>(i + n)) = field[i].imag();
    }
    return v;
  };
  {
    Eigen::VectorXd norm_dir = embed(psi.values.data());
    removed.push_back(norm_dir.normalized());
    std::vector<Complex> phase(n);
    for (std::size_t i = 0; i < n; ++i) phase[i] = Complex(0.0, 1.0) * psi.values[i];
    Eigen::VectorXd phase_dir = embed(phase.data());
    for (const auto& d : removed) phase_dir -= d.dot(phase_dir) * d;
    removed.push_back(phase_dir.normalized());
  }
  std::size_t deflated_neutrals = 1;  // the phase mode lives on the leaf

  Eigen::MatrixXd d_mat(dim, static_cast<Eigen::Index>(removed.size()));
  for (std::size_t c = 0; c < removed.size(); ++c) {
    d_mat.col(static_cast<Eigen::Index>(c)) = removed[c];
  }
  const Eigen::MatrixXd q_full =
      Eigen::HouseholderQR<Eigen::MatrixXd>(d_mat).householderQ();
  const Eigen::MatrixXd basis =
      q_full.rightCols(dim - static_cast<Eigen::Index>(removed.size()));
  const Eigen::MatrixXd a_restricted = basis.transpose() * a_full * basis;

  const Eigen::EigenSolver<Eigen::MatrixXd> solver(a_restricted);
  if (solver.info() != Eigen::Success) {
    fail(ErrorKind::Convergence, "stability eigensolve failed");
  }

  // Eigenvalues indistinguishable from a defective zero cluster (translation
  // and its generalized partner, soft internal modes) are treated as neutral.
  const double cluster_tol =
      std::sqrt(std::numeric_limits<double>::epsilon()) * a_restricted.norm();
  double max_growth = 0.0;
  std::size_t near_zero = deflated_neutrals;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const std::complex<double> ev = solver.eigenvalues()(i);
    if (std::abs(ev) < cluster_tol) {
      ++near_zero;
      continue;
    }
    max_growth = std::max(max_growth, ev.real());
  }

  StabilityReport rep;
  rep.max_growth_rate = max_growth;
  rep.near_zero_modes = near_zero;
  rep.all_decay = max_growth <= 1e-8;
  rep.matrix_dim = static_cast<std::size_t>(a_restricted.rows());
  rep.eigenvalues.reserve(rep.matrix_dim);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    rep.eigenvalues.push_back(solver.eigenvalues()(i));
  }
  return rep;
}

}  // namespace mgpe
