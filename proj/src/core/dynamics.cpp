#include "dynamics.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "fft.hpp"
#include "spectral.hpp"

namespace mgpe {

double LambdaSchedule::total_duration() const {
  double sum = 0.0;
  for (const Stage& s : stages) sum += s.duration;
  return sum;
}

void LambdaSchedule::validate() const {
  if (stages.empty()) fail(ErrorKind::Argument, "schedule has no stages");
  for (const Stage& s : stages) {
    if (!(s.duration > 0.0) || !std::isfinite(s.duration)) {
      fail(ErrorKind::Argument, "stage durations must be positive and finite");
    }
    if (!(s.lambda >= 0.0) || !std::isfinite(s.lambda)) {
      fail(ErrorKind::Argument, "stage lambda must be finite and >= 0");
    }
  }
}

double rk4_stability_limit(const Grid1D& g) {
  const double k_max = g.max_wavenumber();
  return 2.8 / (0.5 * k_max * k_max);
}

double auto_dt(const Grid1D& g) { return 0.4 * rk4_stability_limit(g); }

namespace {

// Splits a stage duration into full steps of size dt plus an optional
// shortened final step that lands exactly on the stage boundary.
struct StageSteps {
  std::uint64_t full;
  double remainder;
};

StageSteps split_stage(double duration, double dt) {
  double ratio = duration / dt;
  auto full = static_cast<std::uint64_t>(ratio + 1e-9);
  double remainder = duration - static_cast<double>(full) * dt;
  if (remainder < dt * 1e-9) remainder = 0.0;
  return {full, remainder};
}

bool buffer_finite(const std::vector<Complex>& v) {
  for (const Complex& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

// RK4 stepper with preallocated workspaces. One instance drives one
// trajectory; it holds no shared mutable state.
class Rk4Stepper {
 public:
  Rk4Stepper(const Grid1D& grid, const ModelParams& p, DynamicsKind kind)
      : grid_(grid),
        p_(p),
        kind_(kind),
        lambda_(p.lambda),
        fft_(fft_for(grid.n())),
        k1_(grid.n()),
        k2_(grid.n()),
        k3_(grid.n()),
        k4_(grid.n()),
        stage_(grid.n()),
        eta_(grid.n()),
        modes_(grid.n()) {}

  void set_lambda(double lambda) { lambda_ = lambda; }
  double lambda() const { return lambda_; }

  void rhs_into(std::vector<Complex>& out, const std::vector<Complex>& psi) {
    const std::size_t n = psi.size();
    fft_.forward(psi, modes_);
    for (std::size_t j = 0; j < n; ++j) {
      const double k = grid_.wavenumber(j);
      modes_[j] *= 0.5 * k * k;
    }
    fft_.inverse(modes_, eta_);
    const double* v = p_.has_potential() ? p_.potential->data() : nullptr;
    for (std::size_t j = 0; j < n; ++j) {
      const double vr = v ? v[j] : 0.0;
      eta_[j] += (vr - p_.mu + p_.coupling * std::norm(psi[j])) * psi[j];
    }

    const bool dissipative = kind_ != DynamicsKind::Conservative && lambda_ != 0.0;
    if (!dissipative) {
      for (std::size_t j = 0; j < n; ++j) {
        out[j] = Complex(eta_[j].imag(), -eta_[j].real());  // -i eta
      }
      return;
    }
    if (kind_ == DynamicsKind::Pitaevskii) {
      const Complex factor(-lambda_, -1.0);  // (1 - i lambda)(-i) = -i - lambda
      for (std::size_t j = 0; j < n; ++j) out[j] = factor * eta_[j];
      return;
    }
    // Metriplectic: -i eta - lambda (eta - psi <psi,eta>/||psi||^2).
    Complex overlap(0.0, 0.0);
    double nsq = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      overlap += std::conj(psi[j]) * eta_[j];
      nsq += std::norm(psi[j]);
    }
    if (!(nsq > 0.0)) {
      fail(ErrorKind::Argument, "metriplectic dynamics on a zero-norm state");
    }
    const Complex c = overlap / nsq;
    for (std::size_t j = 0; j < n; ++j) {
      const Complex q = eta_[j] - c * psi[j];
      out[j] = Complex(eta_[j].imag(), -eta_[j].real()) - lambda_ * q;
    }
  }

  void step(std::vector<Complex>& psi, double dt, std::uint64_t step_index, double t) {
    const std::size_t n = psi.size();
    rhs_into(k1_, psi);
    check_stage(k1_, 1, step_index, t);
    for (std::size_t j = 0; j < n; ++j) stage_[j] = psi[j] + 0.5 * dt * k1_[j];
    rhs_into(k2_, stage_);
    check_stage(k2_, 2, step_index, t);
    for (std::size_t j = 0; j < n; ++j) stage_[j] = psi[j] + 0.5 * dt * k2_[j];
    rhs_into(k3_, stage_);
    check_stage(k3_, 3, step_index, t);
    for (std::size_t j = 0; j < n; ++j) stage_[j] = psi[j] + dt * k3_[j];
    rhs_into(k4_, stage_);
    check_stage(k4_, 4, step_index, t);
    const double w = dt / 6.0;
    for (std::size_t j = 0; j < n; ++j) {
      psi[j] += w * (k1_[j] + 2.0 * k2_[j] + 2.0 * k3_[j] + k4_[j]);
    }
  }

 private:
  void check_stage(const std::vector<Complex>& v, int stage, std::uint64_t step,
                   double t) const {
    if (buffer_finite(v)) return;
    throw DivergenceError(step, stage, t,
                          "divergence at step " + std::to_string(step) + ", RK4 stage " +
                              std::to_string(stage) + ", t = " + std::to_string(t));
  }

  Grid1D grid_;
  ModelParams p_;
  DynamicsKind kind_;
  double lambda_;
  Fft& fft_;
  std::vector<Complex> k1_, k2_, k3_, k4_, stage_, eta_, modes_;
};

}  // namespace

struct TrajectoryStepper::Impl {
  Impl(const Grid1D& g, const ModelParams& p, DynamicsKind kind)
      : stepper(g, p, kind) {}
  Rk4Stepper stepper;
  std::uint64_t count = 0;
  double t = 0.0;
};

TrajectoryStepper::TrajectoryStepper(const Grid1D& g, const ModelParams& p,
                                     DynamicsKind kind)
    : impl_(std::make_unique<Impl>(g, p, kind)) {
  p.validate(g);
}

TrajectoryStepper::~TrajectoryStepper() = default;
TrajectoryStepper::TrajectoryStepper(TrajectoryStepper&&) noexcept = default;
TrajectoryStepper& TrajectoryStepper::operator=(TrajectoryStepper&&) noexcept = default;

void TrajectoryStepper::set_lambda(double lambda) { impl_->stepper.set_lambda(lambda); }

void TrajectoryStepper::step(ComplexField& psi, double dt) {
  impl_->stepper.step(psi.values, dt, impl_->count, impl_->t);
  ++impl_->count;
  impl_->t += dt;
}

std::uint64_t planned_steps(const LambdaSchedule& s, double dt) {
  std::uint64_t total = 0;
  for (const auto& stage : s.stages) {
    const StageSteps split = split_stage(stage.duration, dt);
    total += split.full + (split.remainder > 0.0 ? 1 : 0);
  }
  return total;
}

ComplexField rhs(const ComplexField& psi, const ModelParams& p, DynamicsKind kind) {
  p.validate(psi.grid);
  Rk4Stepper stepper(psi.grid, p, kind);
  ComplexField out = ComplexField::zeros(psi.grid);
  stepper.rhs_into(out.values, psi.values);
  return out;
}

ComplexField step_rk4(const ComplexField& psi, const ModelParams& p,
                      DynamicsKind kind, double dt) {
  p.validate(psi.grid);
  // Negative dt steps backward in time (useful for centered differences).
  if (dt == 0.0 || !std::isfinite(dt)) {
    fail(ErrorKind::Argument, "dt must be nonzero and finite");
  }
  if (std::abs(dt) > rk4_stability_limit(psi.grid) * (1.0 + 1e-12)) {
    fail(ErrorKind::Argument, "dt exceeds the RK4 stability bound");
  }
  Rk4Stepper stepper(psi.grid, p, kind);
  ComplexField out = psi;
  stepper.step(out.values, dt, 0, 0.0);
  return out;
}

ComplexField evolve(const ComplexField& psi0, const ModelParams& p,
                    DynamicsKind kind, const LambdaSchedule& schedule,
                    const EvolutionConfig& cfg, const EvolveSinks& sinks) {
  p.validate(psi0.grid);
  schedule.validate();
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
    fail(ErrorKind::Argument, "dt must be positive and finite");
  }
  const double bound = rk4_stability_limit(psi0.grid);
  if (cfg.dt > bound * (1.0 + 1e-12)) {
    fail(ErrorKind::Argument,
         "dt = " + std::to_string(cfg.dt) + " exceeds the RK4 stability bound " +
             std::to_string(bound));
  }
  if (cfg.dt > 0.5 * bound && sinks.warn) {
    sinks.warn("dt = " + std::to_string(cfg.dt) + " is above half the RK4 stability bound " +
               std::to_string(bound) + "; proceeding");
  }
  if (!all_finite(psi0)) fail(ErrorKind::Argument, "initial state contains NaN/Inf");

  ComplexField psi = psi0;
  const double initial_norm = norm_sq(psi);
  Rk4Stepper stepper(psi.grid, p, kind);
  ModelParams stage_params = p;

  std::uint64_t step_index = 0;
  double t = 0.0;
  double stage_start = 0.0;

  auto emit = [&](bool force_observable, bool force_snapshot) {
    if (sinks.observable && cfg.observable_stride > 0 &&
        (force_observable || step_index % cfg.observable_stride == 0)) {
      sinks.observable(observables(psi, stage_params, t));
    }
    if (sinks.snapshot && cfg.snapshot_stride > 0 &&
        (force_snapshot || step_index % cfg.snapshot_stride == 0)) {
      sinks.snapshot(t, stage_params.lambda, psi);
    }
  };

  for (const auto& stage : schedule.stages) {
    stepper.set_lambda(stage.lambda);
    stage_params.lambda = stage.lambda;
    const StageSteps split = split_stage(stage.duration, cfg.dt);

    for (std::uint64_t i = 0; i < split.full; ++i) {
      emit(false, false);
      stepper.step(psi.values, cfg.dt, step_index, t);
      ++step_index;
      t = stage_start + static_cast<double>(i + 1) * cfg.dt;
      if (cfg.renormalize) {
        const double scale = std::sqrt(initial_norm / norm_sq(psi));
        for (Complex& z : psi.values) z *= scale;
      }
    }
    if (split.remainder > 0.0) {
      emit(false, false);
      stepper.step(psi.values, split.remainder, step_index, t);
      ++step_index;
      if (cfg.renormalize) {
        const double scale = std::sqrt(initial_norm / norm_sq(psi));
        for (Complex& z : psi.values) z *= scale;
      }
    }
    stage_start += stage.duration;
    t = stage_start;
  }

  emit(true, true);
  return psi;
}

GroundStateResult ground_state_ite(const ComplexField& psi0, const ModelParams& p,
                                   double tol, std::uint64_t max_iters) {
  p.validate(psi0.grid);
  if (!(tol > 0.0)) fail(ErrorKind::Argument, "tol must be positive");
  const double initial = norm_sq(psi0);
  if (!(initial > 0.0)) fail(ErrorKind::Argument, "ground_state_ite: zero-norm start");

  ComplexField psi = psi0;
  {
    const double scale = 1.0 / std::sqrt(initial);
    for (Complex& z : psi.values) z *= scale;
  }

  // Explicit descent on the stiff kinetic operator: the step must stay under
  // 2 / (largest curvature), otherwise the highest modes flip sign and the
  // line search thrashes. The cap tracks the current density.
  double pot_span = std::abs(p.mu);
  if (p.has_potential()) {
    for (double v : *p.potential) pot_span = std::max(pot_span, std::abs(v - p.mu));
  }
  const double k_max = psi.grid.max_wavenumber();
  auto tau_cap = [&](const ComplexField& state) {
    double max_rho = 0.0;
    for (const Complex& z : state.values) max_rho = std::max(max_rho, std::norm(z));
    return 1.9 / (0.5 * k_max * k_max + 2.0 * p.coupling * max_rho + pot_span + 1.0);
  };
  double tau = 0.5 * tau_cap(psi);

  double f_current = free_energy(psi, p);
  double residual = 0.0;

  for (std::uint64_t it = 0; it < max_iters; ++it) {
    const ComplexField eta = gp_operator(psi, p);
    const ComplexField direction = project_q(psi, eta);
    residual = std::sqrt(norm_sq(direction));
    if (residual < tol) {
      ModelParams free = p;
      free.mu = 0.0;
      const ComplexField eta0 = gp_operator(psi, free);
      const double mu = inner_product(psi, eta0).real() / norm_sq(psi);
      return GroundStateResult{std::move(psi), mu, residual, it};
    }

    bool accepted = false;
    tau = std::min(tau, tau_cap(psi));
    for (int bt = 0; bt < 64; ++bt) {
      ComplexField cand = psi;
      for (std::size_t j = 0; j < cand.n(); ++j) {
        cand.values[j] -= tau * direction.values[j];
      }
      const double cn = norm_sq(cand);
      if (cn > 0.0 && all_finite(cand)) {
        const double scale = 1.0 / std::sqrt(cn);
        for (Complex& z : cand.values) z *= scale;
        const double f_cand = free_energy(cand, p);
        // Near the minimum the true decrease per step drops below the
        // round-off noise of evaluating F; accept within that noise band so
        // the contraction can keep driving the residual down.
        const double f_noise =
            64.0 * std::numeric_limits<double>::epsilon() * (std::abs(f_current) + 1.0);
        if (f_cand <= f_current + f_noise) {
          psi = std::move(cand);
          f_current = std::min(f_current, f_cand);
          tau = std::min(tau * 1.25, tau_cap(psi));
          accepted = true;
          break;
        }
      }
      tau *= 0.5;
    }
    if (!accepted) {
      throw ConvergenceError(residual,
                             "ground-state descent stalled at residual " +
                                 std::to_string(residual) + " (tol " + std::to_string(tol) + ")");
    }
  }
  throw ConvergenceError(residual, "ground-state descent hit the iteration cap with residual " +
                                       std::to_string(residual));
}

}  // namespace mgpe
