#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "model.hpp"

namespace mgpe {

// The three right-hand sides, all driven by eta = delta F / delta psi*:
//   Conservative:  d psi/dt = -i eta
//   Pitaevskii:    d psi/dt = (1 - i lambda)(-i eta) = -i eta - lambda eta
//   Metriplectic:  d psi/dt = -i eta - lambda Q eta
// Metriplectic with lambda = 0 runs the conservative code path.
enum class DynamicsKind { Conservative, Pitaevskii, Metriplectic };

// Piecewise-constant dissipation stages; lambda switches discontinuously at
// stage boundaries.
struct LambdaSchedule {
  struct Stage {
    double duration;
    double lambda;
  };
  std::vector<Stage> stages;

  static LambdaSchedule constant(double duration, double lambda) {
    return LambdaSchedule{{{duration, lambda}}};
  }
  double total_duration() const;
  void validate() const;
};

struct EvolutionConfig {
  double dt = 0.0;                     // must be positive and under the bound
  std::uint64_t observable_stride = 1; // 0 disables observable records
  std::uint64_t snapshot_stride = 0;   // 0 disables snapshots
  bool renormalize = false;            // rescale to the initial norm each step
};

// Largest stable RK4 step for the kinetic spectrum: 2.8 / (k_max^2 / 2).
double rk4_stability_limit(const Grid1D& g);
// The dt = auto rule: 0.4 times the stability limit.
double auto_dt(const Grid1D& g);

// Number of RK4 steps evolve() will take: full steps of size dt per stage
// plus one shortened step per stage when dt does not divide the duration.
std::uint64_t planned_steps(const LambdaSchedule& s, double dt);

ComplexField rhs(const ComplexField& psi, const ModelParams& p, DynamicsKind kind);

// One classical RK4 step. Checks every stage for NaN/Inf.
ComplexField step_rk4(const ComplexField& psi, const ModelParams& p,
                      DynamicsKind kind, double dt);

struct EvolveSinks {
  std::function<void(const Observables&)> observable;
  std::function<void(double t, double lambda, const ComplexField&)> snapshot;
  std::function<void(const std::string&)> warn;
};

// Reusable stepper for custom drivers that need their own recording cadence.
// One instance drives one trajectory in place.
class TrajectoryStepper {
 public:
  TrajectoryStepper(const Grid1D& g, const ModelParams& p, DynamicsKind kind);
  ~TrajectoryStepper();
  TrajectoryStepper(TrajectoryStepper&&) noexcept;
  TrajectoryStepper& operator=(TrajectoryStepper&&) noexcept;

  void set_lambda(double lambda);
  void step(ComplexField& psi, double dt);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Advance psi0 through the schedule, overriding p.lambda per stage.
// Observables are emitted at step indices divisible by observable_stride and
// after the final step; snapshots likewise with snapshot_stride.
ComplexField evolve(const ComplexField& psi0, const ModelParams& p,
                    DynamicsKind kind, const LambdaSchedule& schedule,
                    const EvolutionConfig& cfg, const EvolveSinks& sinks);

struct GroundStateResult {
  ComplexField psi;
  double mu = 0.0;        // <psi, eta(mu=0)> / N at the solution
  double residual = 0.0;  // ||Q eta|| / ||psi|| at exit
  std::uint64_t iterations = 0;
};

// Normalized projected-gradient descent psi <- normalize(psi - tau Q eta),
// the lambda -> infinity direction of the dissipative dynamics with
// rescaled time. tau adapts by backtracking on F.
GroundStateResult ground_state_ite(const ComplexField& psi0, const ModelParams& p,
                                   double tol, std::uint64_t max_iters);

}  // namespace mgpe
