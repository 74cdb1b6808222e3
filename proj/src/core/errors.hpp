#pragma once

#include <stdexcept>
#include <string>

namespace mgpe {

enum class ErrorKind {
  Argument,     // bad handles, shapes, preconditions
  Config,       // unparsable or inconsistent run configuration
  Divergence,   // NaN/Inf produced during time stepping
  Io,           // file system failures
  Convergence,  // iterative solver or fit did not converge
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Blow-up detected inside the stepper; names the step and RK4 stage.
class DivergenceError : public Error {
 public:
  DivergenceError(std::uint64_t step, int stage, double t, const std::string& what)
      : Error(ErrorKind::Divergence, what), step_(step), stage_(stage), t_(t) {}
  std::uint64_t step() const noexcept { return step_; }
  int stage() const noexcept { return stage_; }
  double time() const noexcept { return t_; }

 private:
  std::uint64_t step_;
  int stage_;
  double t_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(double residual, const std::string& what)
      : Error(ErrorKind::Convergence, what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

}  // namespace mgpe
