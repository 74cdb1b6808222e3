#pragma once

#include <cstddef>
#include <span>

#include "grid.hpp"

namespace mgpe {

// Thin wrapper over FFTW double-precision c2c plans for one transform size.
// Plans are created with FFTW_ESTIMATE so the chosen algorithm (and therefore
// the round-off pattern) depends only on the size, keeping runs reproducible.
// An instance is not safe for concurrent use; fft_for() hands out a
// thread-local instance per size instead.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();

  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const { return n_; }

  // Unnormalized forward DFT: out_m = sum_j in_j exp(-2*pi*i*m*j/n).
  void forward(std::span<const Complex> in, std::span<Complex> out);
  // Inverse with the 1/n factor, so inverse(forward(x)) == x.
  void inverse(std::span<const Complex> in, std::span<Complex> out);

 private:
  std::size_t n_;
  void* plan_fwd_;
  void* plan_inv_;
  Complex* buf_a_;
  Complex* buf_b_;
};

// Per-thread plan cache. References stay valid for the thread's lifetime.
Fft& fft_for(std::size_t n);

}  // namespace mgpe
