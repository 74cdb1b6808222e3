#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace mgpe {

namespace {
// FFTW's planner is not thread-safe; executing independent plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  buf_a_ = reinterpret_cast<Complex*>(fftw_alloc_complex(n));
  buf_b_ = reinterpret_cast<Complex*>(fftw_alloc_complex(n));
  plan_fwd_ = fftw_plan_dft_1d(static_cast<int>(n),
                               reinterpret_cast<fftw_complex*>(buf_a_),
                               reinterpret_cast<fftw_complex*>(buf_b_),
                               FFTW_FORWARD, FFTW_ESTIMATE);
  plan_inv_ = fftw_plan_dft_1d(static_cast<int>(n),
                               reinterpret_cast<fftw_complex*>(buf_a_),
                               reinterpret_cast<fftw_complex*>(buf_b_),
                               FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
  fftw_free(buf_a_);
  fftw_free(buf_b_);
}

void Fft::forward(std::span<const Complex> in, std::span<Complex> out) {
  std::copy(in.begin(), in.end(), buf_a_);
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
  std::copy(buf_b_, buf_b_ + n_, out.begin());
}

void Fft::inverse(std::span<const Complex> in, std::span<Complex> out) {
  std::copy(in.begin(), in.end(), buf_a_);
  fftw_execute(static_cast<fftw_plan>(plan_inv_));
  const double inv_n = 1.0 / static_cast<double>(n_);
  for (std::size_t j = 0; j < n_; ++j) out[j] = buf_b_[j] * inv_n;
}

Fft& fft_for(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<Fft>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Fft>(n);
  return *slot;
}

}  // namespace mgpe
