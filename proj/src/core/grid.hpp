#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "errors.hpp"

namespace mgpe {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Uniform periodic box [0, L). Sample j sits at x_j = j * spacing; the point
// x = L wraps to j = 0. n_points must be a power of two. Wavenumbers are kept
// in transform-native order: slot j carries integer mode j for j < n/2 and
// j - n otherwise, so k_j = 2*pi*mode(j)/L.
class Grid1D {
 public:
  Grid1D(std::size_t n_points, double length);

  std::size_t n() const { return n_; }
  double length() const { return length_; }
  double spacing() const { return spacing_; }
  double x(std::size_t j) const { return spacing_ * static_cast<double>(j); }

  int mode(std::size_t j) const {
    return j < n_ / 2 ? static_cast<int>(j)
                      : static_cast<int>(j) - static_cast<int>(n_);
  }
  double wavenumber(std::size_t j) const {
    return 2.0 * kPi * mode(j) / length_;
  }
  double wavenumber_of_mode(int m) const { return 2.0 * kPi * m / length_; }
  // Largest representable |k| (the Nyquist mode m = -n/2).
  double max_wavenumber() const { return kPi * static_cast<double>(n_) / length_; }

  friend bool operator==(const Grid1D& a, const Grid1D& b) = default;

 private:
  std::size_t n_;
  double length_;
  double spacing_;
};

// Complex scalar field on a Grid1D. Value type: copies copy the samples.
struct ComplexField {
  Grid1D grid;
  std::vector<Complex> values;

  ComplexField(const Grid1D& g, std::vector<Complex> v);
  static ComplexField zeros(const Grid1D& g);

  std::size_t n() const { return values.size(); }
};

void require_same_grid(const Grid1D& a, const Grid1D& b, const char* what);
bool all_finite(const ComplexField& f);

}  // namespace mgpe
