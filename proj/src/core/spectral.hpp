#pragma once

#include <span>
#include <vector>

#include "grid.hpp"

namespace mgpe {

// Discrete L2 inner product spacing * sum conj(a_j) b_j. On a uniform
// periodic grid the rectangle rule is exact for the trigonometric
// polynomials the spectral method represents.
Complex inner_product(const ComplexField& a, const ComplexField& b);

// ||a||^2 = Re <a, a>.
double norm_sq(const ComplexField& a);

// Spectral second derivative: multiply mode m by -k_m^2.
ComplexField laplacian(const ComplexField& a);

// Spectral first derivative: multiply mode m by i*k_m.
ComplexField gradient(const ComplexField& a);

// Projection onto the orthonormal plane wave e_m(x) = exp(i k_m x)/sqrt(L).
// Requires |m| < n/2.
Complex mode_amplitude(const ComplexField& a, int m);

// Fourier coefficients c in transform-native order, a_j = sum_m c_m e^{i k_m x_j}.
std::vector<Complex> to_modes(const ComplexField& a);
ComplexField field_from_modes(const Grid1D& g, std::span<const Complex> modes);

}  // namespace mgpe
