#include "grid.hpp"

#include <cmath>
#include <string>

namespace mgpe {

namespace {
bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }
}  // namespace

Grid1D::Grid1D(std::size_t n_points, double length)
    : n_(n_points), length_(length), spacing_(length / static_cast<double>(n_points)) {
  if (!is_power_of_two(n_points)) {
    fail(ErrorKind::Argument,
         "grid size must be a power of two, got " + std::to_string(n_points));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    fail(ErrorKind::Argument, "grid length must be positive and finite");
  }
}

ComplexField::ComplexField(const Grid1D& g, std::vector<Complex> v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.n()) {
    fail(ErrorKind::Argument,
         "field has " + std::to_string(values.size()) + " samples, grid expects " +
             std::to_string(grid.n()));
  }
}

ComplexField ComplexField::zeros(const Grid1D& g) {
  return ComplexField(g, std::vector<Complex>(g.n(), Complex(0.0, 0.0)));
}

void require_same_grid(const Grid1D& a, const Grid1D& b, const char* what) {
  if (!(a == b)) {
    fail(ErrorKind::Argument, std::string(what) + ": fields live on different grids");
  }
}

bool all_finite(const ComplexField& f) {
  for (const Complex& z : f.values) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

}  // namespace mgpe
