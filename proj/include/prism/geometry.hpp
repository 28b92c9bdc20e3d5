#pragma once

#include <array>
#include <complex>

#include "prism/errors.hpp"

namespace prism {

// Edge lengths of the rectangular prism [0,Lx] x [0,Ly] x [0,Lz].
struct PrismGeometry {
  double lx = 1.0;
  double ly = 1.0;
  double lz = 1.0;

  double min_edge() const;
  double diagonal() const;
  // Bound formulas are sharpest when lx >= ly >= lz; callers may warn
  // when this does not hold.
  bool canonically_ordered() const;

  bool operator==(const PrismGeometry&) const = default;
};

// Validates strictly positive, finite edge lengths.
PrismGeometry make_geometry(double lx, double ly, double lz);

// Unit vector n with w = (n_x + i n_y) / (1 + n_z). w = 0 maps to +z,
// |w| = 1 to the equator, |w| -> inf to -z.
std::array<double, 3> inverse_stereographic(std::complex<double> w);

// Inverse of the above; throws DomainError at n = -z.
std::complex<double> stereographic(const std::array<double, 3>& n);

// Distance from the prism centre to the boundary along direction
// inverse_stereographic(w).
double boundary_radius(std::complex<double> w, const PrismGeometry& geom);

}  // namespace prism
