#include "prism/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace prism {

double PrismGeometry::min_edge() const { return std::min({lx, ly, lz}); }

double PrismGeometry::diagonal() const {
  return std::sqrt(lx * lx + ly * ly + lz * lz);
}

bool PrismGeometry::canonically_ordered() const {
  return lx >= ly && ly >= lz;
}

PrismGeometry make_geometry(double lx, double ly, double lz) {
  for (double v : {lx, ly, lz}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("prism edge lengths must be positive and finite");
    }
  }
  return PrismGeometry{lx, ly, lz};
}

std::array<double, 3> inverse_stereographic(std::complex<double> w) {
  const double x = w.real();
  const double y = w.imag();
  const double q = x * x + y * y;
  const double denom = 1.0 + q;
  return {2.0 * x / denom, 2.0 * y / denom, (1.0 - q) / denom};
}

std::complex<double> stereographic(const std::array<double, 3>& n) {
  const double denom = 1.0 + n[2];
  if (denom <= 0.0 || !std::isfinite(denom)) {
    throw DomainError("stereographic projection undefined at the -z pole");
  }
  return {n[0] / denom, n[1] / denom};
}

double boundary_radius(std::complex<double> w, const PrismGeometry& geom) {
  const std::array<double, 3> n = inverse_stereographic(w);
  const std::array<double, 3> half = {geom.lx / 2.0, geom.ly / 2.0,
                                      geom.lz / 2.0};
  double t = std::numeric_limits<double>::infinity();
  for (int j = 0; j < 3; ++j) {
    const double nj = std::abs(n[j]);
    if (nj > 0.0) t = std::min(t, half[j] / nj);
  }
  return t;
}

}  // namespace prism
