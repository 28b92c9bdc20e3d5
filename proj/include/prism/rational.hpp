#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "prism/topology.hpp"

namespace prism {

// One zero (sign +1) or pole (sign -1) of the base map on an open boundary
// interval of the quarter disk, at distance pos from the origin.
struct BoundaryFactor {
  double pos = 0.5;  // in (0, 1)
  int sign = 1;

  bool operator==(const BoundaryFactor&) const = default;
};

// Interior zero (sign +1) or pole (sign -1) at pos, strictly inside the open
// quarter disk.
struct InteriorFactor {
  std::complex<double> pos{0.5, 0.5};
  int sign = 1;

  bool operator==(const InteriorFactor&) const = default;
};

// Parameters of the meromorphic base family on the quarter disk Q:
//
//   f(w) = epsilon * w^n
//        * prod_j ((w^2 - r_j^2) / (r_j^2 w^2 - 1))^rho_j
//        * prod_k ((w^2 + s_k^2) / (s_k^2 w^2 + 1))^sigma_k
//        * prod_l ((w^2 - t_l^2)(w^2 - conj(t_l)^2)
//                  / ((t_l^2 w^2 - 1)(conj(t_l)^2 w^2 - 1)))^tau_l
//
// with n odd. Every member maps the real interval to the real axis, the
// imaginary interval to the imaginary axis, and the unit arc to the unit
// circle, so the induced unit-vector field meets the tangent boundary
// conditions on the prism faces.
struct RationalSpec {
  int epsilon = 1;  // +1 or -1
  int n = 1;        // odd; order of the zero (n > 0) or pole (n < 0) at w = 0
  std::vector<BoundaryFactor> real_factors;      // positions r_j, ascending
  std::vector<BoundaryFactor> imag_factors;      // positions s_k, ascending
  std::vector<InteriorFactor> interior_factors;  // positions t_l, distinct

  bool operator==(const RationalSpec&) const = default;
};

// Throws std::invalid_argument on structural violations: even n, epsilon not
// a sign, positions outside their domain, boundary positions not strictly
// ascending, interior positions not distinct.
void validate(const RationalSpec& spec);

// Antianalytic disk insertion blended through the annulus
// eps < |w - w0| < 2*eps; raises every octant covering count by wrap.
struct GlueData {
  std::complex<double> w0{0.0, 0.0};
  double eps = 0.0;
  int wrap = 1;  // W >= 1

  bool operator==(const GlueData&) const = default;
};

// A base spec plus outer wrappers, applied innermost first:
//   1. rotations: conjugate by the Mobius corner rotation r(w) = (i-w)/(i+w),
//      0 to 2 times; cyclically permutes the three prism axes.
//   2. glue: optional disk insertion (see GlueData).
//   3. conjugated: complex-conjugate the output, reversing orientation.
struct Configuration {
  RationalSpec base;
  int rotations = 0;
  bool conjugated = false;
  std::optional<GlueData> glue;

  bool operator==(const Configuration&) const = default;
};

// Structural validation: base spec valid, rotations in 0..2, glue disk of
// radius 2*eps strictly inside the open quarter disk with wrap >= 1.
// Pole clearance of the glue disk is checked at evaluator construction.
void validate(const Configuration& cfg);

// Closed-form invariants of the base family:
//   ex = epsilon * (-1)^a
//   ey = epsilon * (-1)^b * (-1)^((n-1)/2)
//   ez = sgn(n)
//   kx = -(1/2)(-1)^b ey (sum_k (-1)^k sigma_k + (1/2)(1 - (-1)^b) ez)
//   ky = -(1/2)(-1)^a ex (sum_j (-1)^j rho_j  + (1/2)(1 - (-1)^a) ez)
//   kz = (ex*ey - n)/4 - (1/2) sum rho - (1/2) sum sigma - sum tau
//   m  = -(|n| + 2(a + b) + 4c)
// where a, b, c count the factor groups. All divisions are exact.
VertexTopology spec_invariants(const RationalSpec& spec);

// Invariants after the wrappers: rotations apply the cyclic axis permutation,
// glue adds 8*wrap to m (one full cover per octant), conjugation applies the
// reflected-topology involution.
VertexTopology configuration_invariants(const Configuration& cfg);

}  // namespace prism
