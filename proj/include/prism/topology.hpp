#pragma once

#include <array>
#include <string>
#include <vector>

#include "prism/errors.hpp"
#include "prism/geometry.hpp"

namespace prism {

// Ordered sign triple, components exactly +1 or -1.
struct SignTriple {
  int sx = 1;
  int sy = 1;
  int sz = 1;

  int product() const { return sx * sy * sz; }
  int operator[](int axis) const { return axis == 0 ? sx : (axis == 1 ? sy : sz); }

  bool operator==(const SignTriple&) const = default;
};

// Validates that every component is +1 or -1.
SignTriple make_signs(int sx, int sy, int sz);

struct KinkTriple {
  int kx = 0;
  int ky = 0;
  int kz = 0;

  int operator[](int axis) const { return axis == 0 ? kx : (axis == 1 ? ky : kz); }
  int sum() const { return kx + ky + kz; }
  int sum_abs() const;

  bool operator==(const KinkTriple&) const = default;
};

// Invariants of a tangent unit-vector field at the origin vertex: edge signs,
// kink numbers, and the trapped area stored exactly as the odd integer m with
// Omega = m * pi/2.
struct VertexTopology {
  SignTriple e;
  KinkTriple k;
  int m = -1;

  bool operator==(const VertexTopology&) const = default;
};

// One signed covering count per sphere octant, canonical order: sigma_x major,
// then sigma_y, then sigma_z, with + preceding - (index 0 is (+,+,+), index 7
// is (-,-,-)).
struct WrappingNumbers {
  std::array<int, 8> w{};

  static int octant_index(const SignTriple& octant);
  static SignTriple octant(int index);

  int operator[](const SignTriple& octant) const { return w[octant_index(octant)]; }
  int sum() const;
  int sum_abs() const;

  bool operator==(const WrappingNumbers&) const = default;
};

enum class TopologyKind { Conformal, Anticonformal, Nonconformal };

const char* to_string(TopologyKind kind);

struct Classification {
  TopologyKind kind = TopologyKind::Nonconformal;
  // True at the extremal-area equality, where at least one wrapping number
  // vanishes. Always false for Nonconformal.
  bool boundary = false;

  bool operator==(const Classification&) const = default;
};

// A vertex topology is realizable by a continuous tangent field iff m is odd
// and m + 4(kx+ky+kz) + ex*ey*ez is divisible by 8; the latter makes all
// eight octant covering counts integers.
bool is_realizable(const VertexTopology& vt);

// Empty when realizable, otherwise a description of the violated congruence.
std::string realizability_violation(const VertexTopology& vt);

// Throws RealizabilityError naming the violated congruence.
void require_realizable(const VertexTopology& vt);

// Octant covering counts: 8*w_sigma = m + 4*sum_j sigma_j k_j + E*c_sigma
// with E = ex*ey*ez and c_sigma = -7 when sigma = e, +1 otherwise.
WrappingNumbers wrapping_numbers(const VertexTopology& vt);

// Extremal trapped area in half-pi units for orientation chi (+1 or -1):
// the largest m with all chi-oriented covering counts admissible.
int omega_chi(const SignTriple& e, const KinkTriple& k, int chi);

// Conformal iff m <= -omega_chi(e,k,-1), anticonformal iff
// m >= omega_chi(e,k,+1), otherwise nonconformal. The boundary flag marks
// equality.
Classification classify(const VertexTopology& vt);

// Invariants of the reflected field (y -> -y composed with the target
// reflection): flips ey, kx, kz and negates m. An involution that exchanges
// the conformal and anticonformal classes.
VertexTopology conjugate_topology(const VertexTopology& vt);

// Invariants under the cyclic axis rotation x->y->z->x. Order three,
// preserves m and the classification kind.
VertexTopology rotate_topology(const VertexTopology& vt);

struct PrismVertexData {
  SignTriple e;
  KinkTriple k;
  int m = -1;

  bool operator==(const PrismVertexData&) const = default;
};

// Invariants at all eight prism corners. Corner index bit j set means the
// corner sits at coordinate L_j on axis j (bit 0 = x, bit 1 = y, bit 2 = z).
struct PrismTopology {
  PrismGeometry geom;
  std::array<PrismVertexData, 8> vertex{};

  static int corner_index(bool at_lx, bool at_ly, bool at_lz);
  std::array<double, 3> corner(int index) const;
};

// Reflection-symmetric extension of the origin data to all corners: a corner
// with p coordinates on far faces carries (e, (-1)^p k, (-1)^p m).
PrismTopology extend_to_prism(const VertexTopology& vt, const PrismGeometry& geom);

// Compatibility conditions on per-corner data: the four corners of each face
// balance kink numbers against corner-sign parities, trapped areas over all
// corners cancel, and edge signs agree along every prism edge. Returns one
// message per violated rule; empty means consistent.
std::vector<std::string> check_sum_rules(const PrismTopology& pt);

}  // namespace prism
