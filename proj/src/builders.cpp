#include "prism/builders.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <sstream>

namespace prism {

namespace {

constexpr double kPi = 3.14159265358979323846;

int parity_sign(int x) { return (x % 2 == 0) ? 1 : -1; }

int sgn(int x) { return (x > 0) - (x < 0); }

// Factors at j/(count+1), j = 1..count, signed by a 1-based rule.
std::vector<BoundaryFactor> boundary_group(
    int count, const std::function<int(int)>& sign_rule) {
  std::vector<BoundaryFactor> group;
  group.reserve(count);
  for (int j = 1; j <= count; ++j) {
    group.push_back(BoundaryFactor{
        static_cast<double>(j) / (count + 1), sign_rule(j)});
  }
  return group;
}

// Factors on the half-radius arc at angles pi*l / (2(count+1)), l = 1..count.
std::vector<InteriorFactor> interior_group(
    int count, const std::function<int(int)>& sign_rule) {
  std::vector<InteriorFactor> group;
  group.reserve(count);
  for (int l = 1; l <= count; ++l) {
    const double angle = kPi * l / (2.0 * (count + 1));
    group.push_back(InteriorFactor{
        0.5 * Complex{std::cos(angle), std::sin(angle)}, sign_rule(l)});
  }
  return group;
}

int exact_nonnegative_quarter(int value, const char* what) {
  if (value % 4 != 0 || value < 0) {
    std::ostringstream os;
    os << what << " must be a nonnegative multiple of 4, got " << value;
    throw ConstructionError(os.str());
  }
  return value / 4;
}

void require_even_tail(int tail, const char* which) {
  if (tail < 0 || tail % 2 != 0) {
    std::ostringstream os;
    os << which << ": alternating interior tail has length " << tail
       << ", expected nonnegative even";
    throw ConstructionError(os.str());
  }
}

// All e_j k_j > 0, product of edge signs +1. Boundary groups of odd length
// put a single uncancelled kink on each in-plane axis; the first |kz|-1
// interior factors share the sign -ez and the rest alternate.
RationalSpec case_all_aligned(const VertexTopology& vt) {
  const int ex = vt.e.sx, ez = vt.e.sz;
  const int akx = std::abs(vt.k.kx);
  const int aky = std::abs(vt.k.ky);
  const int akz = std::abs(vt.k.kz);
  RationalSpec spec;
  spec.epsilon = -ex;
  spec.n = ez;
  spec.real_factors = boundary_group(
      2 * aky - 1, [ez](int j) { return parity_sign(j) * ez; });
  spec.imag_factors = boundary_group(
      2 * akx - 1, [ez](int k) { return parity_sign(k) * ez; });
  const int c = exact_nonnegative_quarter(3 - vt.m - 4 * akx - 4 * aky,
                                          "interior factor count (aligned)");
  require_even_tail(c - (akz - 1), "aligned case");
  spec.interior_factors = interior_group(c, [ez, akz](int l) {
    return l <= akz - 1 ? -ez : parity_sign(l);
  });
  return spec;
}

// Product of edge signs +1 with ez kz <= 0. Even boundary groups encode kx
// and ky through their sign patterns; the z kink sits in the power n.
RationalSpec case_z_opposed(const VertexTopology& vt) {
  const int ex = vt.e.sx, ey = vt.e.sy, ez = vt.e.sz;
  const int akz = std::abs(vt.k.kz);
  const int sum_abs = vt.k.sum_abs();
  RationalSpec spec;
  spec.epsilon = ex;
  spec.n = (4 * akz + 1) * ez;
  const int sy = sgn(vt.k.ky);
  const int sx = sgn(vt.k.kx);
  spec.real_factors = boundary_group(
      2 * std::abs(vt.k.ky),
      [ex, sy](int j) { return -parity_sign(j) * ex * sy; });
  spec.imag_factors = boundary_group(
      2 * std::abs(vt.k.kx),
      [ey, sx](int k) { return -parity_sign(k) * ey * sx; });
  const int c = exact_nonnegative_quarter(-(vt.m + 1) - 4 * sum_abs,
                                          "interior factor count (z-opposed)");
  require_even_tail(c, "z-opposed case");
  spec.interior_factors =
      interior_group(c, [](int l) { return parity_sign(l); });
  return spec;
}

// Product of edge signs -1 with ez kz < 0; the z kink folds into the power.
RationalSpec case_mixed_opposed(const VertexTopology& vt) {
  const int ex = vt.e.sx, ey = vt.e.sy, ez = vt.e.sz;
  const int sum_abs = vt.k.sum_abs();
  RationalSpec spec;
  spec.epsilon = ex;
  spec.n = -(4 * vt.k.kz + ez);
  const int sy = sgn(vt.k.ky);
  const int sx = sgn(vt.k.kx);
  spec.real_factors = boundary_group(
      2 * std::abs(vt.k.ky),
      [ex, sy](int j) { return -parity_sign(j) * ex * sy; });
  spec.imag_factors = boundary_group(
      2 * std::abs(vt.k.kx),
      [ey, sx](int k) { return -parity_sign(k) * ey * sx; });
  const int c = exact_nonnegative_quarter(1 - vt.m - 4 * sum_abs,
                                          "interior factor count (mixed)");
  require_even_tail(c, "mixed-opposed case");
  spec.interior_factors =
      interior_group(c, [](int l) { return parity_sign(l); });
  return spec;
}

// Product of edge signs -1 with all e_j k_j >= 0: cubic power, the first
// |kz|+1 interior factors share the sign -ez.
RationalSpec case_all_aligned_negative(const VertexTopology& vt) {
  const int ex = vt.e.sx, ez = vt.e.sz;
  const int akx = std::abs(vt.k.kx);
  const int aky = std::abs(vt.k.ky);
  const int akz = std::abs(vt.k.kz);
  RationalSpec spec;
  spec.epsilon = ex;
  spec.n = 3 * ez;
  spec.real_factors =
      boundary_group(2 * aky, [ez](int j) { return ez * parity_sign(j); });
  spec.imag_factors =
      boundary_group(2 * akx, [ez](int k) { return ez * parity_sign(k); });
  const int c = exact_nonnegative_quarter(
      -(vt.m + 3) - 4 * akx - 4 * aky,
      "interior factor count (aligned, negative product)");
  require_even_tail(c - (akz + 1), "aligned negative case");
  spec.interior_factors = interior_group(c, [ez, akz](int l) {
    return l <= akz + 1 ? -ez : parity_sign(l);
  });
  return spec;
}

int axis_product(const VertexTopology& vt, int axis) {
  return vt.e[axis] * vt.k[axis];
}

// Distinguished axis with priority z, x, y among axes satisfying pred.
// Returns the axis and fills base/rotations so the axis lands on z.
template <typename Pred>
bool pick_axis(const VertexTopology& vt, Pred pred, VertexTopology* base,
               int* rotations) {
  if (pred(axis_product(vt, 2))) {
    *base = vt;
    *rotations = 0;
    return true;
  }
  if (pred(axis_product(vt, 0))) {
    *base = rotate_topology(rotate_topology(vt));
    *rotations = 1;
    return true;
  }
  if (pred(axis_product(vt, 1))) {
    *base = rotate_topology(vt);
    *rotations = 2;
    return true;
  }
  return false;
}

void check_built(const Configuration& cfg, const VertexTopology& vt,
                 const char* which) {
  if (configuration_invariants(cfg) != vt) {
    std::ostringstream os;
    os << which << " build produced a configuration with mismatched "
       << "invariants";
    throw ConstructionError(os.str());
  }
}

}  // namespace

int nearest_odd(double x) {
  const double k = std::floor((x - 1.0) / 2.0 + 0.5);
  return 2 * static_cast<int>(k) + 1;
}

Configuration build_conformal(const VertexTopology& vt) {
  const Classification cls = classify(vt);
  if (cls.kind != TopologyKind::Conformal) {
    throw ClassificationError(
        std::string("conformal build requested for a ") +
        to_string(cls.kind) + " topology");
  }

  Configuration cfg;
  VertexTopology base = vt;
  int rotations = 0;
  if (vt.e.product() == 1) {
    const bool all_aligned = axis_product(vt, 0) > 0 &&
                             axis_product(vt, 1) > 0 &&
                             axis_product(vt, 2) > 0;
    if (all_aligned) {
      cfg.base = case_all_aligned(vt);
    } else {
      if (!pick_axis(vt, [](int p) { return p <= 0; }, &base, &rotations)) {
        throw ConstructionError("no admissible distinguished axis");
      }
      cfg.base = case_z_opposed(base);
      cfg.rotations = rotations;
    }
  } else {
    const bool any_opposed = axis_product(vt, 0) < 0 ||
                             axis_product(vt, 1) < 0 ||
                             axis_product(vt, 2) < 0;
    if (any_opposed) {
      if (!pick_axis(vt, [](int p) { return p < 0; }, &base, &rotations)) {
        throw ConstructionError("no admissible distinguished axis");
      }
      cfg.base = case_mixed_opposed(base);
      cfg.rotations = rotations;
    } else {
      cfg.base = case_all_aligned_negative(vt);
    }
  }
  check_built(cfg, vt, "conformal");
  return cfg;
}

Configuration build_anticonformal(const VertexTopology& vt) {
  const Classification cls = classify(vt);
  if (cls.kind != TopologyKind::Anticonformal) {
    throw ClassificationError(
        std::string("anticonformal build requested for a ") +
        to_string(cls.kind) + " topology");
  }
  Configuration cfg = build_conformal(conjugate_topology(vt));
  cfg.conjugated = true;
  check_built(cfg, vt, "anticonformal");
  return cfg;
}

Configuration build_nonconformal(const VertexTopology& vt,
                                 const QuadratureConfig& qc) {
  const Classification cls = classify(vt);
  if (cls.kind != TopologyKind::Nonconformal) {
    throw ClassificationError(
        std::string("nonconformal build requested for a ") +
        to_string(cls.kind) + " topology");
  }
  if (vt.m > 0) {
    Configuration cfg = build_nonconformal(conjugate_topology(vt), qc);
    cfg.conjugated = true;
    check_built(cfg, vt, "nonconformal");
    return cfg;
  }

  const int m_minus = omega_chi(vt.e, vt.k, -1);
  const int spread = vt.m + m_minus;
  if (spread <= 0 || spread % 8 != 0) {
    throw ConstructionError("nonconformal wrap count is not a positive "
                            "multiple of 8");
  }
  const int wrap = spread / 8;
  const VertexTopology base_vt{vt.e, vt.k, -m_minus};
  const Configuration base = build_conformal(base_vt);

  const Complex w0 = 0.5 * Complex{std::cos(kPi / 4.0), std::sin(kPi / 4.0)};
  const Evaluator base_ev(base);
  double clearance =
      std::min({w0.real(), w0.imag(), 1.0 - std::abs(w0)});
  for (const SpecialPoint& p : base_ev.special_points()) {
    if (p.pole) clearance = std::min(clearance, std::abs(p.pos - w0));
  }
  if (!(clearance > 0.0)) {
    throw GeometryError("no clearance for a glue disk");
  }

  double eps = 0.25 * clearance;
  double last_residual = 0.0;
  for (int attempt = 0; attempt < 8; ++attempt, eps *= 0.5) {
    Configuration cfg = base;
    cfg.glue = GlueData{w0, eps, wrap};
    const IntegralResult area = trapped_area(cfg, qc);
    const double target = vt.m * kPi / 2.0;
    last_residual = std::abs(area.value - target);
    const double allowance =
        10.0 * std::max(qc.abs_tol, qc.rel_tol * std::abs(area.value));
    if (nearest_odd(area.value / (kPi / 2.0)) == vt.m &&
        last_residual <= allowance) {
      check_built(cfg, vt, "nonconformal");
      return cfg;
    }
  }
  std::ostringstream os;
  os << "glue shrink iterations exhausted; last trapped-area residual "
     << last_residual;
  throw GeometryError(os.str());
}

Configuration build_representative(const VertexTopology& vt,
                                   const QuadratureConfig& qc) {
  switch (classify(vt).kind) {
    case TopologyKind::Conformal:
      return build_conformal(vt);
    case TopologyKind::Anticonformal:
      return build_anticonformal(vt);
    case TopologyKind::Nonconformal:
      return build_nonconformal(vt, qc);
  }
  throw ConstructionError("unreachable classification");
}

}  // namespace prism
