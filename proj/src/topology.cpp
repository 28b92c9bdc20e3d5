#include "prism/topology.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace prism {

namespace {

int sign_at(bool far_face) { return far_face ? -1 : 1; }

std::string triple_string(const VertexTopology& vt) {
  std::ostringstream os;
  os << "e=(" << vt.e.sx << "," << vt.e.sy << "," << vt.e.sz << ") k=("
     << vt.k.kx << "," << vt.k.ky << "," << vt.k.kz << ") m=" << vt.m;
  return os.str();
}

}  // namespace

SignTriple make_signs(int sx, int sy, int sz) {
  for (int s : {sx, sy, sz}) {
    if (s != 1 && s != -1) {
      throw DomainError("sign components must be +1 or -1");
    }
  }
  return SignTriple{sx, sy, sz};
}

int KinkTriple::sum_abs() const {
  return std::abs(kx) + std::abs(ky) + std::abs(kz);
}

int WrappingNumbers::octant_index(const SignTriple& octant) {
  return 4 * (octant.sx < 0) + 2 * (octant.sy < 0) + (octant.sz < 0);
}

SignTriple WrappingNumbers::octant(int index) {
  return SignTriple{(index & 4) ? -1 : 1, (index & 2) ? -1 : 1,
                    (index & 1) ? -1 : 1};
}

int WrappingNumbers::sum() const {
  int acc = 0;
  for (int v : w) acc += v;
  return acc;
}

int WrappingNumbers::sum_abs() const {
  int acc = 0;
  for (int v : w) acc += std::abs(v);
  return acc;
}

const char* to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::Conformal:
      return "conformal";
    case TopologyKind::Anticonformal:
      return "anticonformal";
    case TopologyKind::Nonconformal:
      return "nonconformal";
  }
  return "unknown";
}

bool is_realizable(const VertexTopology& vt) {
  return realizability_violation(vt).empty();
}

std::string realizability_violation(const VertexTopology& vt) {
  for (int s : {vt.e.sx, vt.e.sy, vt.e.sz}) {
    if (s != 1 && s != -1) return "edge signs must be +1 or -1";
  }
  if (std::abs(vt.m) % 2 != 1) {
    std::ostringstream os;
    os << "m must be odd (half-pi units), got m=" << vt.m;
    return os.str();
  }
  const int residue = vt.m + 4 * vt.k.sum() + vt.e.product();
  if (((residue % 8) + 8) % 8 != 0) {
    std::ostringstream os;
    os << "m + 4(kx+ky+kz) + ex*ey*ez must be divisible by 8; for "
       << triple_string(vt) << " it is " << residue;
    return os.str();
  }
  return {};
}

void require_realizable(const VertexTopology& vt) {
  std::string violation = realizability_violation(vt);
  if (!violation.empty()) throw RealizabilityError(violation);
}

WrappingNumbers wrapping_numbers(const VertexTopology& vt) {
  require_realizable(vt);
  const int e_product = vt.e.product();
  WrappingNumbers out;
  for (int idx = 0; idx < 8; ++idx) {
    const SignTriple sigma = WrappingNumbers::octant(idx);
    const int corner = (sigma == vt.e) ? -7 : 1;
    const int eight_w = vt.m +
                        4 * (sigma.sx * vt.k.kx + sigma.sy * vt.k.ky +
                             sigma.sz * vt.k.kz) +
                        e_product * corner;
    if (eight_w % 8 != 0) {
      throw ConstructionError("octant covering count not an integer for " +
                              triple_string(vt));
    }
    out.w[idx] = eight_w / 8;
  }
  return out;
}

int omega_chi(const SignTriple& e, const KinkTriple& k, int chi) {
  if (chi != 1 && chi != -1) throw DomainError("chi must be +1 or -1");
  const int four_sum = 4 * k.sum_abs();
  const int ex_kx = chi * e.sx * k.kx;
  const int ey_ky = chi * e.sy * k.ky;
  const int ez_kz = chi * e.sz * k.kz;
  if (chi * e.product() == 1) {
    const bool all_nonpositive = ex_kx <= 0 && ey_ky <= 0 && ez_kz <= 0;
    return four_sum + (all_nonpositive ? 7 : -1);
  }
  const bool all_negative = ex_kx < 0 && ey_ky < 0 && ez_kz < 0;
  return four_sum - (all_negative ? 7 : -1);
}

Classification classify(const VertexTopology& vt) {
  require_realizable(vt);
  const int m_minus = omega_chi(vt.e, vt.k, -1);
  const int m_plus = omega_chi(vt.e, vt.k, +1);
  const bool conformal = vt.m <= -m_minus;
  const bool anticonformal = vt.m >= m_plus;
  if (conformal && anticonformal) {
    throw ConstructionError("degenerate classification for " +
                            triple_string(vt));
  }
  if (conformal) return {TopologyKind::Conformal, vt.m == -m_minus};
  if (anticonformal) return {TopologyKind::Anticonformal, vt.m == m_plus};
  return {TopologyKind::Nonconformal, false};
}

VertexTopology conjugate_topology(const VertexTopology& vt) {
  return VertexTopology{SignTriple{vt.e.sx, -vt.e.sy, vt.e.sz},
                        KinkTriple{-vt.k.kx, vt.k.ky, -vt.k.kz}, -vt.m};
}

VertexTopology rotate_topology(const VertexTopology& vt) {
  return VertexTopology{SignTriple{vt.e.sz, vt.e.sx, vt.e.sy},
                        KinkTriple{vt.k.kz, vt.k.kx, vt.k.ky}, vt.m};
}

int PrismTopology::corner_index(bool at_lx, bool at_ly, bool at_lz) {
  return (at_lx ? 1 : 0) | (at_ly ? 2 : 0) | (at_lz ? 4 : 0);
}

std::array<double, 3> PrismTopology::corner(int index) const {
  return {(index & 1) ? geom.lx : 0.0, (index & 2) ? geom.ly : 0.0,
          (index & 4) ? geom.lz : 0.0};
}

PrismTopology extend_to_prism(const VertexTopology& vt,
                              const PrismGeometry& geom) {
  require_realizable(vt);
  PrismTopology pt;
  pt.geom = geom;
  for (int idx = 0; idx < 8; ++idx) {
    const int parity =
        ((idx & 1) ? 1 : 0) + ((idx & 2) ? 1 : 0) + ((idx & 4) ? 1 : 0);
    const int flip = (parity % 2 == 0) ? 1 : -1;
    pt.vertex[idx] = PrismVertexData{
        vt.e,
        KinkTriple{flip * vt.k.kx, flip * vt.k.ky, flip * vt.k.kz},
        flip * vt.m};
  }
  return pt;
}

std::vector<std::string> check_sum_rules(const PrismTopology& pt) {
  std::vector<std::string> violations;
  const char* axis_name = "xyz";

  // Face rules. For face normal n the four corners balance 4*k_n against the
  // product of corner signs and edge signs on the two in-face axes p, q.
  for (int n = 0; n < 3; ++n) {
    const int p = (n + 1) % 3;
    const int q = (n + 2) % 3;
    for (int face_bit = 0; face_bit <= 1; ++face_bit) {
      int acc = 0;
      for (int idx = 0; idx < 8; ++idx) {
        if (((idx >> n) & 1) != face_bit) continue;
        const PrismVertexData& v = pt.vertex[idx];
        const int sp = sign_at((idx >> p) & 1);
        const int sq = sign_at((idx >> q) & 1);
        acc += 4 * v.k[n] - sp * sq * v.e[p] * v.e[q];
      }
      if (acc != 0) {
        std::ostringstream os;
        os << "face " << axis_name[n] << "="
           << (face_bit ? "L" : "0") << ": kink sum rule violated (4*sum = "
           << acc << ", expected 0)";
        violations.push_back(os.str());
      }
    }
  }

  // Trapped areas over all corners cancel.
  {
    int acc = 0;
    for (const PrismVertexData& v : pt.vertex) acc += v.m;
    if (acc != 0) {
      std::ostringstream os;
      os << "corner trapped areas do not cancel (sum of m = " << acc << ")";
      violations.push_back(os.str());
    }
  }

  // Both endpoints of every prism edge see the same edge sign.
  for (int n = 0; n < 3; ++n) {
    for (int idx = 0; idx < 8; ++idx) {
      if ((idx >> n) & 1) continue;
      const int other = idx | (1 << n);
      if (pt.vertex[idx].e[n] != pt.vertex[other].e[n]) {
        std::ostringstream os;
        os << "edge along " << axis_name[n] << " between corners " << idx
           << " and " << other << ": edge signs disagree";
        violations.push_back(os.str());
      }
    }
  }

  return violations;
}

}  // namespace prism
