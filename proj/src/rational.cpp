#include "prism/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace prism {

namespace {

constexpr double kPositionTol = 1e-12;

int parity_sign(int x) { return (x % 2 == 0) ? 1 : -1; }

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

void validate_boundary_group(const std::vector<BoundaryFactor>& group,
                             const char* name) {
  double prev = 0.0;
  for (size_t i = 0; i < group.size(); ++i) {
    const BoundaryFactor& f = group[i];
    require(f.sign == 1 || f.sign == -1,
            std::string(name) + " factor sign must be +1 or -1");
    require(std::isfinite(f.pos) && f.pos > 0.0 && f.pos < 1.0,
            std::string(name) + " factor position must lie in (0, 1)");
    require(i == 0 || f.pos > prev + kPositionTol,
            std::string(name) + " factor positions must be strictly ascending");
    prev = f.pos;
  }
}

// Alternating sum with 1-based indexing: sum_j (-1)^j xi_j.
int alternating_sum(const std::vector<BoundaryFactor>& group) {
  int acc = 0;
  for (size_t j = 0; j < group.size(); ++j) {
    acc += parity_sign(static_cast<int>(j) + 1) * group[j].sign;
  }
  return acc;
}

int exact_quarter(int value, const char* what) {
  if (value % 4 != 0) {
    std::ostringstream os;
    os << what << " is not divisible by 4 (got " << value << ")";
    throw ConstructionError(os.str());
  }
  return value / 4;
}

}  // namespace

void validate(const RationalSpec& spec) {
  require(spec.epsilon == 1 || spec.epsilon == -1, "epsilon must be +1 or -1");
  require(spec.n % 2 != 0, "n must be odd");
  validate_boundary_group(spec.real_factors, "real");
  validate_boundary_group(spec.imag_factors, "imaginary");
  for (size_t l = 0; l < spec.interior_factors.size(); ++l) {
    const InteriorFactor& f = spec.interior_factors[l];
    require(f.sign == 1 || f.sign == -1,
            "interior factor sign must be +1 or -1");
    const double re = f.pos.real();
    const double im = f.pos.imag();
    require(std::isfinite(re) && std::isfinite(im) && re > 0.0 && im > 0.0 &&
                std::abs(f.pos) < 1.0,
            "interior factor position must lie strictly inside the open "
            "quarter disk");
    for (size_t prev = 0; prev < l; ++prev) {
      require(std::abs(f.pos - spec.interior_factors[prev].pos) > kPositionTol,
              "interior factor positions must be distinct");
    }
  }
}

void validate(const Configuration& cfg) {
  validate(cfg.base);
  require(cfg.rotations >= 0 && cfg.rotations <= 2,
          "rotations must be 0, 1, or 2");
  if (cfg.glue) {
    const GlueData& g = *cfg.glue;
    require(g.wrap >= 1, "glue wrap must be a positive integer");
    require(std::isfinite(g.eps) && g.eps > 0.0, "glue eps must be positive");
    const double re = g.w0.real();
    const double im = g.w0.imag();
    const double margin = 2.0 * g.eps;
    require(std::isfinite(re) && std::isfinite(im) && re > margin &&
                im > margin && std::abs(g.w0) + margin < 1.0,
            "glue disk of radius 2*eps must lie strictly inside the open "
            "quarter disk");
  }
}

VertexTopology spec_invariants(const RationalSpec& spec) {
  validate(spec);
  const int a = static_cast<int>(spec.real_factors.size());
  const int b = static_cast<int>(spec.imag_factors.size());
  const int c = static_cast<int>(spec.interior_factors.size());

  const int ex = spec.epsilon * parity_sign(a);
  const int ey = spec.epsilon * parity_sign(b) * parity_sign((spec.n - 1) / 2);
  const int ez = spec.n > 0 ? 1 : -1;

  int sum_rho = 0;
  for (const BoundaryFactor& f : spec.real_factors) sum_rho += f.sign;
  int sum_sigma = 0;
  for (const BoundaryFactor& f : spec.imag_factors) sum_sigma += f.sign;
  int sum_tau = 0;
  for (const InteriorFactor& f : spec.interior_factors) sum_tau += f.sign;

  // kx = -(1/2)(-1)^b ey (S_b + (1/2)(1-(-1)^b) ez), scaled by 4 to stay
  // integral; same shape for ky with the real group.
  const int kx_scaled =
      -parity_sign(b) * ey * (2 * alternating_sum(spec.imag_factors) +
                              (1 - parity_sign(b)) * ez);
  const int ky_scaled =
      -parity_sign(a) * ex * (2 * alternating_sum(spec.real_factors) +
                              (1 - parity_sign(a)) * ez);
  const int kz_scaled = (ex * ey - spec.n) - 2 * sum_rho - 2 * sum_sigma -
                        4 * sum_tau;

  VertexTopology vt;
  vt.e = SignTriple{ex, ey, ez};
  vt.k = KinkTriple{exact_quarter(kx_scaled, "4*kx"),
                    exact_quarter(ky_scaled, "4*ky"),
                    exact_quarter(kz_scaled, "4*kz")};
  vt.m = -(std::abs(spec.n) + 2 * (a + b) + 4 * c);
  return vt;
}

VertexTopology configuration_invariants(const Configuration& cfg) {
  validate(cfg);
  VertexTopology vt = spec_invariants(cfg.base);
  for (int i = 0; i < cfg.rotations; ++i) vt = rotate_topology(vt);
  if (cfg.glue) vt.m += 8 * cfg.glue->wrap;
  if (cfg.conjugated) vt = conjugate_topology(vt);
  return vt;
}

}  // namespace prism
