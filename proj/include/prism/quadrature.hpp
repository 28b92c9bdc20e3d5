#pragma once

#include "prism/evaluate.hpp"
#include "prism/geometry.hpp"

namespace prism {

struct QuadratureConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  // Depth 2k resolves features 2^-k times the seed cell size; covering
  // bubbles as narrow as 1e-8 need the default headroom.
  int max_depth = 64;
  // Cells within this many cell diameters of a zero, pole, or glue circle
  // are refined until they resolve the local feature scale.
  int special_point_padding = 4;
};

void validate(const QuadratureConfig& qc);

// Pullback area densities at one point. oriented integrates to the trapped
// area, unoriented to the total covering area; |oriented| <= unoriented holds
// pointwise.
struct DensitySample {
  double oriented = 0.0;
  double unoriented = 0.0;
};

DensitySample density(const PairJet& jet);

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long long cells = 0;
  long long evaluations = 0;
};

// Signed area of the spherical image counted with orientation; an odd
// multiple of pi/2 for any field meeting the tangent boundary conditions.
IntegralResult trapped_area(const Evaluator& ev, const QuadratureConfig& qc = {});
IntegralResult trapped_area(const Configuration& cfg, const QuadratureConfig& qc = {});

// Total spherical area counted without orientation.
IntegralResult unoriented_area(const Evaluator& ev, const QuadratureConfig& qc = {});
IntegralResult unoriented_area(const Configuration& cfg, const QuadratureConfig& qc = {});

// Elastic energy of the radial extension of the boundary field induced by
// the configuration, in units of the one-constant elastic modulus.
IntegralResult energy(const Evaluator& ev, const PrismGeometry& geom,
                      const QuadratureConfig& qc = {});
IntegralResult energy(const Configuration& cfg, const PrismGeometry& geom,
                      const QuadratureConfig& qc = {});

// Number of samples ever observed with |oriented| > unoriented. Stays zero;
// tracked across all integrations in the process.
long long density_violations();
void reset_density_violations();

}  // namespace prism
