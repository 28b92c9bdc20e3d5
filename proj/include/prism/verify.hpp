#pragma once

#include <functional>

#include "prism/quadrature.hpp"

namespace prism {

// Maximum tangency residuals over the three boundary pieces, chart-consistent
// near poles: Im F on the real interval, Re F on the imaginary interval,
// | |F| - 1 | on the arc.
struct BoundaryReport {
  double real_interval = 0.0;
  double imag_interval = 0.0;
  double arc = 0.0;

  double max_residual() const;
};

BoundaryReport check_tangent_bc(const std::function<PairJet(Complex)>& jet_at,
                                int samples = 512);
BoundaryReport check_tangent_bc(const Evaluator& ev, int samples = 512);
BoundaryReport check_tangent_bc(const Configuration& cfg, int samples = 512);

// Signs of the boundary values at the three face corners: F(1) on the real
// axis, Im F(i), and zero versus pole at the origin. Throws
// BoundaryConditionError when the sampled values violate tangency beyond tol
// or the origin chart is ambiguous.
SignTriple measure_edge_signs(const Evaluator& ev, double tol = 1e-6);
SignTriple measure_edge_signs(const Configuration& cfg, double tol = 1e-6);

struct KinkMeasurement {
  KinkTriple k;
  // Largest deviation of an unwrapped winding from its quantized value.
  double residual = 0.0;
};

// Winding counts of the boundary director along the three boundary pieces,
// via adaptive phase unwrapping with steps kept below pi/4; the walks are
// seeded around boundary zeros and poles so narrow crossings cannot alias.
// Throws ResolutionError when the sample budget cannot cover the walk.
KinkMeasurement measure_kink_numbers(const Evaluator& ev,
                                     int initial_samples = 512,
                                     long long sample_budget = 1 << 20);
KinkMeasurement measure_kink_numbers(const Configuration& cfg,
                                     int initial_samples = 512,
                                     long long sample_budget = 1 << 20);

struct TrappedAreaMeasurement {
  int m = 0;          // nearest odd multiple of pi/2
  double area = 0.0;  // raw quadrature value
  double residual = 0.0;
};

TrappedAreaMeasurement measure_trapped_area(const Evaluator& ev,
                                            const QuadratureConfig& qc = {});
TrappedAreaMeasurement measure_trapped_area(const Configuration& cfg,
                                            const QuadratureConfig& qc = {});

struct VerifyOptions {
  double tol = 1e-6;
  int boundary_samples = 512;
};

struct VerificationReport {
  VertexTopology declared;
  VertexTopology measured;
  double boundary_residual = 0.0;
  double area_residual = 0.0;
  double winding_residual = 0.0;
  bool pass = false;
};

// Measures all invariants of cfg and compares with the declaration. pass
// requires exact agreement of (e, k, m) and every residual within tol.
VerificationReport verify(const Configuration& cfg,
                          const VertexTopology& declared,
                          const QuadratureConfig& qc = {},
                          const VerifyOptions& opts = {});

}  // namespace prism
