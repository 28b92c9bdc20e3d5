#pragma once

#include <optional>
#include <string>
#include <vector>

#include "prism/builders.hpp"

namespace prism {

// 4*pi * Lmin * sum_sigma |w_sigma|; sharpest known topological lower bound
// for the elastic energy.
double lower_bound_new(const VertexTopology& vt, const PrismGeometry& geom);

// 4*pi * Lmin * |m|; the older bound from the trapped area alone.
double lower_bound_old(const VertexTopology& vt, const PrismGeometry& geom);

// Upper bound realized by the representative family: 4*pi * L * |m| in the
// conformal and anticonformal classes, 36*pi * L * sum|w| otherwise, with L
// the prism diagonal.
double upper_bound_formula(const VertexTopology& vt, const PrismGeometry& geom);

struct BoundsReport {
  VertexTopology topology;
  Classification classification;
  WrappingNumbers w;
  int sum_abs_w = 0;
  // Covering increment of the glued build for nonconformal topologies.
  int wrap_increment = 0;

  double lower_new = 0.0;
  double lower_old = 0.0;
  double upper_formula = 0.0;
  // upper/lower written as the closed-form ratio: L/Lmin for the conformal
  // and anticonformal classes, 9*L/Lmin otherwise.
  double ratio = 0.0;

  bool geometry_warning = false;  // edge lengths not sorted descending

  std::optional<double> measured_energy;
  std::optional<double> measured_unoriented;
  std::optional<double> measured_trapped;

  // With measurement: lower_new <= E + tol, E <= 8*L*A + tol, and in the
  // nonconformal case A <= |Omega_-| + 4*pi*W <= (9/2)*pi*sum|w| + tol.
  // Without measurement only the closed-form relations are checked.
  bool chain_ok = false;
  std::vector<std::string> notes;
};

// Assembles the report; when with_measurement is set, builds the class
// representative and measures energy, unoriented area and trapped area with
// the given quadrature settings.
BoundsReport bounds_report(const VertexTopology& vt, const PrismGeometry& geom,
                           const QuadratureConfig& qc = {},
                           bool with_measurement = false);

}  // namespace prism
