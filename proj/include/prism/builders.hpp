#pragma once

#include "prism/quadrature.hpp"
#include "prism/rational.hpp"

namespace prism {

// Constructs a configuration whose invariants equal vt, for conformal vt
// (analytic base, possibly rotated so the distinguished axis maps to z).
// Throws ClassificationError for the wrong class, RealizabilityError for
// non-realizable vt.
Configuration build_conformal(const VertexTopology& vt);

// Anticonformal counterpart: the conformal build of the reflected topology,
// wrapped with conjugation.
Configuration build_anticonformal(const VertexTopology& vt);

// Nonconformal build: conformal base at the extremal trapped area plus a
// glued disk insertion raising every covering count by W = (m + m_minus)/8.
// The glue radius starts at a quarter of the clearance to poles and boundary
// and halves until the measured trapped area lands on m*pi/2 within ten
// times the quadrature tolerance; GeometryError after eight shrinks.
Configuration build_nonconformal(const VertexTopology& vt,
                                 const QuadratureConfig& qc = {});

// Dispatches on classify(vt).
Configuration build_representative(const VertexTopology& vt,
                                   const QuadratureConfig& qc = {});

// Odd integer nearest to x.
int nearest_odd(double x);

}  // namespace prism
