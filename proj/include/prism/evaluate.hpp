#pragma once

#include <array>
#include <complex>
#include <vector>

#include "prism/rational.hpp"

namespace prism {

using Complex = std::complex<double>;

// Projective first-order jet of F = n/d with Wirtinger derivatives of both
// legs. Rescaling all six components by a common factor represents the same
// jet; legs are kept inside a magnitude band so chart quantities never
// overflow.
struct PairJet {
  Complex n{0.0, 0.0};
  Complex d{1.0, 0.0};
  Complex nw{0.0, 0.0};   // d/dw
  Complex dw{0.0, 0.0};
  Complex nwb{0.0, 0.0};  // d/dwbar
  Complex dwb{0.0, 0.0};
};

struct ProjectiveValue {
  Complex n{0.0, 0.0};
  Complex d{1.0, 0.0};

  bool pole_chart() const { return std::abs(n) > std::abs(d); }
  // n/d in the finite chart, d/n in the pole chart.
  Complex chart_value() const { return pole_chart() ? d / n : n / d; }
};

// Chart view of a jet: dw and dwbar differentiate F in the finite chart and
// 1/F in the pole chart, so they stay finite across poles.
struct JetValue {
  ProjectiveValue value;
  bool pole_chart = false;
  Complex dw{0.0, 0.0};
  Complex dwbar{0.0, 0.0};
};

// Corner rotation of the quarter disk, cycling 0 -> 1 -> i -> 0; order three.
Complex mobius_r(Complex w);
Complex mobius_r_inv(Complex w);

// True when w lies in the closed quarter disk, up to tol.
bool in_quarter_disk(Complex w, double tol = 1e-12);

// Zero or pole of the configured map, with the cell size at which its density
// feature is resolved (the distance at which |F| crosses 1).
struct SpecialPoint {
  Complex pos{0.0, 0.0};
  double scale = 0.05;
  bool pole = false;
  bool from_glue = false;  // the covering pole at the glue centre
};

// Evaluates a Configuration as projective jets. Construction validates the
// configuration, locates zeros and poles, and checks that a glue disk keeps
// clear of every pole of the rotated base.
class Evaluator {
 public:
  explicit Evaluator(Configuration cfg);

  const Configuration& config() const { return cfg_; }
  const std::vector<SpecialPoint>& special_points() const { return specials_; }

  // Full jet including all wrappers; defined for any w where the map is
  // (projectively) defined, no domain restriction.
  PairJet jet(Complex w) const;

  // Chart view at w; throws DomainError outside the closed quarter disk.
  JetValue evaluate(Complex w) const;

  // Jet of the rotated base only, glue and conjugation skipped.
  PairJet rotated_base_jet(Complex w) const;

  // Jet with every wrapper except the glue insertion; agrees with jet()
  // outside the glue disk.
  PairJet unglued_jet(Complex w) const;

  // Base value at the glue centre; only meaningful when glue is present.
  Complex glue_anchor() const { return a0_; }

 private:
  PairJet base_jet(Complex u) const;
  void collect_special_points();

  Configuration cfg_;
  Complex a0_{0.0, 0.0};
  std::vector<SpecialPoint> specials_;
};

// One-off evaluation; constructs an Evaluator internally.
JetValue evaluate(const Configuration& cfg, Complex w);

// Unit vector on the sphere represented by the jet value: the pair (n, d)
// maps to n_hat with (n_x + i n_y)/(1 + n_z) = n/d. Exact unit norm up to
// rounding.
std::array<double, 3> sphere_point(const PairJet& jet);

}  // namespace prism
