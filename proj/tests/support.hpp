#pragma once

// Shared helpers for the test binaries: deterministic generators for specs
// and sample points, a finite-difference check of the jet derivatives, and
// small independent numeric oracles.

#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "prism/evaluate.hpp"
#include "prism/rational.hpp"

namespace testsupport {

using prism::Complex;

inline int rand_sign(std::mt19937_64& g) { return (g() & 1) ? 1 : -1; }

inline double rand_unit(std::mt19937_64& g) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(g);
}

// Valid random spec with groups of size at most max_group; positions are
// jittered grid points, so they stay ascending and distinct.
inline prism::RationalSpec random_spec(std::mt19937_64& g, int max_group = 3,
                                       int max_half_n = 2) {
  prism::RationalSpec spec;
  spec.epsilon = rand_sign(g);
  spec.n = (2 * static_cast<int>(g() % (max_half_n + 1)) + 1) * rand_sign(g);
  const int a = static_cast<int>(g() % (max_group + 1));
  const int b = static_cast<int>(g() % (max_group + 1));
  const int c = static_cast<int>(g() % (max_group + 1));
  for (int j = 1; j <= a; ++j) {
    spec.real_factors.push_back(prism::BoundaryFactor{
        (j + 0.4 * (rand_unit(g) - 0.5)) / (a + 1), rand_sign(g)});
  }
  for (int k = 1; k <= b; ++k) {
    spec.imag_factors.push_back(prism::BoundaryFactor{
        (k + 0.4 * (rand_unit(g) - 0.5)) / (b + 1), rand_sign(g)});
  }
  for (int l = 1; l <= c; ++l) {
    const double radius = (l + 0.45 * (rand_unit(g) - 0.5)) / (c + 1.5);
    const double angle =
        (0.1 + 0.8 * rand_unit(g)) * 3.14159265358979323846 / 2.0;
    spec.interior_factors.push_back(prism::InteriorFactor{
        radius * Complex{std::cos(angle), std::sin(angle)}, rand_sign(g)});
  }
  prism::validate(spec);
  return spec;
}

// Chart value at w in a fixed chart: F in the finite chart, 1/F in the pole
// chart.
inline Complex chart_at(const prism::Evaluator& ev, Complex w,
                        bool pole_chart) {
  const prism::PairJet j = ev.jet(w);
  return pole_chart ? j.d / j.n : j.n / j.d;
}

// Usable finite-difference base point: the chart is unambiguous on the whole
// stencil and no special point sits within reach.
inline bool fd_point_ok(const prism::Evaluator& ev, Complex w, double h) {
  for (const prism::SpecialPoint& p : ev.special_points()) {
    if (std::abs(w - p.pos) < 1e3 * h) return false;
  }
  const Complex offsets[5] = {{0, 0}, {h, 0}, {-h, 0}, {0, h}, {0, -h}};
  for (const Complex& d : offsets) {
    const prism::PairJet j = ev.jet(w + d);
    const double an = std::abs(j.n);
    const double ad = std::abs(j.d);
    if (!(an > 0.0) || !(ad > 0.0)) return false;
    const double ratio = an / ad;
    if (ratio > 0.7 && ratio < 1.4) return false;  // near a chart switch
  }
  return true;
}

// Largest relative deviation of the analytic Wirtinger derivatives from
// central differences of the chart value; negative when the point is
// unusable (ambiguous chart or vanishing derivative scale).
inline double fd_jet_error(const prism::Evaluator& ev, Complex w, double h) {
  if (!fd_point_ok(ev, w, h)) return -1.0;
  const prism::PairJet j0 = ev.jet(w);
  const bool pole = std::abs(j0.n) > std::abs(j0.d);

  const Complex fr = chart_at(ev, w + Complex{h, 0.0}, pole);
  const Complex fl = chart_at(ev, w - Complex{h, 0.0}, pole);
  const Complex fu = chart_at(ev, w + Complex{0.0, h}, pole);
  const Complex fd = chart_at(ev, w - Complex{0.0, h}, pole);
  const Complex dx = (fr - fl) / (2.0 * h);
  const Complex dy = (fu - fd) / (2.0 * h);
  const Complex fd_dw = 0.5 * (dx - Complex{0.0, 1.0} * dy);
  const Complex fd_dwb = 0.5 * (dx + Complex{0.0, 1.0} * dy);

  const prism::JetValue jv = ev.evaluate(w);
  const double scale = std::max(std::abs(jv.dw), std::abs(jv.dwbar));
  if (!(scale > 1e-6)) return -1.0;
  return std::max(std::abs(jv.dw - fd_dw), std::abs(jv.dwbar - fd_dwb)) /
         scale;
}

// Independent oracle for the radial hedgehog energy on the unit cube:
// E = 2 * integral over the sphere of the centre-to-boundary distance
//   = 6 * integral over [-1,1]^2 of dx dy / (1 + x^2 + y^2),
// by projecting each face integral onto its tangent plane. Composite
// Simpson, accurate to ~1e-10.
inline double hedgehog_cube_energy_oracle() {
  const int n = 256;  // panels per axis, even
  auto f = [](double x, double y) { return 1.0 / (1.0 + x * x + y * y); };
  const double hstep = 2.0 / n;
  auto weight = [n](int i) {
    if (i == 0 || i == n) return 1.0;
    return (i % 2 == 1) ? 4.0 : 2.0;
  };
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      acc += weight(i) * weight(j) * f(-1.0 + i * hstep, -1.0 + j * hstep);
    }
  }
  const double integral = acc * hstep * hstep / 9.0;
  return 6.0 * integral;
}

struct McEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};

// Fixed-seed Monte Carlo integral of f over the quarter disk.
inline McEstimate mc_quarter_disk(const std::function<double(Complex)>& f,
                                  int samples, uint64_t seed) {
  std::mt19937_64 g(seed);
  const double quarter_area = 3.14159265358979323846 / 4.0;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double r = std::sqrt(rand_unit(g));
    const double th = rand_unit(g) * 3.14159265358979323846 / 2.0;
    const double v = f(Complex{r * std::cos(th), r * std::sin(th)});
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / samples;
  const double var = std::max(0.0, sum_sq / samples - mean * mean);
  McEstimate out;
  out.value = quarter_area * mean;
  out.standard_error = quarter_area * std::sqrt(var / samples);
  return out;
}

}  // namespace testsupport
