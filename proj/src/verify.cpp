#include "prism/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "prism/builders.hpp"

namespace prism {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr Complex kI{0.0, 1.0};

Complex chart_value(const PairJet& j) {
  return std::abs(j.n) > std::abs(j.d) ? j.d / j.n : j.n / j.d;
}

// Unit phase of the director angle in the xz-plane (doubled half-angle of
// F through 1 + iF); the pole value is the antipode -1.
Complex real_interval_phase(const PairJet& j) {
  if (std::abs(j.d) <= 1e-9 * std::abs(j.n)) return {-1.0, 0.0};
  Complex q = (j.d + kI * j.n) * std::conj(j.d);
  const double m = std::abs(q);
  if (!(m > 0.0)) return {-1.0, 0.0};
  q /= m;
  return q * q;
}

// Same for the yz-plane through 1 + F, with F imaginary on this piece.
Complex imag_interval_phase(const PairJet& j) {
  if (std::abs(j.d) <= 1e-9 * std::abs(j.n)) return {-1.0, 0.0};
  Complex q = (j.d + j.n) * std::conj(j.d);
  const double m = std::abs(q);
  if (!(m > 0.0)) return {-1.0, 0.0};
  q /= m;
  return q * q;
}

// Unit phase of F itself; F is unimodular on the arc.
Complex arc_phase(const PairJet& j) {
  Complex q = j.n * std::conj(j.d);
  const double m = std::abs(q);
  if (!(m > 0.0)) {
    throw ResolutionError("vanishing phase on the arc; map is far from "
                          "unimodular there");
  }
  return q / m;
}

// Extra walk parameters concentrated around a boundary zero or pole at t0.
// A crossing of width s turns the tracked phase by a full wrap well inside
// one uniform step, invisible to endpoint differences; a geometric ladder of
// offsets enters the feature gradually so every step stays unwrappable.
void add_ladder(std::vector<double>& ts, double t0, double width) {
  ts.push_back(t0);
  for (double h = 0.25 * width; h < 1.0; h *= 2.0) {
    ts.push_back(t0 - h);
    ts.push_back(t0 + h);
  }
}

// Ladder seeds for the specials lying on (or hugging) one straight leg.
// to_parameter maps a chart point to the leg parameter, off_axis to its
// distance from the leg.
std::vector<double> leg_seeds(const std::vector<SpecialPoint>& specials,
                              const std::function<double(Complex)>& to_parameter,
                              const std::function<double(Complex)>& off_axis) {
  std::vector<double> ts;
  for (const SpecialPoint& p : specials) {
    const double off = off_axis(p.pos);
    if (off > 8.0 * p.scale) continue;
    add_ladder(ts, to_parameter(p.pos), std::max(p.scale, off));
  }
  return ts;
}

// Total unwrapped phase along t in [0, 1], walking the uniform grid merged
// with the seed parameters and bisecting any step larger than pi/4 until the
// budget is exhausted.
double unwrap_total(const std::function<Complex(double)>& phase_at,
                    int initial_samples, long long budget,
                    const std::vector<double>& seeds) {
  std::vector<double> ts;
  ts.reserve(initial_samples + 1 + seeds.size());
  for (int i = 0; i <= initial_samples; ++i) {
    ts.push_back(static_cast<double>(i) / initial_samples);
  }
  for (double t : seeds) {
    if (t > 0.0 && t < 1.0) ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  long long used = static_cast<long long>(ts.size());
  if (used > budget) {
    std::ostringstream os;
    os << "initial boundary walk needs " << used
       << " samples, more than the budget " << budget;
    throw ResolutionError(os.str());
  }
  double total = 0.0;

  const std::function<void(double, Complex, double, Complex, int)> refine =
      [&](double t0, Complex u0, double t1, Complex u1, int depth) {
        const double step = std::arg(u1 * std::conj(u0));
        if (std::abs(step) <= kPi / 4.0) {
          total += step;
          return;
        }
        if (depth >= 48 || used >= budget) {
          std::ostringstream os;
          os << "phase step " << step << " at t in [" << t0 << ", " << t1
             << "] not resolved within the sample budget";
          throw ResolutionError(os.str());
        }
        const double tm = 0.5 * (t0 + t1);
        const Complex um = phase_at(tm);
        ++used;
        refine(t0, u0, tm, um, depth + 1);
        refine(tm, um, t1, u1, depth + 1);
      };

  Complex prev = phase_at(ts.front());
  for (size_t i = 1; i < ts.size(); ++i) {
    const Complex u = phase_at(ts[i]);
    refine(ts[i - 1], prev, ts[i], u, 0);
    prev = u;
  }
  return total;
}

// Winding count of an accumulated phase whose principal part is +-pi/2, and
// the deviation of that principal part from the nearest odd quarter turn.
struct WindingResult {
  long long winding;
  double residual;
};

WindingResult quantize_winding(double accumulated) {
  const double principal = std::remainder(accumulated, 2.0 * kPi);
  WindingResult out;
  out.winding = std::llround((accumulated - principal) / (2.0 * kPi));
  out.residual = std::abs(std::abs(principal) - kPi / 2.0);
  return out;
}

}  // namespace

double BoundaryReport::max_residual() const {
  return std::max({real_interval, imag_interval, arc});
}

BoundaryReport check_tangent_bc(const std::function<PairJet(Complex)>& jet_at,
                                int samples) {
  if (samples < 2) throw DomainError("boundary sampling needs >= 2 samples");
  BoundaryReport report;
  for (int i = 0; i <= samples; ++i) {
    const double t = static_cast<double>(i) / samples;

    const PairJet on_real = jet_at(Complex{t, 0.0});
    report.real_interval =
        std::max(report.real_interval, std::abs(chart_value(on_real).imag()));

    const PairJet on_imag = jet_at(Complex{0.0, 1.0 - t});
    report.imag_interval =
        std::max(report.imag_interval, std::abs(chart_value(on_imag).real()));

    const double th = kPi / 2.0 * t;
    const PairJet on_arc = jet_at(Complex{std::cos(th), std::sin(th)});
    const double an = std::abs(on_arc.n);
    const double ad = std::abs(on_arc.d);
    report.arc = std::max(report.arc,
                          std::abs(an - ad) / std::max({an, ad, 1e-300}));
  }
  return report;
}

BoundaryReport check_tangent_bc(const Evaluator& ev, int samples) {
  return check_tangent_bc([&ev](Complex w) { return ev.jet(w); }, samples);
}

BoundaryReport check_tangent_bc(const Configuration& cfg, int samples) {
  return check_tangent_bc(Evaluator(cfg), samples);
}

SignTriple measure_edge_signs(const Evaluator& ev, double tol) {
  const PairJet at_one = ev.jet(Complex{1.0, 0.0});
  const Complex q1 = at_one.n * std::conj(at_one.d);
  const double a1 = std::abs(q1);
  const double mod1 = std::abs(std::abs(at_one.n) - std::abs(at_one.d)) /
                      std::max(std::abs(at_one.n), std::abs(at_one.d));
  if (!(a1 > 0.0) || std::abs(q1.imag()) > tol * a1 || mod1 > tol) {
    throw BoundaryConditionError(
        "boundary value at w=1 is not a unit real number within tolerance");
  }

  const PairJet at_i = ev.jet(kI);
  const Complex qi = at_i.n * std::conj(at_i.d);
  const double ai = std::abs(qi);
  const double modi = std::abs(std::abs(at_i.n) - std::abs(at_i.d)) /
                      std::max(std::abs(at_i.n), std::abs(at_i.d));
  if (!(ai > 0.0) || std::abs(qi.real()) > tol * ai || modi > tol) {
    throw BoundaryConditionError(
        "boundary value at w=i is not a unit imaginary number within "
        "tolerance");
  }

  const PairJet at_zero = ev.jet(Complex{0.0, 0.0});
  const double zn = std::abs(at_zero.n);
  const double zd = std::abs(at_zero.d);
  int ez;
  if (zn <= 1e-4 * zd) {
    ez = 1;
  } else if (zd <= 1e-4 * zn) {
    ez = -1;
  } else {
    throw BoundaryConditionError(
        "origin value is neither clearly a zero nor clearly a pole");
  }

  return SignTriple{q1.real() > 0.0 ? 1 : -1, qi.imag() > 0.0 ? 1 : -1, ez};
}

SignTriple measure_edge_signs(const Configuration& cfg, double tol) {
  return measure_edge_signs(Evaluator(cfg), tol);
}

KinkMeasurement measure_kink_numbers(const Evaluator& ev, int initial_samples,
                                     long long sample_budget) {
  if (initial_samples < 8) {
    throw DomainError("winding extraction needs >= 8 initial samples");
  }

  // Zeros and poles on the legs mark the kinks themselves; seed the walks
  // there so even the narrowest crossing is entered step by step. The arc
  // carries no zeros or poles of a tangent map, so it needs no seeds.
  const std::vector<SpecialPoint>& specials = ev.special_points();
  const std::vector<double> real_seeds = leg_seeds(
      specials, [](Complex p) { return p.real(); },
      [](Complex p) { return std::abs(p.imag()); });
  const std::vector<double> imag_seeds = leg_seeds(
      specials, [](Complex p) { return 1.0 - p.imag(); },
      [](Complex p) { return std::abs(p.real()); });

  const double dbeta = unwrap_total(
      [&ev](double t) { return real_interval_phase(ev.jet(Complex{t, 0.0})); },
      initial_samples, sample_budget, real_seeds);
  const double dgamma = unwrap_total(
      [&ev](double t) {
        return imag_interval_phase(ev.jet(Complex{0.0, 1.0 - t}));
      },
      initial_samples, sample_budget, imag_seeds);
  const double darg = unwrap_total(
      [&ev](double t) {
        const double th = kPi / 2.0 * t;
        return arc_phase(ev.jet(Complex{std::cos(th), std::sin(th)}));
      },
      initial_samples, sample_budget, {});

  // Calibrated orientations: the xz winding counts -ky, the yz winding
  // counts +kx, and the arc argument determines kz after the quarter-turn
  // correction from the corner values.
  const WindingResult wy = quantize_winding(dbeta);
  const WindingResult wx = quantize_winding(dgamma);

  const SignTriple e = measure_edge_signs(ev);
  const double kz_real =
      -darg / (2.0 * kPi) + 0.25 * static_cast<double>(e.sx * e.sy);
  const long long kz = std::llround(kz_real);

  KinkMeasurement out;
  out.k = KinkTriple{static_cast<int>(wx.winding),
                     static_cast<int>(-wy.winding), static_cast<int>(kz)};
  out.residual = std::max(
      {wx.residual, wy.residual, std::abs(kz_real - static_cast<double>(kz))});
  return out;
}

KinkMeasurement measure_kink_numbers(const Configuration& cfg,
                                     int initial_samples,
                                     long long sample_budget) {
  return measure_kink_numbers(Evaluator(cfg), initial_samples, sample_budget);
}

TrappedAreaMeasurement measure_trapped_area(const Evaluator& ev,
                                            const QuadratureConfig& qc) {
  const IntegralResult res = trapped_area(ev, qc);
  TrappedAreaMeasurement out;
  out.area = res.value;
  out.m = nearest_odd(res.value / (kPi / 2.0));
  out.residual = std::abs(res.value - out.m * kPi / 2.0);
  return out;
}

TrappedAreaMeasurement measure_trapped_area(const Configuration& cfg,
                                            const QuadratureConfig& qc) {
  return measure_trapped_area(Evaluator(cfg), qc);
}

VerificationReport verify(const Configuration& cfg,
                          const VertexTopology& declared,
                          const QuadratureConfig& qc,
                          const VerifyOptions& opts) {
  const Evaluator ev(cfg);
  VerificationReport report;
  report.declared = declared;

  const BoundaryReport bc = check_tangent_bc(ev, opts.boundary_samples);
  report.boundary_residual = bc.max_residual();

  const SignTriple e = measure_edge_signs(ev);
  const KinkMeasurement kinks = measure_kink_numbers(ev);
  const TrappedAreaMeasurement area = measure_trapped_area(ev, qc);

  report.measured = VertexTopology{e, kinks.k, area.m};
  report.winding_residual = kinks.residual;
  report.area_residual = area.residual;
  report.pass = report.measured == declared &&
                report.boundary_residual <= opts.tol &&
                report.winding_residual <= opts.tol &&
                report.area_residual <= opts.tol;
  return report;
}

}  // namespace prism
