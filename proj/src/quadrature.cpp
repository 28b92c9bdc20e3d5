#include "prism/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <queue>
#include <sstream>
#include <vector>

namespace prism {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Gauss-Kronrod 7-15 pair on [-1, 1]: the cell value uses the 15-point
// Kronrod rule (degree 22), the error estimate the difference against the
// embedded 7-point Gauss rule (degree 13) on the shared nodes.
constexpr double kK1 = 0.2077849550078985;
constexpr double kG1 = 0.4058451513773972;
constexpr double kK2 = 0.5860872354676911;
constexpr double kG2 = 0.7415311855993945;
constexpr double kK3 = 0.8648644233597691;
constexpr double kG3 = 0.9491079123427585;
constexpr double kK4 = 0.9914553711208126;
constexpr double kNodes[15] = {-kK4, -kG3, -kK3, -kG2, -kK2, -kG1, -kK1, 0.0,
                               kK1,  kG1,  kK2,  kG2,  kK3,  kG3,  kK4};
constexpr double kKronrodWeights[15] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278, 0.2044329400752989,
    0.1903505780647854, 0.1690047266392679, 0.1406532597155259,
    0.1047900103222502, 0.0630920926299786, 0.0229353220105292};
constexpr int kGaussIndex[7] = {1, 3, 5, 7, 9, 11, 13};
constexpr double kGaussWeights[7] = {
    0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
    0.4179591836734694, 0.3818300505051189, 0.2797053914892766,
    0.1294849661688697};

std::atomic<long long> g_density_violations{0};

struct Kahan {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

enum class Mode { Oriented, Unoriented, Energy };

struct Cell {
  double r0, r1, th0, th1;
  int depth;
  double value;
  double err;
};

struct CellOrder {
  bool operator()(const Cell& a, const Cell& b) const { return a.err < b.err; }
};

double cell_diameter(const Cell& c) {
  return std::hypot(c.r1 - c.r0, c.r1 * (c.th1 - c.th0));
}

// Euclidean distance from p (chart-local coordinates) to the polar
// rectangle; cells keep 0 <= th0 < th1 <= 2*pi.
double cell_distance(const Cell& c, Complex p) {
  const double pr = std::abs(p);
  double pth = std::atan2(p.imag(), p.real());
  if (pth < c.th0) pth += 2.0 * kPi;
  if (pth >= c.th0 && pth <= c.th1) {
    if (pr < c.r0) return c.r0 - pr;
    if (pr > c.r1) return pr - c.r1;
    return 0.0;
  }
  auto edge_distance = [&](double th) {
    const Complex dir{std::cos(th), std::sin(th)};
    const double t = std::clamp((p * std::conj(dir)).real(), c.r0, c.r1);
    return std::abs(p - t * dir);
  };
  return std::min(edge_distance(c.th0), edge_distance(c.th1));
}

// Integration domain as polar cells around a centre point, with the special
// points (chart-local positions) that force refinement.
struct Chart {
  Complex centre{0.0, 0.0};
  std::vector<Cell> seeds;
  std::vector<SpecialPoint> specials;
};

Chart quarter_disk_chart(const Evaluator& ev, bool include_glue_special) {
  Chart chart;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      chart.seeds.push_back(Cell{0.5 * i, 0.5 * (i + 1), kPi / 4.0 * j,
                                 kPi / 4.0 * (j + 1), 0, 0.0, 0.0});
  for (const SpecialPoint& p : ev.special_points()) {
    if (p.from_glue && !include_glue_special) continue;
    chart.specials.push_back(p);
  }
  return chart;
}

// Two rings of sectors aligned with the blend seams at eps and 2*eps, so no
// cell straddles a seam.
Chart glue_disk_chart(const Evaluator& ev) {
  const GlueData& g = *ev.config().glue;
  Chart chart;
  chart.centre = g.w0;
  for (int ring = 0; ring < 2; ++ring)
    for (int j = 0; j < 4; ++j)
      chart.seeds.push_back(Cell{g.eps * ring, g.eps * (ring + 1),
                                 kPi / 2.0 * j, kPi / 2.0 * (j + 1), 0, 0.0,
                                 0.0});
  for (const SpecialPoint& p : ev.special_points()) {
    if (!p.from_glue) continue;
    chart.specials.push_back(SpecialPoint{p.pos - g.w0, p.scale, p.pole, true});
  }
  return chart;
}

class Integrator {
 public:
  // tol_override > 0 replaces the relative/absolute tolerance rule with a
  // fixed absolute target.
  Integrator(std::function<double(Complex)> sample, const Chart& chart,
             const QuadratureConfig& qc, double tol_override = 0.0)
      : sample_(std::move(sample)),
        chart_(chart),
        qc_(qc),
        tol_override_(tol_override) {}

  IntegralResult run() {
    for (const Cell& c : chart_.seeds) admit(c);
    refine();
    return finish();
  }

 private:
  void evaluate_cell(Cell& c) {
    const double rm = 0.5 * (c.r0 + c.r1);
    const double rh = 0.5 * (c.r1 - c.r0);
    const double tm = 0.5 * (c.th0 + c.th1);
    const double th = 0.5 * (c.th1 - c.th0);
    double vals[15][15];
    for (int i = 0; i < 15; ++i) {
      const double r = rm + rh * kNodes[i];
      for (int j = 0; j < 15; ++j) {
        const double t = tm + th * kNodes[j];
        const Complex w = chart_.centre + Complex{r * std::cos(t), r * std::sin(t)};
        vals[i][j] = sample_(w) * r;
      }
    }
    evaluations_ += 225;
    double i15 = 0.0;
    for (int i = 0; i < 15; ++i) {
      double row = 0.0;
      for (int j = 0; j < 15; ++j) row += kKronrodWeights[j] * vals[i][j];
      i15 += kKronrodWeights[i] * row;
    }
    double i7 = 0.0;
    for (int i = 0; i < 7; ++i) {
      double row = 0.0;
      for (int j = 0; j < 7; ++j) {
        row += kGaussWeights[j] * vals[kGaussIndex[i]][kGaussIndex[j]];
      }
      i7 += kGaussWeights[i] * row;
    }
    const double jac = rh * th;
    c.value = i15 * jac;
    c.err = std::abs((i15 - i7) * jac);
  }

  bool force_split(const Cell& c) const {
    if (c.depth >= qc_.max_depth) return false;
    const double diam = cell_diameter(c);
    const double pad = static_cast<double>(qc_.special_point_padding);
    for (const SpecialPoint& p : chart_.specials) {
      if (diam <= p.scale) continue;
      if (cell_distance(c, p.pos) <= pad * diam) return true;
    }
    return false;
  }

  void split(const Cell& c, Cell& left, Cell& right) const {
    const double rm = 0.5 * (c.r0 + c.r1);
    const double radial_extent = c.r1 - c.r0;
    const double angular_extent = rm * (c.th1 - c.th0);
    left = c;
    right = c;
    left.depth = right.depth = c.depth + 1;
    if (radial_extent >= angular_extent) {
      left.r1 = right.r0 = rm;
    } else {
      const double tmid = 0.5 * (c.th0 + c.th1);
      left.th1 = right.th0 = tmid;
    }
  }

  // Evaluates c, or splits it first while a special feature forces deeper
  // cells, and accounts the outcome into the running totals.
  void admit(Cell c) {
    if (force_split(c)) {
      Cell a, b;
      split(c, a, b);
      admit(a);
      admit(b);
      return;
    }
    evaluate_cell(c);
    total_value_ += c.value;
    total_err_ += c.err;
    if (c.depth >= qc_.max_depth) {
      frozen_.push_back(c);
      frozen_err_ += c.err;
    } else {
      heap_.push(c);
    }
    if (static_cast<long long>(heap_.size() + frozen_.size()) > kCellBudget) {
      throw AccuracyError("quadrature cell budget exhausted", total_value_,
                          total_err_);
    }
  }

  double tolerance(double value) const {
    if (tol_override_ > 0.0) return tol_override_;
    return std::max(qc_.abs_tol, qc_.rel_tol * std::abs(value));
  }

  void refine() {
    while (total_err_ > tolerance(total_value_)) {
      // Frozen error can never shrink, so once it alone exceeds the target
      // no amount of further splitting elsewhere can succeed.
      if (frozen_err_ > tolerance(total_value_) || heap_.empty()) {
        std::ostringstream os;
        os << "quadrature error " << std::max(total_err_, frozen_err_)
           << " above tolerance with cells frozen at max depth "
           << qc_.max_depth;
        throw AccuracyError(os.str(), total_value_, total_err_);
      }
      const Cell worst = heap_.top();
      heap_.pop();
      total_value_ -= worst.value;
      total_err_ -= worst.err;
      Cell a, b;
      split(worst, a, b);
      admit(a);
      admit(b);
    }
  }

  IntegralResult finish() {
    std::vector<Cell> leaves = std::move(frozen_);
    while (!heap_.empty()) {
      leaves.push_back(heap_.top());
      heap_.pop();
    }
    std::sort(leaves.begin(), leaves.end(), [](const Cell& a, const Cell& b) {
      if (a.r0 != b.r0) return a.r0 < b.r0;
      if (a.th0 != b.th0) return a.th0 < b.th0;
      if (a.r1 != b.r1) return a.r1 < b.r1;
      return a.th1 < b.th1;
    });
    Kahan value;
    Kahan err;
    for (const Cell& c : leaves) {
      value.add(c.value);
      err.add(c.err);
    }
    IntegralResult out;
    out.value = value.sum;
    out.error_estimate = err.sum;
    out.cells = static_cast<long long>(leaves.size());
    out.evaluations = evaluations_;
    if (out.error_estimate > tolerance(out.value)) {
      throw AccuracyError("quadrature did not converge", out.value,
                          out.error_estimate);
    }
    return out;
  }

  static constexpr long long kCellBudget = 3000000;

  std::function<double(Complex)> sample_;
  Chart chart_;
  QuadratureConfig qc_;
  double tol_override_;
  std::priority_queue<Cell, std::vector<Cell>, CellOrder> heap_;
  std::vector<Cell> frozen_;
  double total_value_ = 0.0;
  double total_err_ = 0.0;
  double frozen_err_ = 0.0;
  long long evaluations_ = 0;
};

IntegralResult combine(const IntegralResult& a, const IntegralResult& b) {
  return {a.value + b.value, a.error_estimate + b.error_estimate,
          a.cells + b.cells, a.evaluations + b.evaluations};
}

IntegralResult integrate(const Evaluator& ev, Mode mode,
                         const PrismGeometry* geom,
                         const QuadratureConfig& qc) {
  auto point_value = [mode, geom](const PairJet& jet, Complex w) {
    const DensitySample d = density(jet);
    switch (mode) {
      case Mode::Oriented:
        return d.oriented;
      case Mode::Unoriented:
        return d.unoriented;
      case Mode::Energy:
        return 16.0 * boundary_radius(w, *geom) * d.unoriented;
    }
    return 0.0;
  };
  auto full = [&](Complex w) { return point_value(ev.jet(w), w); };

  if (!ev.config().glue) {
    return Integrator(full, quarter_disk_chart(ev, true), qc).run();
  }

  // A glued map equals the unglued one outside the disk |w - w0| < 2*eps,
  // and the blend seams at eps and 2*eps are only C^0. Integrate the smooth
  // unglued map over the whole quarter disk, then add the difference over a
  // disk chart whose ring boundaries lie exactly on the seams.
  auto unglued = [&](Complex w) { return point_value(ev.unglued_jet(w), w); };
  auto diff = [&](Complex w) { return full(w) - unglued(w); };
  const Chart global = quarter_disk_chart(ev, false);
  const Chart local = glue_disk_chart(ev);

  QuadratureConfig half = qc;
  half.abs_tol *= 0.5;
  half.rel_tol *= 0.5;
  IntegralResult g = Integrator(unglued, global, half).run();
  IntegralResult l = Integrator(diff, local, half).run();

  // The terms may cancel, leaving per-term relative targets looser than the
  // combined one; retighten offenders with absolute targets.
  const double target =
      std::max(qc.abs_tol, qc.rel_tol * std::abs(g.value + l.value));
  if (g.error_estimate + l.error_estimate > target) {
    if (g.error_estimate > 0.5 * target)
      g = Integrator(unglued, global, qc, 0.5 * target).run();
    if (l.error_estimate > 0.5 * target)
      l = Integrator(diff, local, qc, 0.5 * target).run();
  }
  IntegralResult out = combine(g, l);
  if (out.error_estimate >
      std::max(qc.abs_tol, qc.rel_tol * std::abs(out.value))) {
    throw AccuracyError("glued quadrature did not converge", out.value,
                        out.error_estimate);
  }
  return out;
}

}  // namespace

void validate(const QuadratureConfig& qc) {
  if (!(qc.rel_tol > 0.0) || !(qc.abs_tol > 0.0)) {
    throw std::invalid_argument("quadrature tolerances must be positive");
  }
  if (qc.max_depth < 2 || qc.max_depth > 96) {
    throw std::invalid_argument("quadrature max_depth must lie in [2, 96]");
  }
  if (qc.special_point_padding < 0 || qc.special_point_padding > 64) {
    throw std::invalid_argument(
        "quadrature special_point_padding must lie in [0, 64]");
  }
}

DensitySample density(const PairJet& jet) {
  const Complex wr = jet.nw * jet.d - jet.n * jet.dw;
  const Complex wb = jet.nwb * jet.d - jet.n * jet.dwb;
  const double half = std::norm(jet.n) + std::norm(jet.d);
  const double denom = half * half;
  const double holo = std::norm(wr) / denom;
  const double anti = std::norm(wb) / denom;
  DensitySample out{4.0 * (anti - holo), 4.0 * (anti + holo)};
  if (std::abs(out.oriented) > out.unoriented) {
    g_density_violations.fetch_add(1, std::memory_order_relaxed);
  }
  return out;
}

IntegralResult trapped_area(const Evaluator& ev, const QuadratureConfig& qc) {
  validate(qc);
  return integrate(ev, Mode::Oriented, nullptr, qc);
}

IntegralResult trapped_area(const Configuration& cfg,
                            const QuadratureConfig& qc) {
  return trapped_area(Evaluator(cfg), qc);
}

IntegralResult unoriented_area(const Evaluator& ev,
                               const QuadratureConfig& qc) {
  validate(qc);
  return integrate(ev, Mode::Unoriented, nullptr, qc);
}

IntegralResult unoriented_area(const Configuration& cfg,
                               const QuadratureConfig& qc) {
  return unoriented_area(Evaluator(cfg), qc);
}

IntegralResult energy(const Evaluator& ev, const PrismGeometry& geom,
                      const QuadratureConfig& qc) {
  validate(qc);
  make_geometry(geom.lx, geom.ly, geom.lz);
  return integrate(ev, Mode::Energy, &geom, qc);
}

IntegralResult energy(const Configuration& cfg, const PrismGeometry& geom,
                      const QuadratureConfig& qc) {
  return energy(Evaluator(cfg), geom, qc);
}

long long density_violations() {
  return g_density_violations.load(std::memory_order_relaxed);
}

void reset_density_violations() {
  g_density_violations.store(0, std::memory_order_relaxed);
}

}  // namespace prism
