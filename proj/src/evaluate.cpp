#include "prism/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace prism {

namespace {

constexpr Complex kI{0.0, 1.0};

// Value and derivative of one projective leg while factors accumulate.
struct Leg {
  Complex v{1.0, 0.0};
  Complex dv{0.0, 0.0};
};

void multiply(Leg& leg, Complex p, Complex dp) {
  leg.dv = leg.dv * p + leg.v * dp;
  leg.v = leg.v * p;
}

void maybe_rescale(Leg& num, Leg& den) {
  const double mag = std::max(std::abs(num.v), std::abs(den.v));
  if (mag > 1e30 || (mag > 0.0 && mag < 1e-30)) {
    const double s = 1.0 / mag;
    num.v *= s;
    num.dv *= s;
    den.v *= s;
    den.dv *= s;
  }
}

// z^p together with p*z^(p-1), p >= 0.
std::pair<Complex, Complex> power_jet(Complex z, int p) {
  Complex v{1.0, 0.0};
  Complex dv{0.0, 0.0};
  for (int i = 0; i < p; ++i) {
    dv = dv * z + v;
    v = v * z;
  }
  return {v, dv};
}

double clamp_scale(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) return 0.05;
  return std::clamp(s, 1e-8, 0.1);
}

void apply_corner_rotation(PairJet& j) {
  auto rotate_pair = [](Complex& n, Complex& d) {
    const Complex new_n = kI * d - n;
    const Complex new_d = kI * d + n;
    n = new_n;
    d = new_d;
  };
  rotate_pair(j.n, j.d);
  rotate_pair(j.nw, j.dw);
  rotate_pair(j.nwb, j.dwb);
}

void apply_conjugation(PairJet& j) {
  j.n = std::conj(j.n);
  j.d = std::conj(j.d);
  const Complex nw = j.nw;
  const Complex dw = j.dw;
  j.nw = std::conj(j.nwb);
  j.dw = std::conj(j.dwb);
  j.nwb = std::conj(nw);
  j.dwb = std::conj(dw);
}

}  // namespace

Complex mobius_r(Complex w) { return (kI - w) / (kI + w); }

Complex mobius_r_inv(Complex w) { return kI * (1.0 - w) / (1.0 + w); }

bool in_quarter_disk(Complex w, double tol) {
  return w.real() >= -tol && w.imag() >= -tol && std::abs(w) <= 1.0 + tol;
}

Evaluator::Evaluator(Configuration cfg) : cfg_(std::move(cfg)) {
  validate(cfg_);
  collect_special_points();
  if (cfg_.glue) {
    const GlueData& g = *cfg_.glue;
    for (const SpecialPoint& p : specials_) {
      if (!p.pole) continue;
      if (std::abs(p.pos - g.w0) <= 2.0 * g.eps + 1e-9) {
        std::ostringstream os;
        os << "glue disk at (" << g.w0.real() << "," << g.w0.imag()
           << ") with outer radius " << 2.0 * g.eps
           << " contains a pole of the base at (" << p.pos.real() << ","
           << p.pos.imag() << ")";
        throw GeometryError(os.str());
      }
    }
    const PairJet j = rotated_base_jet(g.w0);
    if (std::abs(j.d) <= 1e-14 * std::abs(j.n)) {
      throw GeometryError("glue centre coincides with a pole of the base");
    }
    a0_ = j.n / j.d;
    specials_.push_back(
        SpecialPoint{g.w0, clamp_scale(0.25 * g.eps * g.eps), true, true});
  }
}

PairJet Evaluator::base_jet(Complex u) const {
  const RationalSpec& spec = cfg_.base;
  Leg num{Complex(static_cast<double>(spec.epsilon), 0.0), Complex(0.0, 0.0)};
  Leg den{Complex(1.0, 0.0), Complex(0.0, 0.0)};

  const auto [pw, dpw] = power_jet(u, std::abs(spec.n));
  multiply(spec.n > 0 ? num : den, pw, dpw);

  const Complex u2 = u * u;
  for (const BoundaryFactor& f : spec.real_factors) {
    const double r2 = f.pos * f.pos;
    const Complex p = u2 - r2;
    const Complex dp = 2.0 * u;
    const Complex q = r2 * u2 - 1.0;
    const Complex dq = 2.0 * r2 * u;
    multiply(f.sign > 0 ? num : den, p, dp);
    multiply(f.sign > 0 ? den : num, q, dq);
    maybe_rescale(num, den);
  }
  for (const BoundaryFactor& f : spec.imag_factors) {
    const double s2 = f.pos * f.pos;
    const Complex p = u2 + s2;
    const Complex dp = 2.0 * u;
    const Complex q = s2 * u2 + 1.0;
    const Complex dq = 2.0 * s2 * u;
    multiply(f.sign > 0 ? num : den, p, dp);
    multiply(f.sign > 0 ? den : num, q, dq);
    maybe_rescale(num, den);
  }
  for (const InteriorFactor& f : spec.interior_factors) {
    const Complex t2 = f.pos * f.pos;
    const double c1 = 2.0 * t2.real();
    const double c2 = std::norm(t2);
    const Complex u4 = u2 * u2;
    const Complex p = u4 - c1 * u2 + c2;
    const Complex dp = 4.0 * u2 * u - 2.0 * c1 * u;
    const Complex q = c2 * u4 - c1 * u2 + 1.0;
    const Complex dq = 4.0 * c2 * u2 * u - 2.0 * c1 * u;
    multiply(f.sign > 0 ? num : den, p, dp);
    multiply(f.sign > 0 ? den : num, q, dq);
    maybe_rescale(num, den);
  }

  PairJet out;
  out.n = num.v;
  out.nw = num.dv;
  out.d = den.v;
  out.dw = den.dv;
  return out;
}

PairJet Evaluator::rotated_base_jet(Complex w) const {
  Complex u = w;
  Complex du{1.0, 0.0};
  for (int s = 0; s < cfg_.rotations; ++s) {
    const Complex one_plus = 1.0 + u;
    du *= Complex(0.0, -2.0) / (one_plus * one_plus);
    u = mobius_r_inv(u);
  }
  PairJet j = base_jet(u);
  j.nw *= du;
  j.dw *= du;
  for (int s = 0; s < cfg_.rotations; ++s) apply_corner_rotation(j);
  return j;
}

PairJet Evaluator::jet(Complex w) const {
  PairJet j = rotated_base_jet(w);
  if (cfg_.glue) {
    const GlueData& g = *cfg_.glue;
    const Complex delta = w - g.w0;
    const double dist = std::abs(delta);
    if (dist < 2.0 * g.eps) {
      if (dist <= g.eps) {
        // Antianalytic insertion a0 + eps^(2W) * conj(delta)^(-W).
        const auto [p, dp] = power_jet(std::conj(delta), g.wrap);
        const double e2w = std::pow(g.eps, 2 * g.wrap);
        j.n = a0_ * p + e2w;
        j.nw = Complex(0.0, 0.0);
        j.nwb = a0_ * dp;
        j.d = p;
        j.dw = Complex(0.0, 0.0);
        j.dwb = dp;
      } else {
        // Radial blend between the base and the analytic model
        // a0 + delta^W across the annulus.
        const Complex f = j.n / j.d;
        const Complex fw = (j.nw * j.d - j.n * j.dw) / (j.d * j.d);
        const auto [p, dp] = power_jet(delta, g.wrap);
        const Complex h = a0_ + p;
        const Complex hw = dp;
        const double s = (dist - g.eps) / g.eps;
        const Complex sw = std::conj(delta) / (2.0 * g.eps * dist);
        const Complex swb = delta / (2.0 * g.eps * dist);
        const Complex diff = f - h;
        j.n = s * f + (1.0 - s) * h;
        j.nw = sw * diff + s * fw + (1.0 - s) * hw;
        j.nwb = swb * diff;
        j.d = Complex(1.0, 0.0);
        j.dw = Complex(0.0, 0.0);
        j.dwb = Complex(0.0, 0.0);
      }
    }
  }
  if (cfg_.conjugated) apply_conjugation(j);
  return j;
}

PairJet Evaluator::unglued_jet(Complex w) const {
  PairJet j = rotated_base_jet(w);
  if (cfg_.conjugated) apply_conjugation(j);
  return j;
}

JetValue Evaluator::evaluate(Complex w) const {
  if (!in_quarter_disk(w)) {
    std::ostringstream os;
    os << "evaluation point (" << w.real() << "," << w.imag()
       << ") lies outside the closed quarter disk";
    throw DomainError(os.str());
  }
  PairJet j = jet(w);
  const double mag = std::max(std::abs(j.n), std::abs(j.d));
  if (!(mag > 0.0) || !std::isfinite(mag)) {
    throw ConstructionError("projective jet degenerated to 0/0");
  }
  const double s = 1.0 / mag;
  j.n *= s;
  j.d *= s;
  j.nw *= s;
  j.dw *= s;
  j.nwb *= s;
  j.dwb *= s;

  JetValue out;
  out.value = ProjectiveValue{j.n, j.d};
  out.pole_chart = out.value.pole_chart();
  if (!out.pole_chart) {
    const Complex d2 = j.d * j.d;
    out.dw = (j.nw * j.d - j.n * j.dw) / d2;
    out.dwbar = (j.nwb * j.d - j.n * j.dwb) / d2;
  } else {
    const Complex n2 = j.n * j.n;
    out.dw = (j.dw * j.n - j.d * j.nw) / n2;
    out.dwbar = (j.dwb * j.n - j.d * j.nwb) / n2;
  }
  return out;
}

void Evaluator::collect_special_points() {
  const RationalSpec& spec = cfg_.base;

  struct BasePoint {
    Complex pos;
    bool pole;
  };
  std::vector<BasePoint> points;
  points.push_back(BasePoint{Complex(0.0, 0.0), spec.n < 0});
  for (const BoundaryFactor& f : spec.real_factors) {
    points.push_back(BasePoint{Complex(f.pos, 0.0), f.sign < 0});
  }
  for (const BoundaryFactor& f : spec.imag_factors) {
    points.push_back(BasePoint{Complex(0.0, f.pos), f.sign < 0});
  }
  for (const InteriorFactor& f : spec.interior_factors) {
    points.push_back(BasePoint{f.pos, f.sign < 0});
  }

  // |f| ~ c0 |u|^n near the origin, so |f| crosses 1 at c0^(-1/n).
  double log_c0 = 0.0;
  for (const BoundaryFactor& f : spec.real_factors) {
    log_c0 += 2.0 * f.sign * std::log(f.pos);
  }
  for (const BoundaryFactor& f : spec.imag_factors) {
    log_c0 += 2.0 * f.sign * std::log(f.pos);
  }
  for (const InteriorFactor& f : spec.interior_factors) {
    log_c0 += 4.0 * f.sign * std::log(std::abs(f.pos));
  }
  const double origin_scale = std::exp(-log_c0 / spec.n);

  for (size_t i = 0; i < points.size(); ++i) {
    double scale;
    if (i == 0) {
      scale = origin_scale;
    } else {
      // Simple zero or pole; the density feature extends to where the
      // vanishing leg, growing linearly, catches the other leg.
      const PairJet j = base_jet(points[i].pos);
      const double an = std::abs(j.n);
      const double ad = std::abs(j.d);
      if (an <= 1e-6 * ad) {
        scale = ad / std::max(std::abs(j.nw), 1e-300);
      } else if (ad <= 1e-6 * an) {
        scale = an / std::max(std::abs(j.dw), 1e-300);
      } else {
        scale = 0.05;
      }
    }

    Complex pos = points[i].pos;
    double stretch = 1.0;
    for (int s = 0; s < cfg_.rotations; ++s) {
      const Complex denom = kI + pos;
      stretch *= 2.0 / std::norm(denom);
      pos = mobius_r(pos);
    }
    specials_.push_back(
        SpecialPoint{pos, clamp_scale(scale * stretch), points[i].pole});
  }
}

JetValue evaluate(const Configuration& cfg, Complex w) {
  return Evaluator(cfg).evaluate(w);
}

std::array<double, 3> sphere_point(const PairJet& jet) {
  const double nn = std::norm(jet.n);
  const double dd = std::norm(jet.d);
  const double denom = nn + dd;
  const Complex cross = jet.n * std::conj(jet.d);
  return {2.0 * cross.real() / denom, 2.0 * cross.imag() / denom,
          (dd - nn) / denom};
}

}  // namespace prism
