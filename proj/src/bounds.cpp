#include "prism/bounds.hpp"

#include <cmath>
#include <sstream>

namespace prism {

namespace {

constexpr double kPi = 3.14159265358979323846;

double chain_tol(const QuadratureConfig& qc, double value) {
  return std::max(qc.abs_tol, 10.0 * qc.rel_tol * std::abs(value));
}

std::string describe(const char* label, bool ok, double lhs, double rhs) {
  std::ostringstream os;
  os << label << ": " << lhs << (ok ? " <= " : " > ") << rhs
     << (ok ? "" : " [violated]");
  return os.str();
}

}  // namespace

double lower_bound_new(const VertexTopology& vt, const PrismGeometry& geom) {
  make_geometry(geom.lx, geom.ly, geom.lz);
  return 4.0 * kPi * geom.min_edge() * wrapping_numbers(vt).sum_abs();
}

double lower_bound_old(const VertexTopology& vt, const PrismGeometry& geom) {
  make_geometry(geom.lx, geom.ly, geom.lz);
  require_realizable(vt);
  return 4.0 * kPi * geom.min_edge() * std::abs(vt.m);
}

double upper_bound_formula(const VertexTopology& vt,
                           const PrismGeometry& geom) {
  make_geometry(geom.lx, geom.ly, geom.lz);
  const Classification cls = classify(vt);
  if (cls.kind == TopologyKind::Nonconformal) {
    return 36.0 * kPi * geom.diagonal() * wrapping_numbers(vt).sum_abs();
  }
  return 4.0 * kPi * geom.diagonal() * std::abs(vt.m);
}

BoundsReport bounds_report(const VertexTopology& vt, const PrismGeometry& geom,
                           const QuadratureConfig& qc, bool with_measurement) {
  make_geometry(geom.lx, geom.ly, geom.lz);
  validate(qc);

  BoundsReport report;
  report.topology = vt;
  report.classification = classify(vt);
  report.w = wrapping_numbers(vt);
  report.sum_abs_w = report.w.sum_abs();
  report.lower_new = lower_bound_new(vt, geom);
  report.lower_old = lower_bound_old(vt, geom);
  report.upper_formula = upper_bound_formula(vt, geom);
  report.geometry_warning = !geom.canonically_ordered();

  const bool nonconformal =
      report.classification.kind == TopologyKind::Nonconformal;
  const double ratio_base = geom.diagonal() / geom.min_edge();
  report.ratio = nonconformal ? 9.0 * ratio_base : ratio_base;

  int m_minus_glue = 0;
  if (nonconformal) {
    const VertexTopology negative_side =
        vt.m < 0 ? vt : conjugate_topology(vt);
    m_minus_glue = omega_chi(negative_side.e, negative_side.k, -1);
    report.wrap_increment = (negative_side.m + m_minus_glue) / 8;
  }

  bool ok = true;
  auto note_check = [&](const char* label, double lhs, double rhs,
                        double tol) {
    const bool pass = lhs <= rhs + tol;
    ok = ok && pass;
    report.notes.push_back(describe(label, pass, lhs, rhs + tol));
  };

  // Closed-form relations; exact up to rounding.
  note_check("lower_old <= lower_new", report.lower_old, report.lower_new,
             1e-9 * std::abs(report.lower_new));
  note_check("lower_new <= upper_formula", report.lower_new,
             report.upper_formula, 1e-9 * std::abs(report.upper_formula));

  if (with_measurement) {
    const Configuration cfg = build_representative(vt, qc);
    const Evaluator ev(cfg);
    const double diag = geom.diagonal();

    const IntegralResult e_res = energy(ev, geom, qc);
    const IntegralResult a_res = unoriented_area(ev, qc);
    const IntegralResult o_res = trapped_area(ev, qc);
    report.measured_energy = e_res.value;
    report.measured_unoriented = a_res.value;
    report.measured_trapped = o_res.value;

    note_check("lower_new <= energy", report.lower_new, e_res.value,
               chain_tol(qc, e_res.value));
    note_check("energy <= 8*L*area", e_res.value, 8.0 * diag * a_res.value,
               chain_tol(qc, 8.0 * diag * a_res.value));
    {
      const double target = vt.m * kPi / 2.0;
      const bool quantized =
          std::abs(o_res.value - target) <= chain_tol(qc, o_res.value);
      ok = ok && quantized;
      std::ostringstream os;
      os << "trapped area " << o_res.value << " matches m*pi/2 = " << target
         << (quantized ? "" : " [violated]");
      report.notes.push_back(os.str());
    }
    if (nonconformal) {
      const double glue_area =
          m_minus_glue * kPi / 2.0 + 4.0 * kPi * report.wrap_increment;
      const double cap = 4.5 * kPi * report.sum_abs_w;
      note_check("area <= |Omega_-| + 4*pi*W", a_res.value, glue_area,
                 chain_tol(qc, glue_area));
      note_check("|Omega_-| + 4*pi*W <= (9/2)*pi*sum|w|", glue_area, cap,
                 1e-9 * cap);
      note_check("2W <= sum|w|", 2.0 * report.wrap_increment,
                 static_cast<double>(report.sum_abs_w), 0.0);
    } else {
      note_check("energy <= upper_formula", e_res.value, report.upper_formula,
                 chain_tol(qc, report.upper_formula));
    }
  }

  report.chain_ok = ok;
  return report;
}

}  // namespace prism
