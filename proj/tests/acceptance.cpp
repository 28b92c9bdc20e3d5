// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. argv[1] is the path to the command line binary.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "prism/bounds.hpp"
#include "prism/builders.hpp"
#include "prism/serialize.hpp"
#include "prism/verify.hpp"
#include "support.hpp"

using namespace prism;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kPi = 3.14159265358979323846;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Gate {
  bool all_ok = true;
  std::vector<std::pair<int, std::string>> lines;

  void report(int criterion, bool ok, const std::string& detail) {
    all_ok = all_ok && ok;
    std::ostringstream line;
    line << "criterion " << criterion << ": " << (ok ? "PASS" : "FAIL")
         << " (" << detail << ")";
    lines.emplace_back(criterion, line.str());
  }

  void print() {
    std::sort(lines.begin(), lines.end());
    for (const auto& [criterion, line] : lines) std::cout << line << "\n";
    std::cout.flush();
  }
};

std::vector<VertexTopology> full_sweep(int kmax, int mmax) {
  std::vector<VertexTopology> out;
  for (int ei = 0; ei < 8; ++ei) {
    const SignTriple e = WrappingNumbers::octant(ei);
    for (int kx = -kmax; kx <= kmax; ++kx)
      for (int ky = -kmax; ky <= kmax; ++ky)
        for (int kz = -kmax; kz <= kmax; ++kz)
          for (int m = -mmax; m <= mmax; ++m) {
            const VertexTopology vt{e, {kx, ky, kz}, m};
            if (is_realizable(vt)) out.push_back(vt);
          }
  }
  return out;
}

// Classification read directly off the covering-count signs.
Classification sign_classification(const WrappingNumbers& w) {
  int lo = w.w[0];
  int hi = w.w[0];
  for (int v : w.w) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi <= 0) return {TopologyKind::Conformal, hi == 0};
  if (lo >= 0) return {TopologyKind::Anticonformal, lo == 0};
  return {TopologyKind::Nonconformal, false};
}

void criterion_1(Gate& gate) {
  const auto start = Clock::now();
  const std::vector<VertexTopology> sweep = full_sweep(3, 63);
  long long checked = 0;
  long long agreed = 0;
  bool sums_ok = true;
  for (const VertexTopology& vt : sweep) {
    const WrappingNumbers w = wrapping_numbers(vt);
    sums_ok = sums_ok && (w.sum() == vt.m);
    const Classification via_omega = classify(vt);
    const Classification via_signs = sign_classification(w);
    ++checked;
    if (via_omega == via_signs) ++agreed;
  }
  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << checked << " topologies, " << agreed
         << " classification agreements, sum rule "
         << (sums_ok ? "exact" : "violated") << ", " << elapsed << "s";
  gate.report(1, sums_ok && checked > 0 && agreed == checked && elapsed < 5.0,
              detail.str());
}

void criterion_2(Gate& gate) {
  const std::vector<VertexTopology> sweep = full_sweep(3, 63);
  long long built = 0;
  long long exact = 0;
  int cases_seen[6] = {0, 0, 0, 0, 0, 0};
  for (const VertexTopology& vt : sweep) {
    const Classification cls = classify(vt);
    if (cls.kind == TopologyKind::Nonconformal) continue;
    const bool anti = cls.kind == TopologyKind::Anticonformal;
    const Configuration cfg =
        anti ? build_anticonformal(vt) : build_conformal(vt);
    ++built;
    if (configuration_invariants(cfg) == vt) ++exact;
    if (cfg.rotations == 1) cases_seen[3]++;
    if (cfg.rotations == 2) cases_seen[4]++;
    if (cfg.conjugated) cases_seen[5]++;
    const int nmag = std::abs(cfg.base.n);
    if (nmag == 1) cases_seen[0]++;
    if (nmag == 3) cases_seen[1]++;
    if (nmag > 3) cases_seen[2]++;
  }
  bool variety = true;
  for (int c : cases_seen) variety = variety && c > 0;
  std::ostringstream detail;
  detail << built << " builds, " << exact << " exact round trips, case mix "
         << cases_seen[0] << "/" << cases_seen[1] << "/" << cases_seen[2]
         << " with " << cases_seen[3] << "+" << cases_seen[4]
         << " rotated and " << cases_seen[5] << " conjugated";
  gate.report(2, built > 0 && exact == built && variety, detail.str());
}

void criterion_3(Gate& gate) {
  const auto start = Clock::now();
  std::mt19937_64 g(777);
  int exact = 0;
  double worst_residual = 0.0;
  const int total = 200;
  for (int i = 0; i < total; ++i) {
    Configuration cfg;
    cfg.base = testsupport::random_spec(g, 2, 2);
    const VertexTopology predicted = spec_invariants(cfg.base);
    const Evaluator ev(cfg);
    const SignTriple e = measure_edge_signs(ev);
    const KinkMeasurement km = measure_kink_numbers(ev);
    const TrappedAreaMeasurement ta = measure_trapped_area(ev);
    worst_residual = std::max(worst_residual, ta.residual);
    if (e == predicted.e && km.k == predicted.k && ta.m == predicted.m &&
        ta.residual < 1e-6 * kPi / 2.0) {
      ++exact;
    }
  }
  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << exact << "/" << total << " specs exact, worst area residual "
         << worst_residual << ", " << elapsed << "s";
  gate.report(3, exact == total && elapsed < 120.0, detail.str());
}

void criterion_4(Gate& gate) {
  const VertexTopology vt{make_signs(1, 1, 1), {1, 1, 0}, -1};
  const PrismGeometry cube;
  const WrappingNumbers w = wrapping_numbers(vt);
  const std::array<int, 8> expected_w{0, 1, 0, 0, 0, 0, -1, -1};
  const bool w_ok = w.w == expected_w;

  const double lower_new = lower_bound_new(vt, cube);
  const double lower_old = lower_bound_old(vt, cube);
  const bool bounds_ok = lower_new == 4.0 * kPi * 1.0 * 3.0 &&
                         lower_old == 4.0 * kPi * 1.0 * 1.0 &&
                         lower_new == 3.0 * lower_old;

  const QuadratureConfig qc;
  const Configuration cfg = build_representative(vt, qc);
  const VerificationReport report = verify(cfg, vt, qc);
  const double area = unoriented_area(cfg, qc).value;
  const double e = energy(cfg, cube, qc).value;
  const double diag = cube.diagonal();
  const bool area_ok = area <= 17.0 * kPi / 2.0 + 1e-6;
  const bool energy_ok =
      e >= lower_new - 1e-6 && e <= 8.0 * diag * area + 1e-6;

  std::ostringstream detail;
  detail << "w " << (w_ok ? "exact" : "wrong") << ", bound gap factor 3 "
         << (bounds_ok ? "exact" : "wrong") << ", verify "
         << (report.pass ? "pass" : "fail") << ", A=" << area
         << " <= 17pi/2=" << 17.0 * kPi / 2.0 << ", E=" << e;
  gate.report(4, w_ok && bounds_ok && report.pass && area_ok && energy_ok,
              detail.str());
}

void criterion_5(Gate& gate) {
  const auto start = Clock::now();
  const VertexTopology vt{make_signs(1, 1, 1), {0, 0, 0}, -1};
  const PrismGeometry cube;
  QuadratureConfig qc;
  qc.rel_tol = 1e-8;
  const Configuration cfg = build_representative(vt, qc);
  const double omega = trapped_area(cfg, qc).value;
  const double e = energy(cfg, cube, qc).value;
  const double lo = lower_bound_new(vt, cube);
  const double hi = upper_bound_formula(vt, cube);
  const bool endpoints_exact =
      lo == 4.0 * kPi * 1.0 * 1.0 && lower_bound_old(vt, cube) == lo &&
      hi == 4.0 * kPi * std::sqrt(3.0) * 1.0;
  const bool omega_ok = std::abs(omega + kPi / 2.0) < 1e-6;
  const bool energy_ok = e >= lo && e <= hi;
  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << "Omega=" << omega << ", E=" << e << " in [" << lo << ", " << hi
         << "], endpoints " << (endpoints_exact ? "exact" : "wrong") << ", "
         << elapsed << "s";
  gate.report(5, omega_ok && energy_ok && endpoints_exact && elapsed < 10.0,
              detail.str());
}

void criterion_6(Gate& gate) {
  std::mt19937_64 g(90210);
  int ok_count = 0;
  const int total = 20;
  double worst = 0.0;
  for (int i = 0; i < total; ++i) {
    // Random conformal topology: random signs and kinks, m at or below the
    // conformal threshold.
    const SignTriple e = WrappingNumbers::octant(static_cast<int>(g() % 8));
    const KinkTriple k{static_cast<int>(g() % 5) - 2,
                       static_cast<int>(g() % 5) - 2,
                       static_cast<int>(g() % 5) - 2};
    const int omega = omega_chi(e, k, -1);
    const int m = -omega - 8 * static_cast<int>(g() % 3);
    const VertexTopology vt{e, k, m};
    const Configuration cfg = build_conformal(vt);
    const double trapped = trapped_area(cfg).value;
    const double total_area = unoriented_area(cfg).value;
    const double mismatch = std::abs(total_area - std::abs(trapped));
    worst = std::max(worst, mismatch / std::abs(trapped));
    if (mismatch < 1e-6 * std::abs(trapped)) ++ok_count;
  }
  std::ostringstream detail;
  detail << ok_count << "/" << total
         << " conformal builds area-matched, worst relative mismatch "
         << worst;
  gate.report(6, ok_count == total, detail.str());
}

void criterion_8(Gate& gate) {
  RationalSpec fixture;
  fixture.epsilon = -1;
  fixture.n = 1;
  fixture.real_factors = {{0.5, -1}};
  fixture.imag_factors = {{0.5, -1}};

  Configuration plain;
  plain.base = fixture;
  Configuration rotated = plain;
  rotated.rotations = 1;
  Configuration conjugated = plain;
  conjugated.conjugated = true;
  Configuration glued = plain;
  glued.glue = GlueData{{0.35, 0.35}, 0.08, 2};

  struct ClassSpec {
    const char* name;
    const Configuration* cfg;
    double h;
    bool annulus;
    bool disk;
  };
  const ClassSpec classes[] = {
      {"plain", &plain, 1e-6, false, false},
      {"rotated", &rotated, 1e-6, false, false},
      {"conjugated", &conjugated, 1e-6, false, false},
      {"glued annulus", &glued, 1e-7, true, false},
      {"glued disk", &glued, 1e-7, false, true},
  };

  bool all_ok = true;
  std::ostringstream detail;
  std::mt19937_64 g(31337);
  for (const ClassSpec& cls : classes) {
    const Evaluator ev(*cls.cfg);
    int used = 0;
    int attempts = 0;
    double worst = 0.0;
    while (used < 100 && attempts < 20000) {
      ++attempts;
      Complex w;
      if (cls.annulus || cls.disk) {
        const double lo = cls.disk ? 0.15 : 1.1;
        const double hi = cls.disk ? 0.85 : 1.9;
        const double rho =
            glued.glue->eps * (lo + (hi - lo) * testsupport::rand_unit(g));
        const double th = testsupport::rand_unit(g) * 2.0 * kPi;
        w = glued.glue->w0 + rho * Complex{std::cos(th), std::sin(th)};
      } else {
        const double r = 0.08 + 0.84 * testsupport::rand_unit(g);
        const double th = testsupport::rand_unit(g) * kPi / 2.0;
        w = Complex{r * std::cos(th), r * std::sin(th)};
      }
      const double err = testsupport::fd_jet_error(ev, w, cls.h);
      if (err < 0.0) continue;
      ++used;
      worst = std::max(worst, err);
    }
    const bool ok = used == 100 && worst < 1e-6;
    all_ok = all_ok && ok;
    detail << cls.name << " " << used << " pts worst " << worst << "; ";
  }
  gate.report(8, all_ok, detail.str());
}

void criterion_9(Gate& gate) {
  bool ok = true;
  const VertexTopology conformal{make_signs(1, 1, 1), {0, 0, 0}, -1};
  const VertexTopology nonconformal{make_signs(1, 1, 1), {1, 1, 0}, -1};
  for (const PrismGeometry& geom :
       {make_geometry(1.0, 1.0, 1.0), make_geometry(3.0, 2.0, 1.0),
        make_geometry(10.0, 0.5, 0.25)}) {
    const double base_ratio = geom.diagonal() / geom.min_edge();
    ok = ok && bounds_report(conformal, geom).ratio == base_ratio;
    ok = ok && bounds_report(nonconformal, geom).ratio == 9.0 * base_ratio;
  }
  gate.report(9, ok, "L/Lmin and 9L/Lmin reproduced exactly");
}

void criterion_10(Gate& gate, const std::string& cli) {
  const auto start = Clock::now();
  const std::string p1 = "/tmp/prism_acceptance_atlas1.csv";
  const std::string p2 = "/tmp/prism_acceptance_atlas2.csv";
  const std::string base =
      cli + " atlas --kmax 2 --m-window=-17..17 --out ";
  const int rc1 = std::system((base + p1 + " > /dev/null").c_str());
  const int rc2 = std::system((base + p2 + " > /dev/null").c_str());
  auto read = [](const std::string& path) {
    std::ifstream in(path);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
  };
  const std::string c1 = read(p1);
  const std::string c2 = read(p2);
  const double elapsed = seconds_since(start);
  const bool ok = rc1 == 0 && rc2 == 0 && !c1.empty() && c1 == c2 &&
                  elapsed < 60.0;
  std::remove(p1.c_str());
  std::remove(p2.c_str());
  std::ostringstream detail;
  detail << c1.size() << " bytes, identical " << (c1 == c2 ? "yes" : "no")
         << ", " << elapsed << "s";
  gate.report(10, ok, detail.str());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-cli>\n";
    return 2;
  }
  const std::string cli = argv[1];
  reset_density_violations();

  Gate gate;
  auto guarded = [&gate](int criterion, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      gate.report(criterion, false, std::string("exception: ") + e.what());
    }
  };
  guarded(1, [&] { criterion_1(gate); });
  guarded(2, [&] { criterion_2(gate); });
  guarded(3, [&] { criterion_3(gate); });
  guarded(4, [&] { criterion_4(gate); });
  guarded(5, [&] { criterion_5(gate); });
  guarded(6, [&] { criterion_6(gate); });
  guarded(8, [&] { criterion_8(gate); });
  guarded(9, [&] { criterion_9(gate); });
  guarded(10, [&] { criterion_10(gate, cli); });

  // Evaluated last so the counter covers every sample this binary took.
  const long long violations = density_violations();
  std::ostringstream detail;
  detail << violations << " oriented-density bound violations";
  gate.report(7, violations == 0, detail.str());

  gate.print();
  return gate.all_ok ? 0 : 1;
}
