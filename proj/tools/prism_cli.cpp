#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "prism/bounds.hpp"
#include "prism/builders.hpp"
#include "prism/quadrature.hpp"
#include "prism/serialize.hpp"
#include "prism/verify.hpp"

namespace {

using namespace prism;

// Exit codes: 0 success, 1 usage, 2 invalid topology or configuration,
// 3 unreadable or unwritable path, 4 verification failure, 5 accuracy
// failure.
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInvalidInput = 2;
constexpr int kIoFailure = 3;
constexpr int kVerifyFailure = 4;
constexpr int kAccuracyFailure = 5;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

int parse_int(const std::string& tok, const std::string& what) {
  try {
    size_t pos = 0;
    int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw UsageError(what + ": not an integer: '" + tok + "'");
  }
}

double parse_num(const std::string& tok, const std::string& what) {
  try {
    size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw UsageError(what + ": not a number: '" + tok + "'");
  }
}

int parse_sign(const std::string& tok) {
  if (tok == "+" || tok == "+1" || tok == "1") return 1;
  if (tok == "-" || tok == "-1") return -1;
  throw UsageError("sign token must be + or -, got '" + tok + "'");
}

SignTriple parse_signs(const std::string& s) {
  auto toks = split_commas(s);
  if (toks.size() != 3) throw UsageError("--e needs three comma separated signs");
  return make_signs(parse_sign(toks[0]), parse_sign(toks[1]), parse_sign(toks[2]));
}

KinkTriple parse_kinks(const std::string& s) {
  auto toks = split_commas(s);
  if (toks.size() != 3) throw UsageError("--k needs three comma separated integers");
  return {parse_int(toks[0], "--k"), parse_int(toks[1], "--k"),
          parse_int(toks[2], "--k")};
}

PrismGeometry parse_geometry(const std::string& s) {
  auto toks = split_commas(s);
  if (toks.size() != 3)
    throw UsageError("--geometry needs three comma separated lengths");
  try {
    return make_geometry(parse_num(toks[0], "--geometry"),
                         parse_num(toks[1], "--geometry"),
                         parse_num(toks[2], "--geometry"));
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--geometry: ") + e.what());
  }
}

std::pair<int, int> parse_window(const std::string& s) {
  auto dots = s.find("..");
  if (dots == std::string::npos)
    throw UsageError("--m-window must look like A..B");
  int lo = parse_int(s.substr(0, dots), "--m-window");
  int hi = parse_int(s.substr(dots + 2), "--m-window");
  if (lo > hi) throw UsageError("--m-window bounds out of order");
  return {lo, hi};
}

int thread_count() {
  unsigned hc = std::thread::hardware_concurrency();
  int n = hc == 0 ? 1 : static_cast<int>(std::min(hc, 8u));
  if (const char* env = std::getenv("PRISM_HEDGEHOG_THREADS")) {
    n = std::max(1, parse_int(env, "PRISM_HEDGEHOG_THREADS"));
  }
  return n;
}

std::string sign_str(const SignTriple& e) {
  auto c = [](int s) { return s > 0 ? '+' : '-'; };
  return std::string("(") + c(e.sx) + "," + c(e.sy) + "," + c(e.sz) + ")";
}

std::string topology_str(const VertexTopology& vt) {
  return "e=" + sign_str(vt.e) + " k=(" + std::to_string(vt.k.kx) + "," +
         std::to_string(vt.k.ky) + "," + std::to_string(vt.k.kz) +
         ") m=" + std::to_string(vt.m);
}

std::string octant_label(int index) {
  SignTriple s = WrappingNumbers::octant(index);
  auto c = [](int v) { return v > 0 ? '+' : '-'; };
  return std::string() + c(s.sx) + c(s.sy) + c(s.sz);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

// Shared flag bundle for commands taking a declared topology.
struct TopologyFlags {
  std::string e = "+,+,+";
  std::string k = "0,0,0";
  int m = -1;

  VertexTopology parse() const { return {parse_signs(e), parse_kinks(k), m}; }

  void add_to(CLI::App* cmd) {
    cmd->add_option("--e", e, "edge signs, e.g. +,+,-")->required();
    cmd->add_option("--k", k, "kink numbers, e.g. -1,0,2")->required();
    cmd->add_option("--m,--omega-halfpi", m, "trapped area in half-pi units")
        ->required();
  }
};

struct QuadratureFlags {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  int max_depth = 64;
  int padding = 4;

  QuadratureConfig parse() const {
    QuadratureConfig qc;
    qc.rel_tol = rel_tol;
    qc.abs_tol = abs_tol;
    qc.max_depth = max_depth;
    qc.special_point_padding = padding;
    validate(qc);
    return qc;
  }

  void add_to(CLI::App* cmd) {
    cmd->add_option("--rel-tol", rel_tol, "quadrature relative tolerance");
    cmd->add_option("--abs-tol", abs_tol, "quadrature absolute tolerance");
    cmd->add_option("--max-depth", max_depth, "quadrature cell depth limit");
    cmd->add_option("--padding", padding,
                    "forced refinement reach near zeros and poles");
  }
};

int run_classify(const VertexTopology& vt, bool json) {
  std::string violation = realizability_violation(vt);
  if (json) std::cout << classification_json(vt);
  if (!violation.empty()) {
    if (!json) {
      std::cout << "topology: " << topology_str(vt) << "\n"
                << "realizable: no\n"
                << "violation: " << violation << "\n";
    }
    return kInvalidInput;
  }
  if (!json) {
    Classification cls = classify(vt);
    WrappingNumbers w = wrapping_numbers(vt);
    std::cout << "topology: " << topology_str(vt) << "\n"
              << "realizable: yes\n"
              << "classification: " << to_string(cls.kind)
              << (cls.boundary ? " (boundary)" : "") << "\n"
              << "omega_minus: " << omega_chi(vt.e, vt.k, -1)
              << " half-pi units, omega_plus: " << omega_chi(vt.e, vt.k, +1)
              << " half-pi units\n";
    for (int i = 0; i < 8; ++i)
      std::cout << "w[" << octant_label(i) << "]=" << w.w[i]
                << (i == 7 ? "\n" : " ");
    std::cout << "sum w = " << w.sum() << ", sum |w| = " << w.sum_abs() << "\n";
  }
  return kOk;
}

int run_build(const VertexTopology& vt, const QuadratureConfig& qc,
              const std::string& out_path) {
  require_realizable(vt);
  Configuration cfg = build_representative(vt, qc);
  std::string text = serialize_configuration(cfg);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    auto out = open_output(out_path);
    out << text;
    finish_output(out, out_path);
    std::cout << "class: " << to_string(classify(vt).kind) << "\n"
              << "wrote: " << out_path << "\n";
  }
  return kOk;
}

int run_verify(const std::string& config_path, const VertexTopology& declared,
               const QuadratureConfig& qc, const VerifyOptions& opts,
               bool json) {
  require_realizable(declared);
  Configuration cfg = load_configuration(config_path);
  VerificationReport report = verify(cfg, declared, qc, opts);
  if (json) {
    std::cout << verification_json(report);
  } else {
    std::cout << "declared: " << topology_str(report.declared) << "\n"
              << "measured: " << topology_str(report.measured) << "\n"
              << "boundary residual: " << format_double(report.boundary_residual)
              << "\n"
              << "area residual: " << format_double(report.area_residual) << "\n"
              << "winding residual: " << format_double(report.winding_residual)
              << "\n"
              << "pass: " << (report.pass ? "yes" : "no") << "\n";
  }
  return report.pass ? kOk : kVerifyFailure;
}

int run_bounds(const VertexTopology& vt, const PrismGeometry& geom,
               const QuadratureConfig& qc, bool measure, bool json) {
  require_realizable(vt);
  BoundsReport report = bounds_report(vt, geom, qc, measure);
  if (json) {
    std::cout << bounds_json(report);
  } else {
    std::cout << "topology: " << topology_str(vt) << "\n"
              << "classification: " << to_string(report.classification.kind)
              << (report.classification.boundary ? " (boundary)" : "") << "\n"
              << "sum |w| = " << report.sum_abs_w << "\n"
              << "lower bound (new): " << format_double(report.lower_new) << "\n"
              << "lower bound (old): " << format_double(report.lower_old) << "\n"
              << "upper bound: " << format_double(report.upper_formula) << "\n"
              << "upper/lower ratio: " << format_double(report.ratio) << "\n";
    if (report.geometry_warning)
      std::cout << "warning: edge lengths not sorted descending; bound "
                   "formulas are stated for lx >= ly >= lz\n";
    if (report.measured_energy)
      std::cout << "measured energy: " << format_double(*report.measured_energy)
                << "\n";
    if (report.measured_unoriented)
      std::cout << "measured unoriented area: "
                << format_double(*report.measured_unoriented) << "\n";
    if (report.measured_trapped)
      std::cout << "measured trapped area: "
                << format_double(*report.measured_trapped) << "\n";
    std::cout << "chain: " << (report.chain_ok ? "ok" : "violated") << "\n";
    for (const auto& note : report.notes) std::cout << "note: " << note << "\n";
  }
  return report.chain_ok ? kOk : kVerifyFailure;
}

void atlas_rows(int kmax, int m_lo, int m_hi,
                std::vector<VertexTopology>& rows) {
  for (int ei = 0; ei < 8; ++ei) {
    SignTriple e = WrappingNumbers::octant(ei);
    for (int kx = -kmax; kx <= kmax; ++kx)
      for (int ky = -kmax; ky <= kmax; ++ky)
        for (int kz = -kmax; kz <= kmax; ++kz)
          for (int m = m_lo; m <= m_hi; ++m) {
            VertexTopology vt{e, {kx, ky, kz}, m};
            if (is_realizable(vt)) rows.push_back(vt);
          }
  }
}

int run_atlas(int kmax, std::pair<int, int> window, const PrismGeometry& geom,
              const QuadratureConfig& qc, bool measure,
              const std::string& out_path) {
  if (kmax < 0) throw UsageError("--kmax must be nonnegative");
  std::vector<VertexTopology> rows;
  atlas_rows(kmax, window.first, window.second, rows);

  std::vector<std::optional<double>> energies(rows.size());
  if (measure) {
    std::atomic<size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= rows.size()) return;
        try {
          Configuration cfg = build_representative(rows[i], qc);
          Evaluator ev(cfg);
          energies[i] = energy(ev, geom, qc).value;
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    };
    int n_threads = std::min<size_t>(thread_count(), std::max<size_t>(rows.size(), 1));
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  auto out = open_output(out_path);
  out << "e_x,e_y,e_z,k_x,k_y,k_z,m,classification,boundary,"
         "w_ppp,w_ppm,w_pmp,w_pmm,w_mpp,w_mpm,w_mmp,w_mmm,"
         "sum_abs_w,lower_new,lower_old,upper_formula,measured_energy\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    const VertexTopology& vt = rows[i];
    Classification cls = classify(vt);
    WrappingNumbers w = wrapping_numbers(vt);
    out << vt.e.sx << ',' << vt.e.sy << ',' << vt.e.sz << ',' << vt.k.kx << ','
        << vt.k.ky << ',' << vt.k.kz << ',' << vt.m << ','
        << to_string(cls.kind) << ',' << (cls.boundary ? 1 : 0);
    for (int j = 0; j < 8; ++j) out << ',' << w.w[j];
    out << ',' << w.sum_abs() << ',' << format_double(lower_bound_new(vt, geom))
        << ',' << format_double(lower_bound_old(vt, geom)) << ','
        << format_double(upper_bound_formula(vt, geom)) << ',';
    if (energies[i]) out << format_double(*energies[i]);
    out << '\n';
  }
  finish_output(out, out_path);
  std::cout << "rows: " << rows.size() << "\n";
  return kOk;
}

struct Slice {
  int axis = -1;  // -1 means all six faces
  double value = 0.0;
};

Slice parse_slice(const std::string& s, const PrismGeometry& geom) {
  if (s == "surface") return {};
  if (s.size() < 3 || s[1] != '=')
    throw UsageError("--slice must be surface or one of x=V, y=V, z=V");
  int axis = s[0] == 'x' ? 0 : (s[0] == 'y' ? 1 : (s[0] == 'z' ? 2 : -2));
  if (axis < 0) throw UsageError("--slice axis must be x, y or z");
  double value = parse_num(s.substr(2), "--slice");
  double limit = axis == 0 ? geom.lx : (axis == 1 ? geom.ly : geom.lz);
  if (!(value > 0.0 && value < limit))
    throw UsageError("--slice plane must lie strictly inside the prism");
  return {axis, value};
}

int run_field(const std::string& config_path, const PrismGeometry& geom,
              int grid, const std::string& slice_text,
              const std::string& out_path) {
  if (grid < 1 || grid > 4096) throw UsageError("--grid must be in 1..4096");
  Slice slice = parse_slice(slice_text, geom);
  Configuration cfg = load_configuration(config_path);
  Evaluator ev(cfg);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file = open_output(out_path);
    out = &file;
  }

  // Reflection symmetry: the director at p equals the director at the fold
  // of p into the origin octant, evaluated on the radial ray through it.
  auto emit = [&](double x, double y, double z) {
    double fx = std::min(x, geom.lx - x);
    double fy = std::min(y, geom.ly - y);
    double fz = std::min(z, geom.lz - z);
    double r = std::sqrt(fx * fx + fy * fy + fz * fz);
    Complex w(fx / (r + fz), fy / (r + fz));
    auto n = sphere_point(ev.jet(w));
    *out << format_double(x) << ',' << format_double(y) << ','
         << format_double(z) << ',' << format_double(n[0]) << ','
         << format_double(n[1]) << ',' << format_double(n[2]) << '\n';
  };

  *out << "x,y,z,nx,ny,nz\n";
  double len[3] = {geom.lx, geom.ly, geom.lz};
  auto centre = [&](int axis, int i) { return (i + 0.5) / grid * len[axis]; };
  if (slice.axis < 0) {
    for (int axis = 0; axis < 3; ++axis)
      for (double fixed : {0.0, len[axis]}) {
        int u = axis == 0 ? 1 : 0;
        int v = axis == 2 ? 1 : 2;
        for (int i = 0; i < grid; ++i)
          for (int j = 0; j < grid; ++j) {
            double p[3];
            p[axis] = fixed;
            p[u] = centre(u, i);
            p[v] = centre(v, j);
            emit(p[0], p[1], p[2]);
          }
      }
  } else {
    int u = slice.axis == 0 ? 1 : 0;
    int v = slice.axis == 2 ? 1 : 2;
    for (int i = 0; i < grid; ++i)
      for (int j = 0; j < grid; ++j) {
        double p[3];
        p[slice.axis] = slice.value;
        p[u] = centre(u, i);
        p[v] = centre(v, j);
        emit(p[0], p[1], p[2]);
      }
  }
  if (!out_path.empty()) finish_output(file, out_path);
  return kOk;
}

template <typename Fn>
int run_guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const BoundaryConditionError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kVerifyFailure;
  } catch (const AccuracyError& e) {
    std::cerr << "accuracy failure: " << e.what()
              << " (partial=" << format_double(e.partial_result())
              << ", estimate=" << format_double(e.error_estimate()) << ")\n";
    return kAccuracyFailure;
  } catch (const GeometryError& e) {
    std::cerr << "accuracy failure: " << e.what() << "\n";
    return kAccuracyFailure;
  } catch (const ResolutionError& e) {
    std::cerr << "accuracy failure: " << e.what() << "\n";
    return kAccuracyFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 70;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Topological invariants, energy bounds and representative textures for "
      "reflection symmetric unit vector fields on a rectangular prism."};
  app.require_subcommand(1);
  int rc = kOk;

  auto* classify_cmd =
      app.add_subcommand("classify", "classify a vertex topology");
  TopologyFlags classify_topo;
  classify_topo.add_to(classify_cmd);
  bool classify_json = false;
  classify_cmd->add_flag("--json", classify_json, "emit JSON");
  classify_cmd->callback([&] {
    rc = run_guarded([&] { return run_classify(classify_topo.parse(), classify_json); });
  });

  auto* atlas_cmd =
      app.add_subcommand("atlas", "enumerate realizable topologies to CSV");
  int atlas_kmax = 1;
  std::string atlas_window = "-9..9";
  std::string atlas_geometry = "1,1,1";
  std::string atlas_out;
  bool atlas_measure = false;
  QuadratureFlags atlas_quad;
  atlas_cmd->add_option("--kmax", atlas_kmax, "kink number range bound")
      ->required();
  atlas_cmd->add_option("--m-window", atlas_window, "m range, e.g. -17..17")
      ->required();
  atlas_cmd->add_option("--geometry", atlas_geometry, "edge lengths lx,ly,lz");
  atlas_cmd->add_option("--out", atlas_out, "output CSV path")->required();
  atlas_cmd->add_flag("--measure", atlas_measure,
                      "also measure representative energies");
  atlas_quad.add_to(atlas_cmd);
  atlas_cmd->callback([&] {
    rc = run_guarded([&] {
      return run_atlas(atlas_kmax, parse_window(atlas_window),
                       parse_geometry(atlas_geometry), atlas_quad.parse(),
                       atlas_measure, atlas_out);
    });
  });

  auto* build_cmd =
      app.add_subcommand("build", "construct a representative configuration");
  TopologyFlags build_topo;
  build_topo.add_to(build_cmd);
  std::string build_out;
  QuadratureFlags build_quad;
  build_cmd->add_option("--out", build_out,
                        "configuration path (stdout when omitted)");
  build_quad.add_to(build_cmd);
  build_cmd->callback([&] {
    rc = run_guarded([&] {
      return run_build(build_topo.parse(), build_quad.parse(), build_out);
    });
  });

  auto* verify_cmd = app.add_subcommand(
      "verify", "measure a configuration against a declared topology");
  TopologyFlags verify_topo;
  verify_topo.add_to(verify_cmd);
  std::string verify_config;
  VerifyOptions verify_opts;
  QuadratureFlags verify_quad;
  bool verify_json = false;
  verify_cmd->add_option("--config", verify_config, "configuration JSON path")
      ->required();
  verify_cmd->add_option("--tol", verify_opts.tol, "residual tolerance");
  verify_cmd->add_option("--samples", verify_opts.boundary_samples,
                         "initial boundary samples");
  verify_quad.add_to(verify_cmd);
  verify_cmd->add_flag("--json", verify_json, "emit JSON");
  verify_cmd->callback([&] {
    rc = run_guarded([&] {
      return run_verify(verify_config, verify_topo.parse(),
                        verify_quad.parse(), verify_opts, verify_json);
    });
  });

  auto* bounds_cmd =
      app.add_subcommand("bounds", "energy bounds for a topology");
  TopologyFlags bounds_topo;
  bounds_topo.add_to(bounds_cmd);
  std::string bounds_geometry = "1,1,1";
  bool bounds_measure = false;
  bool bounds_json = false;
  QuadratureFlags bounds_quad;
  bounds_cmd->add_option("--geometry", bounds_geometry, "edge lengths lx,ly,lz");
  bounds_cmd->add_flag("--measure", bounds_measure,
                       "measure a representative alongside the formulas");
  bounds_cmd->add_flag("--json", bounds_json, "emit JSON");
  bounds_quad.add_to(bounds_cmd);
  bounds_cmd->callback([&] {
    rc = run_guarded([&] {
      return run_bounds(bounds_topo.parse(), parse_geometry(bounds_geometry),
                        bounds_quad.parse(), bounds_measure, bounds_json);
    });
  });

  auto* field_cmd =
      app.add_subcommand("field", "sample the director field to CSV");
  std::string field_config;
  std::string field_geometry = "1,1,1";
  int field_grid = 32;
  std::string field_slice = "surface";
  std::string field_out;
  field_cmd->add_option("--config", field_config, "configuration JSON path")
      ->required();
  field_cmd->add_option("--geometry", field_geometry, "edge lengths lx,ly,lz");
  field_cmd->add_option("--grid", field_grid, "samples per face edge");
  field_cmd->add_option("--slice", field_slice, "surface or x=V, y=V, z=V");
  field_cmd->add_option("--out", field_out, "output CSV path (stdout when omitted)");
  field_cmd->callback([&] {
    rc = run_guarded([&] {
      return run_field(field_config, parse_geometry(field_geometry), field_grid,
                       field_slice, field_out);
    });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  return rc;
}
