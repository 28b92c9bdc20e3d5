#include "prism/serialize.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace prism {

using Json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

Json signs_json(const SignTriple& e) { return Json::array({e.sx, e.sy, e.sz}); }

Json topology_json(const VertexTopology& vt) {
  Json j;
  j["e"] = signs_json(vt.e);
  j["k"] = Json::array({vt.k.kx, vt.k.ky, vt.k.kz});
  j["m"] = vt.m;
  return j;
}

Json config_json(const Configuration& cfg) {
  Json j;
  j["epsilon"] = cfg.base.epsilon;
  j["n"] = cfg.base.n;
  auto boundary_array = [](const std::vector<BoundaryFactor>& fs) {
    Json arr = Json::array();
    for (const auto& f : fs) arr.push_back(Json::array({f.pos, f.sign}));
    return arr;
  };
  j["real_factors"] = boundary_array(cfg.base.real_factors);
  j["imag_factors"] = boundary_array(cfg.base.imag_factors);
  Json interior = Json::array();
  for (const auto& f : cfg.base.interior_factors)
    interior.push_back(Json::array({f.pos.real(), f.pos.imag(), f.sign}));
  j["interior_factors"] = interior;
  j["rotations"] = cfg.rotations;
  j["conjugated"] = cfg.conjugated;
  if (cfg.glue) {
    Json g;
    g["w0"] = Json::array({cfg.glue->w0.real(), cfg.glue->w0.imag()});
    g["eps"] = cfg.glue->eps;
    g["W"] = cfg.glue->wrap;
    j["glue"] = g;
  } else {
    j["glue"] = nullptr;
  }
  return j;
}

[[noreturn]] void schema_fail(const std::string& what) {
  throw SchemaError("configuration schema: " + what);
}

double require_number(const Json& j, const std::string& where) {
  if (!j.is_number()) schema_fail(where + " must be a number");
  return j.get<double>();
}

int require_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) schema_fail(where + " must be an integer");
  return j.get<int>();
}

std::vector<BoundaryFactor> parse_boundary_factors(const Json& j,
                                                   const std::string& key) {
  if (!j.is_array()) schema_fail(key + " must be an array");
  std::vector<BoundaryFactor> out;
  for (const auto& item : j) {
    if (!item.is_array() || item.size() != 2)
      schema_fail(key + " entries must be [pos, sign] pairs");
    BoundaryFactor f;
    f.pos = require_number(item[0], key + " position");
    f.sign = require_int(item[1], key + " sign");
    out.push_back(f);
  }
  return out;
}

Configuration config_from_json(const Json& j) {
  if (!j.is_object()) schema_fail("top level must be an object");
  const char* keys[] = {"epsilon",          "n",         "real_factors",
                        "imag_factors",     "interior_factors",
                        "rotations",        "conjugated", "glue"};
  for (const char* key : keys)
    if (!j.contains(key)) schema_fail(std::string("missing key ") + key);
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) schema_fail("unknown key " + key);
  }

  Configuration cfg;
  cfg.base.epsilon = require_int(j["epsilon"], "epsilon");
  cfg.base.n = require_int(j["n"], "n");
  cfg.base.real_factors = parse_boundary_factors(j["real_factors"], "real_factors");
  cfg.base.imag_factors = parse_boundary_factors(j["imag_factors"], "imag_factors");
  if (!j["interior_factors"].is_array())
    schema_fail("interior_factors must be an array");
  for (const auto& item : j["interior_factors"]) {
    if (!item.is_array() || item.size() != 3)
      schema_fail("interior_factors entries must be [re, im, sign] triples");
    InteriorFactor f;
    f.pos = {require_number(item[0], "interior_factors re"),
             require_number(item[1], "interior_factors im")};
    f.sign = require_int(item[2], "interior_factors sign");
    cfg.base.interior_factors.push_back(f);
  }
  cfg.rotations = require_int(j["rotations"], "rotations");
  if (!j["conjugated"].is_boolean()) schema_fail("conjugated must be a bool");
  cfg.conjugated = j["conjugated"].get<bool>();
  const Json& g = j["glue"];
  if (!g.is_null()) {
    if (!g.is_object()) schema_fail("glue must be null or an object");
    for (const char* key : {"w0", "eps", "W"})
      if (!g.contains(key)) schema_fail(std::string("glue missing key ") + key);
    if (g.size() != 3) schema_fail("glue has unknown keys");
    if (!g["w0"].is_array() || g["w0"].size() != 2)
      schema_fail("glue w0 must be [re, im]");
    GlueData glue;
    glue.w0 = {require_number(g["w0"][0], "glue w0 re"),
               require_number(g["w0"][1], "glue w0 im")};
    glue.eps = require_number(g["eps"], "glue eps");
    glue.wrap = require_int(g["W"], "glue W");
    cfg.glue = glue;
  }
  validate(cfg);
  return cfg;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json optional_json(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

std::string serialize_configuration(const Configuration& cfg) {
  return dump(config_json(cfg));
}

Configuration parse_configuration(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) schema_fail("malformed JSON");
  return config_from_json(j);
}

void save_configuration(const Configuration& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << serialize_configuration(cfg);
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

Configuration load_configuration(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_configuration(text.str());
}

std::string classification_json(const VertexTopology& vt) {
  Json j = topology_json(vt);
  std::string violation = realizability_violation(vt);
  j["realizable"] = violation.empty();
  if (!violation.empty()) {
    j["violation"] = violation;
    return dump(j);
  }
  Classification cls = classify(vt);
  j["classification"] = to_string(cls.kind);
  j["boundary"] = cls.boundary;
  j["omega_minus_halfpi"] = omega_chi(vt.e, vt.k, -1);
  j["omega_plus_halfpi"] = omega_chi(vt.e, vt.k, +1);
  WrappingNumbers w = wrapping_numbers(vt);
  j["w"] = w.w;
  j["sum_w"] = w.sum();
  j["sum_abs_w"] = w.sum_abs();
  return dump(j);
}

std::string verification_json(const VerificationReport& report) {
  Json j;
  j["declared"] = topology_json(report.declared);
  j["measured"] = topology_json(report.measured);
  Json res;
  res["boundary"] = report.boundary_residual;
  res["area"] = report.area_residual;
  res["winding"] = report.winding_residual;
  j["residuals"] = res;
  j["pass"] = report.pass;
  return dump(j);
}

std::string bounds_json(const BoundsReport& report) {
  Json j = topology_json(report.topology);
  j["classification"] = to_string(report.classification.kind);
  j["boundary"] = report.classification.boundary;
  j["w"] = report.w.w;
  j["sum_abs_w"] = report.sum_abs_w;
  j["wrap_increment"] = report.wrap_increment;
  j["lower_new"] = report.lower_new;
  j["lower_old"] = report.lower_old;
  j["upper_formula"] = report.upper_formula;
  j["ratio"] = report.ratio;
  j["geometry_warning"] = report.geometry_warning;
  j["measured_energy"] = optional_json(report.measured_energy);
  j["measured_unoriented"] = optional_json(report.measured_unoriented);
  j["measured_trapped"] = optional_json(report.measured_trapped);
  j["chain_ok"] = report.chain_ok;
  j["notes"] = report.notes;
  return dump(j);
}

}  // namespace prism
