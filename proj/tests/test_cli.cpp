// End-to-end tests driving the installed binary; the harness passes the
// executable path as --cli=PATH ahead of the doctest arguments.

#define DOCTEST_CONFIG_IMPLEMENT
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "prism/serialize.hpp"

namespace {

std::string g_cli;

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = g_cli + " " + args + " 2>&1";
  CliResult res;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  size_t got;
  while ((got = std::fread(buf, 1, sizeof(buf), pipe)) > 0)
    res.out.append(buf, got);
  const int status = ::pclose(pipe);
  res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string temp_path(const char* stem, const char* ext) {
  return std::string("/tmp/prism_cli_") + stem + "_" +
         std::to_string(::getpid()) + ext;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("classify prints invariants and classification") {
  const CliResult r = run_cli("classify --e +,+,+ --k 1,1,0 --m=-1");
  CHECK(r.code == 0);
  CHECK(r.out.find("realizable: yes") != std::string::npos);
  CHECK(r.out.find("classification: nonconformal") != std::string::npos);
  CHECK(r.out.find("sum |w| = 3") != std::string::npos);
  CHECK(r.out.find("sum w = -1") != std::string::npos);
}

TEST_CASE("classify emits machine readable JSON") {
  const CliResult r = run_cli("classify --e +,+,+ --k 1,1,0 --m=-1 --json");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["m"] == -1);
  CHECK(j["realizable"] == true);
  CHECK(j["classification"] == "nonconformal");
  CHECK(j["sum_abs_w"] == 3);
  const std::vector<int> w = j["w"];
  CHECK(w == std::vector<int>{0, 1, 0, 0, 0, 0, -1, -1});
}

TEST_CASE("classify rejects a non realizable topology") {
  const CliResult r = run_cli("classify --e +,+,+ --k 0,0,0 --m=1");
  CHECK(r.code == 2);
  CHECK(r.out.find("violation") != std::string::npos);
}

TEST_CASE("usage errors exit with code one") {
  CHECK(run_cli("classify --e +,+ --k 0,0,0 --m=-1").code == 1);
  CHECK(run_cli("classify --e +,+,+ --k a,b,c --m=-1").code == 1);
  CHECK(run_cli("").code == 1);
  CHECK(run_cli("frobnicate").code == 1);
  CHECK(run_cli("classify --e +,+,+ --k 0,0,0 --m=-1 --bogus").code == 1);
  CHECK(run_cli("--help").code == 0);
}

TEST_CASE("build emits a loadable configuration") {
  const CliResult r = run_cli("build --e +,+,+ --k 0,0,0 --m=-1");
  CHECK(r.code == 0);
  const prism::Configuration cfg = prism::parse_configuration(r.out);
  CHECK(prism::configuration_invariants(cfg) ==
        prism::VertexTopology{prism::make_signs(1, 1, 1), {0, 0, 0}, -1});
}

TEST_CASE("build verify round trip through files") {
  const std::string path = temp_path("hedgehog", ".json");
  const CliResult b = run_cli("build --e +,+,+ --k 0,0,0 --m=-1 --out " + path);
  CHECK(b.code == 0);
  CHECK(b.out.find("class: conformal") != std::string::npos);
  CHECK(b.out.find("wrote: " + path) != std::string::npos);

  const CliResult v =
      run_cli("verify --e +,+,+ --k 0,0,0 --m=-1 --config " + path);
  CHECK(v.code == 0);
  CHECK(v.out.find("pass: yes") != std::string::npos);

  const CliResult vj =
      run_cli("verify --e +,+,+ --k 0,0,0 --m=-1 --config " + path + " --json");
  CHECK(vj.code == 0);
  CHECK(nlohmann::json::parse(vj.out)["pass"] == true);

  // Same configuration, wrong declaration: verification failure.
  const CliResult bad =
      run_cli("verify --e +,+,+ --k 0,0,0 --m=-9 --config " + path);
  CHECK(bad.code == 4);
  CHECK(bad.out.find("pass: no") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("io failures exit with code three") {
  CHECK(run_cli("verify --e +,+,+ --k 0,0,0 --m=-1 --config /tmp/prism_no_such.json")
            .code == 3);
  CHECK(run_cli("build --e +,+,+ --k 0,0,0 --m=-1 --out /tmp/prism_no_dir/x.json")
            .code == 3);
}

TEST_CASE("malformed configuration files exit with code two") {
  const std::string path = temp_path("broken", ".json");
  std::ofstream(path) << "{ not valid json";
  const CliResult r =
      run_cli("verify --e +,+,+ --k 0,0,0 --m=-1 --config " + path);
  CHECK(r.code == 2);
  std::remove(path.c_str());
}

TEST_CASE("starved quadrature exits with the accuracy code") {
  const CliResult r = run_cli(
      "bounds --e +,+,+ --k 0,0,0 --m=-1 --measure --rel-tol 1e-13 "
      "--abs-tol 1e-15 --max-depth 2");
  CHECK(r.code == 5);
  CHECK(r.out.find("accuracy failure") != std::string::npos);
}

TEST_CASE("bounds reproduces the closed form doubles in JSON") {
  const CliResult r = run_cli("bounds --e +,+,+ --k 0,0,0 --m=-1 --json");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["lower_new"].get<double>() == 4.0 * kPi * 1.0 * 1.0);
  CHECK(j["lower_old"].get<double>() == 4.0 * kPi * 1.0 * 1.0);
  CHECK(j["upper_formula"].get<double>() == 4.0 * kPi * std::sqrt(3.0) * 1.0);
  CHECK(j["ratio"].get<double>() == std::sqrt(3.0));
  CHECK(j["chain_ok"] == true);
  CHECK(j["measured_energy"].is_null());

  const CliResult bad = run_cli("bounds --e +,+,+ --k 0,0,0 --m=0 --json");
  CHECK(bad.code == 2);
}

TEST_CASE("atlas output is deterministic and well formed") {
  const std::string p1 = temp_path("atlas1", ".csv");
  const std::string p2 = temp_path("atlas2", ".csv");
  const std::string args = "atlas --kmax 1 --m-window=-9..9 --out ";
  const CliResult r1 = run_cli(args + p1);
  const CliResult r2 = run_cli(args + p2);
  CHECK(r1.code == 0);
  CHECK(r2.code == 0);
  const std::string c1 = slurp(p1);
  CHECK(c1 == slurp(p2));

  const auto lines = lines_of(c1);
  REQUIRE(lines.size() > 100);
  CHECK(lines[0] ==
        "e_x,e_y,e_z,k_x,k_y,k_z,m,classification,boundary,"
        "w_ppp,w_ppm,w_pmp,w_pmm,w_mpp,w_mpm,w_mmp,w_mmm,"
        "sum_abs_w,lower_new,lower_old,upper_formula,measured_energy");
  CHECK(r1.out.find("rows: " + std::to_string(lines.size() - 1)) !=
        std::string::npos);
  // Lexicographic enumeration: first row is the (+,+,+) corner, most
  // negative kinks, most negative realizable m.
  CHECK(lines[1].rfind("1,1,1,-1,-1,-1,-5,", 0) == 0);
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_csv(lines[i]);
    REQUIRE(fields.size() == 22);
    CHECK(fields[21].empty());  // no --measure, energy column blank
    const double lower_new = std::strtod(fields[18].c_str(), nullptr);
    const double upper = std::strtod(fields[20].c_str(), nullptr);
    CHECK(lower_new <= upper + 1e-12);
  }
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("atlas with measurement fills the energy column") {
  const std::string path = temp_path("atlas_measure", ".csv");
  const CliResult r = run_cli(
      "atlas --kmax 0 --m-window=-1..1 --measure --rel-tol 1e-6 "
      "--abs-tol 1e-8 --out " + path);
  CHECK(r.code == 0);
  const auto lines = lines_of(slurp(path));
  REQUIRE(lines.size() == 9);  // one realizable m per corner octant
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_csv(lines[i]);
    REQUIRE(fields.size() == 22);
    REQUIRE(!fields[21].empty());
    const double energy = std::strtod(fields[21].c_str(), nullptr);
    const double lower_new = std::strtod(fields[18].c_str(), nullptr);
    const double upper = std::strtod(fields[20].c_str(), nullptr);
    CHECK(energy >= lower_new - 1e-3);
    CHECK(energy <= upper + 1e-3);
  }
  std::remove(path.c_str());
}

TEST_CASE("field export covers the surface with unit directors") {
  const std::string cfg_path = temp_path("field_cfg", ".json");
  CHECK(run_cli("build --e +,+,+ --k 0,0,0 --m=-1 --out " + cfg_path).code ==
        0);
  const CliResult r = run_cli("field --config " + cfg_path + " --grid 3");
  CHECK(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 1 + 6 * 3 * 3);
  CHECK(lines[0] == "x,y,z,nx,ny,nz");
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_csv(lines[i]);
    REQUIRE(fields.size() == 6);
    const double nx = std::strtod(fields[3].c_str(), nullptr);
    const double ny = std::strtod(fields[4].c_str(), nullptr);
    const double nz = std::strtod(fields[5].c_str(), nullptr);
    CHECK(std::abs(nx * nx + ny * ny + nz * nz - 1.0) < 1e-9);
  }
  // Reflection symmetry: opposite faces carry equal directors at matching
  // in-face coordinates. Face x=0 rows precede face x=lx rows.
  for (int s = 0; s < 9; ++s) {
    const auto a = split_csv(lines[1 + s]);
    const auto b = split_csv(lines[1 + 9 + s]);
    CHECK(a[1] == b[1]);
    CHECK(a[2] == b[2]);
    CHECK(a[3] == b[3]);
    CHECK(a[4] == b[4]);
    CHECK(a[5] == b[5]);
  }

  const CliResult slice =
      run_cli("field --config " + cfg_path + " --grid 4 --slice z=0.5");
  CHECK(slice.code == 0);
  CHECK(lines_of(slice.out).size() == 1 + 16);

  CHECK(run_cli("field --config " + cfg_path + " --slice z=1.5").code == 1);
  CHECK(run_cli("field --config " + cfg_path + " --slice q=0.5").code == 1);
  CHECK(run_cli("field --config " + cfg_path + " --grid 0").code == 1);
  std::remove(cfg_path.c_str());
}

}  // TEST_SUITE

int main(int argc, char** argv) {
  doctest::Context context;
  std::vector<char*> rest;
  for (int i = 0; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--cli=", 0) == 0) {
      g_cli = arg.substr(6);
      continue;
    }
    rest.push_back(argv[i]);
  }
  if (g_cli.empty()) {
    std::fprintf(stderr, "missing --cli=PATH argument\n");
    return 1;
  }
  context.applyCommandLine(static_cast<int>(rest.size()), rest.data());
  return context.run();
}
