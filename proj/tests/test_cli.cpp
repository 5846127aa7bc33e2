#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "rank1/cli.hpp"
#include "rank1/json_io.hpp"

using namespace rank1;
using json_io::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Workspace {
 public:
  Workspace() : dir_(fs::temp_directory_path() / "rank1_cli_test") {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Workspace() { fs::remove_all(dir_); }

  std::string write(const std::string& name, const json& doc) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << doc.dump();
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

json target(Index offset, std::vector<cplx> values) {
  TargetSpectrum t;
  t.head_offset = offset;
  t.head = std::move(values);
  return json_io::to_json(t);
}

}  // namespace

TEST_CASE("direct with zero coefficients reproduces lambda") {
  Workspace ws;
  const std::string spec = ws.write("spec.json", json_io::to_json(fixtures::integers()));
  const std::string coeffs = ws.write("c.json", json_io::to_json(fixtures::residue_head(0, {0.0})));
  const Run r = run({"direct", "--spec", spec, "--coeffs", coeffs, "--window", "3"});
  REQUIRE(r.code == 0);
  const PerturbedSpectrum s = json_io::spectrum_from_json(json::parse(r.out));
  CHECK(s.entries.size() == 7);
  for (const SpectrumEntry& e : s.entries) CHECK(e.mu == cplx(static_cast<double>(e.paired_index)));
}

TEST_CASE("direct on the two-point example, byte-identical across runs") {
  Workspace ws;
  const std::string spec = ws.write("spec.json", json_io::to_json(fixtures::integers()));
  const std::string coeffs = ws.write("c.json", json_io::to_json(fixtures::two_point()));
  const Run r = run({"direct", "--spec", spec, "--coeffs", coeffs, "--out", ws.path("a.json")});
  REQUIRE(r.code == 0);
  CHECK(run({"direct", "--spec", spec, "--coeffs", coeffs, "--out", ws.path("b.json")}).code == 0);
  CHECK(slurp(ws.path("a.json")) == slurp(ws.path("b.json")));
  const PerturbedSpectrum s = json_io::spectrum_from_json(json_io::read_file(ws.path("a.json")));
  CHECK(std::abs(s.find(0)->mu - 0.25) < 1e-12);
  CHECK(std::abs(s.find(1)->mu - 1.1) < 1e-12);
  CHECK(s.certified);
}

TEST_CASE("input errors exit with 1 and name the error kind") {
  Workspace ws;
  BaseSpectrum bad;
  bad.index_set = IndexSet::Naturals;
  bad.head = {0.0, 0.5};
  bad.tail = {1.0, 0.0};
  const std::string spec = ws.write("spec.json", json_io::to_json(bad));
  const std::string coeffs = ws.write("c.json", json_io::to_json(fixtures::two_point()));
  Run r = run({"direct", "--spec", spec, "--coeffs", coeffs});
  CHECK(r.code == 1);
  CHECK(r.err.find("GapViolation") != std::string::npos);
  CHECK_FALSE(fs::exists(ws.path("out.json")));

  r = run({"direct", "--spec", ws.path("missing.json"), "--coeffs", coeffs});
  CHECK(r.code == 1);
  r = run({"direct", "--spec", spec});
  CHECK(r.code == 1);
  r = run({"nonsense"});
  CHECK(r.code == 1);
}

TEST_CASE("inverse of an unperturbed target gives b = 0") {
  Workspace ws;
  const std::string spec = ws.write("spec.json", json_io::to_json(fixtures::integers()));
  const std::string t = ws.write("t.json", target(0, {0.0, 1.0}));
  const Run r = run({"inverse", "--spec", spec, "--target", t});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  const PerturbationCoefficients p = json_io::coefficients_from_json(doc["coefficients"]);
  for (Index n = -3; n <= 3; ++n) CHECK(p.b(n) == cplx(0.0));
  CHECK(doc["certificate"]["residues"].empty());
}

TEST_CASE("inverse writes coefficients and certificate files") {
  Workspace ws;
  const std::string spec = ws.write("spec.json", json_io::to_json(fixtures::integers()));
  const std::string t = ws.write("t.json", target(0, {0.25, 1.1}));
  const Run r = run({"inverse", "--spec", spec, "--target", t, "--out", ws.path("c.json"), "--cert",
                     ws.path("cert.json")});
  REQUIRE(r.code == 0);
  const PerturbationCoefficients p = json_io::coefficients_from_json(json_io::read_file(ws.path("c.json")));
  CHECK(p.c(0).real() == doctest::Approx(0.275));
  const json cert = json_io::read_file(ws.path("cert.json"));
  CHECK(cert["residues"].size() == 2);
  CHECK(cert["max_F_vs_product_discrepancy"].get<double>() < 1e-12);
}

TEST_CASE("inverse double point, then direct shows multiplicity 2") {
  Workspace ws;
  const std::string spec = ws.write("spec.json", json_io::to_json(fixtures::integers()));
  const std::string t = ws.write("t.json", target(0, {0.5, 0.5}));
  REQUIRE(run({"inverse", "--spec", spec, "--target", t, "--out", ws.path("c.json")}).code == 0);
  const Run r = run({"direct", "--spec", spec, "--coeffs", ws.path("c.json")});
  REQUIRE(r.code == 0);
  const PerturbedSpectrum s = json_io::spectrum_from_json(json::parse(r.out));
  CHECK(s.find(0)->multiplicity == 2);
  CHECK(s.find(1)->multiplicity == 2);
}

TEST_CASE("fixed phi with a vanishing coefficient is obstructed") {
  Workspace ws;
  const std::string spec = ws.write("spec.json", json_io::to_json(fixtures::integers()));
  const std::string t = ws.write("t.json", target(0, {0.25, 1.1}));
  const std::string phi = ws.write(
      "phi.json", json{{"a_head", {{"offset", 0}, {"values", {{0.0, 0.0}, {1.0, 0.0}}}}}, {"a_tail", "zero"}});
  const Run r = run({"inverse", "--spec", spec, "--target", t, "--fixed-phi", phi});
  CHECK(r.code == 1);
  CHECK(r.err.find("ZeroCoefficientObstruction") != std::string::npos);
}

TEST_CASE("roundtrip reports the matched deviation") {
  Workspace ws;
  const std::string spec = ws.write("spec.json", json_io::to_json(fixtures::integers()));
  for (const json& t : {target(0, {0.0, 1.0}), target(0, {0.25, 1.1}), target(0, {cplx(0.0, 1.0)})}) {
    const Run r = run({"roundtrip", "--spec", spec, "--target", ws.write("t.json", t)});
    CHECK(r.code == 0);
    REQUIRE(r.out.rfind("max matched deviation: ", 0) == 0);
    CHECK(std::stod(r.out.substr(23)) < 1e-8);
  }
}

TEST_CASE("oracle on the two-by-two example") {
  Workspace ws;
  BaseSpectrum two;
  two.index_set = IndexSet::Naturals;
  two.tail = {1.0, 0.0};
  const std::string spec = ws.write("spec.json", json_io::to_json(two));
  const std::string coeffs = ws.write("c.json", json_io::to_json(fixtures::two_point()));
  const Run r = run({"oracle", "--spec", spec, "--coeffs", coeffs, "--n", "1"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  REQUIRE(doc["eigenvalues"].size() == 2);
  CHECK(std::abs(json_io::complex_from_json(doc["eigenvalues"][0]) - 0.25) < 1e-12);
  CHECK(std::abs(json_io::complex_from_json(doc["eigenvalues"][1]) - 1.1) < 1e-12);
  CHECK(doc["trace_check"].get<double>() < 1e-14);
}

TEST_CASE("gallery emits inputs and reports") {
  Workspace ws;
  Run r = run({"gallery", "--example", "ex52", "--beta", "2", "--out-dir", ws.path("ex52")});
  REQUIRE(r.code == 0);
  const PerturbationCoefficients p =
      json_io::coefficients_from_json(json_io::read_file(ws.path("ex52") + "/coeffs.json"));
  CHECK(p.c(3).real() == doctest::Approx(1.0 / 81.0));

  r = run({"gallery", "--example", "ex52", "--beta", "2", "--window", "60", "--report"});
  CHECK(r.code == 0);
  CHECK(r.out.find("slope within 5%: PASS") != std::string::npos);

  r = run({"gallery", "--example", "ex51", "--window", "120", "--report"});
  CHECK(r.code == 0);
  CHECK(r.out.find("tan equation residual < 1e-8: PASS") != std::string::npos);

  r = run({"gallery", "--example", "ex52", "--beta", "0.9"});
  CHECK(r.code == 1);
  CHECK(r.err.find("BetaOutOfRange") != std::string::npos);
  CHECK(run({"gallery", "--example", "ex99"}).code == 1);
}
