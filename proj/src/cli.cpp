#include "rank1/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <iostream>
#include <optional>

#include "rank1/direct.hpp"
#include "rank1/error.hpp"
#include "rank1/gallery.hpp"
#include "rank1/inverse.hpp"
#include "rank1/json_io.hpp"
#include "rank1/oracle.hpp"

namespace rank1::cli {

namespace {

using json_io::json;

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kNotCertified = 2;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::CertificationFailed:
    case ErrorKind::NoConvergence:
    case ErrorKind::OrderMismatch:
    case ErrorKind::CountMismatch:
    case ErrorKind::SolverFailure:
      return kNotCertified;
    default:
      return kInputError;
  }
}

void emit(const json& doc, const std::string& path, std::ostream& out) {
  if (path.empty())
    out << json_io::dump(doc);
  else
    json_io::write_file_atomic(path, doc);
}

struct DirectArgs {
  std::string spec, coeffs, out;
  Index trunc = 2000;
  double tol = 1e-10;
  int quad = 256;
  std::optional<Index> window;
  std::optional<Index> central_radius;
  bool allow_nonsummable = false;
};

struct InverseArgs {
  std::string spec, target, out, cert, fixed_phi;
};

struct RoundtripArgs {
  std::string spec, target;
  double tol = 1e-8;
  Index trunc = 2000;
  int quad = 256;
};

struct OracleArgs {
  std::string spec, coeffs, out;
  Index n = 0;
};

struct GalleryArgs {
  std::string example, out_dir;
  double beta = 2.0;
  Index window = 200;
  bool report = false;
};

DirectOptions direct_options(Index trunc, double tol, int quad) {
  DirectOptions o;
  o.truncation = trunc;
  o.tol = tol;
  o.quadrature_points = quad;
  o.max_quadrature_points = std::max(quad, 4096);
  return o;
}

int cmd_direct(const DirectArgs& a, std::ostream& out) {
  const BaseSpectrum spec = json_io::base_from_json(json_io::read_file(a.spec));
  const PerturbationCoefficients coeffs = json_io::coefficients_from_json(json_io::read_file(a.coeffs));
  DirectOptions o = direct_options(a.trunc, a.tol, a.quad);
  o.window = a.window;
  o.central_radius = a.central_radius;
  o.allow_nonsummable = a.allow_nonsummable;
  const DirectResult r = solve_direct(spec, coeffs, o);
  emit(json_io::to_json(r.spectrum), a.out, out);
  return r.spectrum.certified ? kOk : kNotCertified;
}

json certificate_json(const InverseResult& r) {
  json residues = json::array();
  for (const auto& [n, c] : r.residues) residues.push_back(json::array({n, json_io::to_json(c)}));
  return json{{"residues", residues}, {"max_F_vs_product_discrepancy", r.check.max_discrepancy}};
}

int cmd_inverse(const InverseArgs& a, std::ostream& out) {
  const BaseSpectrum spec = json_io::base_from_json(json_io::read_file(a.spec));
  const TargetSpectrum target = json_io::target_from_json(json_io::read_file(a.target));
  std::optional<CoefficientSequence> phi;
  if (!a.fixed_phi.empty()) phi = json_io::phi_from_json(json_io::read_file(a.fixed_phi));
  const InverseResult r = solve_inverse_certified(spec, target, phi);
  const json coeffs = json_io::to_json(r.coefficients);
  const json cert = certificate_json(r);
  if (a.out.empty()) {
    out << json_io::dump(json{{"coefficients", coeffs}, {"certificate", cert}});
  } else {
    json_io::write_file_atomic(a.out, coeffs);
    emit(cert, a.cert, out);
  }
  return r.check.within_bounds ? kOk : kNotCertified;
}

int cmd_roundtrip(const RoundtripArgs& a, std::ostream& out) {
  const BaseSpectrum spec = validate_base(json_io::base_from_json(json_io::read_file(a.spec)));
  const TargetSpectrum target = json_io::target_from_json(json_io::read_file(a.target));
  const PerturbationCoefficients coeffs = solve_inverse(spec, target);
  DirectOptions o = direct_options(a.trunc, 1e-10, a.quad);
  Index radius = 0;
  if (!target.head.empty())
    radius = std::max(radius_of(target.head_offset),
                      radius_of(target.head_offset + static_cast<Index>(target.head.size()) - 1));
  o.window = radius;
  const DirectResult r = solve_direct(spec, coeffs, o);
  const Window w = window(spec.index_set, r.localization.window);
  std::vector<cplx> reference;
  for (Index n = w.lo; n <= w.hi; ++n) reference.push_back(target.nu(n, spec));
  const ComparisonReport cmp = compare_spectra(r.spectrum, reference, a.tol);
  out << "max matched deviation: " << cmp.max_distance << "\n";
  return cmp.pass ? kOk : kNotCertified;
}

int cmd_oracle(const OracleArgs& a, std::ostream& out) {
  const BaseSpectrum spec = validate_base(json_io::base_from_json(json_io::read_file(a.spec)));
  const PerturbationCoefficients coeffs = json_io::coefficients_from_json(json_io::read_file(a.coeffs));
  const TruncatedOperator op = build_truncation(spec, coeffs, a.n);
  const std::vector<cplx> eig = dense_eigenvalues(op);
  json values = json::array();
  for (cplx z : eig) values.push_back(json_io::to_json(z));
  emit(json{{"eigenvalues", values}, {"trace_check", trace_check(op, eig)}}, a.out, out);
  return kOk;
}

int cmd_gallery(const GalleryArgs& a, std::ostream& out, std::ostream& err) {
  const BaseSpectrum spec = gallery::example_periodic_base();
  PerturbationCoefficients coeffs;
  if (a.example == "ex51")
    coeffs = gallery::example_51();
  else if (a.example == "ex52")
    coeffs = gallery::example_52(a.beta);

  if (a.report) {
    std::vector<gallery::Check> checks;
    if (a.example == "periodic")
      checks = gallery::report_periodic();
    else if (a.example == "ex51")
      checks = gallery::report_51(a.window);
    else
      checks = gallery::report_52(a.beta, a.window);
    bool all = true;
    for (const gallery::Check& c : checks) {
      out << c.name << ": " << (c.pass ? "PASS" : "FAIL") << "\n";
      if (!c.detail.empty()) err << "  " << c.name << ": " << c.detail << "\n";
      all = all && c.pass;
    }
    return all ? kOk : kNotCertified;
  }

  if (a.out_dir.empty()) {
    out << json_io::dump(json{{"spec", json_io::to_json(spec)}, {"coefficients", json_io::to_json(coeffs)}});
  } else {
    const std::filesystem::path dir(a.out_dir);
    std::filesystem::create_directories(dir);
    json_io::write_file_atomic(dir / "spec.json", json_io::to_json(spec));
    json_io::write_file_atomic(dir / "coeffs.json", json_io::to_json(coeffs));
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectra of rank-one perturbations of self-adjoint operators", "rank1"};
  app.require_subcommand(1);

  DirectArgs da;
  CLI::App* direct = app.add_subcommand("direct", "Eigenvalues of the perturbed operator");
  direct->add_option("--spec", da.spec, "base spectrum JSON")->required();
  direct->add_option("--coeffs", da.coeffs, "perturbation coefficients JSON")->required();
  direct->add_option("--trunc", da.trunc, "explicit summation radius of F")->capture_default_str();
  direct->add_option("--tol", da.tol, "residual tolerance for located zeros")->capture_default_str();
  direct->add_option("--quad", da.quad, "initial quadrature points")->capture_default_str();
  direct->add_option("--out", da.out, "output file (default: stdout)");
  direct->add_option("--window", da.window, "report window radius");
  direct->add_option("--central-radius", da.central_radius, "override K'_eps");
  direct->add_flag("--allow-nonsummable", da.allow_nonsummable, "accept coefficients outside l2");

  InverseArgs ia;
  CLI::App* inverse = app.add_subcommand("inverse", "Coefficients realizing a target spectrum");
  inverse->add_option("--spec", ia.spec, "base spectrum JSON")->required();
  inverse->add_option("--target", ia.target, "target spectrum JSON")->required();
  inverse->add_option("--out", ia.out, "coefficients output file");
  inverse->add_option("--cert", ia.cert, "certificate output file (with --out)");
  inverse->add_option("--fixed-phi", ia.fixed_phi, "JSON with a_head/a_tail of a fixed phi");

  RoundtripArgs ra;
  CLI::App* roundtrip = app.add_subcommand("roundtrip", "Inverse, then direct, then compare");
  roundtrip->add_option("--spec", ra.spec, "base spectrum JSON")->required();
  roundtrip->add_option("--target", ra.target, "target spectrum JSON")->required();
  roundtrip->add_option("--tol", ra.tol, "deviation tolerance")->capture_default_str();
  roundtrip->add_option("--trunc", ra.trunc, "explicit summation radius of F")->capture_default_str();
  roundtrip->add_option("--quad", ra.quad, "initial quadrature points")->capture_default_str();

  OracleArgs oa;
  CLI::App* oracle = app.add_subcommand("oracle", "Dense eigenvalues of a finite truncation");
  oracle->add_option("--spec", oa.spec, "base spectrum JSON")->required();
  oracle->add_option("--coeffs", oa.coeffs, "perturbation coefficients JSON")->required();
  oracle->add_option("--n", oa.n, "truncation radius")->required();
  oracle->add_option("--out", oa.out, "output file (default: stdout)");

  GalleryArgs ga;
  CLI::App* gallery_cmd = app.add_subcommand("gallery", "Built-in examples");
  gallery_cmd->add_option("--example", ga.example, "periodic, ex51 or ex52")
      ->required()
      ->check(CLI::IsMember({"periodic", "ex51", "ex52"}));
  gallery_cmd->add_option("--beta", ga.beta, "decay exponent for ex52")->capture_default_str();
  gallery_cmd->add_option("--window", ga.window, "report window radius")->capture_default_str();
  gallery_cmd->add_option("--out-dir", ga.out_dir, "write spec.json and coeffs.json here");
  gallery_cmd->add_flag("--report", ga.report, "run the example's checks and print PASS/FAIL");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "ParseError: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (*direct) return cmd_direct(da, out);
    if (*inverse) return cmd_inverse(ia, out);
    if (*roundtrip) return cmd_roundtrip(ra, out);
    if (*oracle) return cmd_oracle(oa, out);
    return cmd_gallery(ga, out, err);
  } catch (const SpectralError& e) {
    err << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "InvalidArgument: " << e.what() << "\n";
    return kInputError;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace rank1::cli
