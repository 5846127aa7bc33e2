#include "rank1/json_io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>

#include "rank1/error.hpp"

namespace rank1::json_io {

namespace {

void require_object(const json& doc, const char* what) {
  if (!doc.is_object()) fail(ErrorKind::ParseError, std::string(what) + " must be a JSON object");
}

void reject_unknown(const json& doc, std::initializer_list<const char*> allowed, const char* what) {
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool ok = false;
    for (const char* key : allowed) ok = ok || it.key() == key;
    if (!ok) fail(ErrorKind::UnknownField, std::string(what) + " has unknown field \"" + it.key() + "\"");
  }
}

const json& field(const json& doc, const char* key, const char* what) {
  auto it = doc.find(key);
  if (it == doc.end()) fail(ErrorKind::ParseError, std::string(what) + " is missing field \"" + key + "\"");
  return *it;
}

double number(const json& v, const char* what) {
  if (!v.is_number()) fail(ErrorKind::ParseError, std::string(what) + " must be a number");
  return v.get<double>();
}

Index integer(const json& v, const char* what) {
  if (!v.is_number_integer()) fail(ErrorKind::ParseError, std::string(what) + " must be an integer");
  return v.get<Index>();
}

json real_number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

json head_to_json(Index offset, const std::vector<cplx>& values) {
  json vals = json::array();
  for (const cplx& z : values) vals.push_back(to_json(z));
  return json{{"offset", offset}, {"values", vals}};
}

std::pair<Index, std::vector<cplx>> head_from_json(const json& doc, const char* what) {
  require_object(doc, what);
  reject_unknown(doc, {"offset", "values"}, what);
  const Index offset = integer(field(doc, "offset", what), what);
  const json& vals = field(doc, "values", what);
  if (!vals.is_array()) fail(ErrorKind::ParseError, std::string(what) + ".values must be an array");
  std::vector<cplx> out;
  out.reserve(vals.size());
  for (const json& v : vals) out.push_back(complex_from_json(v));
  return {offset, std::move(out)};
}

json tail_to_json(const std::optional<PowerTail>& tail) {
  if (!tail) return "zero";
  json t{{"beta", tail->beta}, {"scale", tail->scale}, {"phase", tail->phase}};
  if (tail->shift != 0.0) t["shift"] = tail->shift;
  if (tail->parity == Parity::Odd) t["parity"] = "odd";
  return t;
}

std::optional<PowerTail> tail_from_json(const json& doc, const char* what) {
  if (doc.is_string()) {
    if (doc.get<std::string>() == "zero") return std::nullopt;
    fail(ErrorKind::ParseError, std::string(what) + " must be \"zero\" or a power-law object");
  }
  require_object(doc, what);
  reject_unknown(doc, {"beta", "scale", "phase", "shift", "parity"}, what);
  PowerTail t;
  t.beta = number(field(doc, "beta", what), what);
  t.scale = number(field(doc, "scale", what), what);
  t.phase = number(field(doc, "phase", what), what);
  if (doc.contains("shift")) t.shift = number(doc["shift"], what);
  if (doc.contains("parity")) {
    const json& p = doc["parity"];
    if (p == "even")
      t.parity = Parity::Even;
    else if (p == "odd")
      t.parity = Parity::Odd;
    else
      fail(ErrorKind::ParseError, std::string(what) + ".parity must be \"even\" or \"odd\"");
  }
  return t;
}

const char* origin_name(Origin o) {
  switch (o) {
    case Origin::CommonWithA: return "common";
    case Origin::ZeroOfF: return "zero_of_F";
    case Origin::Both: return "both";
  }
  return "zero_of_F";
}

}  // namespace

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& doc) {
  if (!doc.is_array() || doc.size() != 2 || !doc[0].is_number() || !doc[1].is_number())
    fail(ErrorKind::ParseError, "complex numbers must be [re, im] pairs");
  return {doc[0].get<double>(), doc[1].get<double>()};
}

json to_json(const BaseSpectrum& spec) {
  json vals = json::array();
  for (double v : spec.head) vals.push_back(v);
  return json{{"index_set", spec.index_set == IndexSet::Integers ? "Z" : "N"},
              {"lambda_head", {{"offset", spec.head_offset}, {"values", vals}}},
              {"lambda_tail", {{"slope", spec.tail.slope}, {"intercept", spec.tail.intercept}}},
              {"gap", spec.gap}};
}

BaseSpectrum base_from_json(const json& doc) {
  const char* what = "BaseSpectrum";
  require_object(doc, what);
  reject_unknown(doc, {"index_set", "lambda_head", "lambda_tail", "gap"}, what);
  BaseSpectrum spec;
  const json& set = field(doc, "index_set", what);
  if (set == "Z")
    spec.index_set = IndexSet::Integers;
  else if (set == "N")
    spec.index_set = IndexSet::Naturals;
  else
    fail(ErrorKind::ParseError, "index_set must be \"Z\" or \"N\"");

  const json& head = field(doc, "lambda_head", what);
  require_object(head, "lambda_head");
  reject_unknown(head, {"offset", "values"}, "lambda_head");
  spec.head_offset = integer(field(head, "offset", "lambda_head"), "lambda_head.offset");
  const json& vals = field(head, "values", "lambda_head");
  if (!vals.is_array()) fail(ErrorKind::ParseError, "lambda_head.values must be an array");
  for (const json& v : vals) {
    if (v.is_number()) {
      spec.head.push_back(v.get<double>());
    } else {
      const cplx z = complex_from_json(v);
      if (z.imag() != 0.0) fail(ErrorKind::NonReal, "eigenvalues of A must be real");
      spec.head.push_back(z.real());
    }
  }

  const json& tail = field(doc, "lambda_tail", what);
  require_object(tail, "lambda_tail");
  reject_unknown(tail, {"slope", "intercept"}, "lambda_tail");
  spec.tail.slope = number(field(tail, "slope", "lambda_tail"), "lambda_tail.slope");
  spec.tail.intercept = number(field(tail, "intercept", "lambda_tail"), "lambda_tail.intercept");
  spec.gap = number(field(doc, "gap", what), "gap");
  return spec;
}

json to_json(const PerturbationCoefficients& coeffs) {
  return json{{"a_head", head_to_json(coeffs.a.head_offset, coeffs.a.head)},
              {"a_tail", tail_to_json(coeffs.a.tail)},
              {"b_head", head_to_json(coeffs.b.head_offset, coeffs.b.head)},
              {"b_tail", tail_to_json(coeffs.b.tail)}};
}

PerturbationCoefficients coefficients_from_json(const json& doc) {
  const char* what = "PerturbationCoefficients";
  require_object(doc, what);
  reject_unknown(doc, {"a_head", "a_tail", "b_head", "b_tail"}, what);
  PerturbationCoefficients c;
  std::tie(c.a.head_offset, c.a.head) = head_from_json(field(doc, "a_head", what), "a_head");
  c.a.tail = tail_from_json(field(doc, "a_tail", what), "a_tail");
  std::tie(c.b.head_offset, c.b.head) = head_from_json(field(doc, "b_head", what), "b_head");
  c.b.tail = tail_from_json(field(doc, "b_tail", what), "b_tail");
  return c;
}

CoefficientSequence phi_from_json(const json& doc) {
  const char* what = "phi";
  require_object(doc, what);
  reject_unknown(doc, {"a_head", "a_tail"}, what);
  CoefficientSequence a;
  std::tie(a.head_offset, a.head) = head_from_json(field(doc, "a_head", what), "a_head");
  a.tail = tail_from_json(field(doc, "a_tail", what), "a_tail");
  return a;
}

json to_json(const TargetSpectrum& target) {
  return json{{"nu_head", head_to_json(target.head_offset, target.head)}, {"tail", "equals_lambda"}};
}

TargetSpectrum target_from_json(const json& doc) {
  const char* what = "TargetSpectrum";
  require_object(doc, what);
  reject_unknown(doc, {"nu_head", "tail"}, what);
  TargetSpectrum t;
  std::tie(t.head_offset, t.head) = head_from_json(field(doc, "nu_head", what), "nu_head");
  if (field(doc, "tail", what) != "equals_lambda")
    fail(ErrorKind::ParseError, "TargetSpectrum.tail must be \"equals_lambda\"");
  return t;
}

json to_json(const PerturbedSpectrum& spectrum) {
  json entries = json::array();
  for (const SpectrumEntry& e : spectrum.entries) {
    entries.push_back(json{{"mu", to_json(e.mu)},
                           {"mult", e.multiplicity},
                           {"paired_index", e.paired_index},
                           {"origin", origin_name(e.origin)}});
  }
  return json{{"entries", entries},
              {"offset_sum", real_number(spectrum.offset_sum)},
              {"tail_bound", real_number(spectrum.tail_bound)},
              {"certified", spectrum.certified}};
}

PerturbedSpectrum spectrum_from_json(const json& doc) {
  const char* what = "PerturbedSpectrum";
  require_object(doc, what);
  reject_unknown(doc, {"entries", "offset_sum", "tail_bound", "certified"}, what);
  PerturbedSpectrum s;
  const json& entries = field(doc, "entries", what);
  if (!entries.is_array()) fail(ErrorKind::ParseError, "entries must be an array");
  for (const json& e : entries) {
    require_object(e, "entry");
    reject_unknown(e, {"mu", "mult", "paired_index", "origin"}, "entry");
    SpectrumEntry out;
    out.mu = complex_from_json(field(e, "mu", "entry"));
    out.multiplicity = static_cast<int>(integer(field(e, "mult", "entry"), "mult"));
    out.paired_index = integer(field(e, "paired_index", "entry"), "paired_index");
    const json& o = field(e, "origin", "entry");
    if (o == "common")
      out.origin = Origin::CommonWithA;
    else if (o == "zero_of_F")
      out.origin = Origin::ZeroOfF;
    else if (o == "both")
      out.origin = Origin::Both;
    else
      fail(ErrorKind::ParseError, "unknown origin");
    s.entries.push_back(out);
  }
  const auto real_or_inf = [](const json& v, const char* name) {
    if (v.is_null()) return std::numeric_limits<double>::infinity();
    return number(v, name);
  };
  s.offset_sum = real_or_inf(field(doc, "offset_sum", what), "offset_sum");
  s.tail_bound = real_or_inf(field(doc, "tail_bound", what), "tail_bound");
  const json& cert = field(doc, "certified", what);
  if (!cert.is_boolean()) fail(ErrorKind::ParseError, "certified must be a boolean");
  s.certified = cert.get<bool>();
  return s;
}

json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

void write_file_atomic(const std::filesystem::path& path, const json& doc) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + tmp.string());
    out << dump(doc);
    if (!out) fail(ErrorKind::InvalidArgument, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace rank1::json_io
