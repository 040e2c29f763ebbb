#include "supertrace/io.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include <json.hpp>

#include "supertrace/errors.hpp"

namespace supertrace {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void schema(const std::string& path, const std::string& message) {
  fail(ErrorCode::SchemaError, (path.empty() ? std::string("/") : path) + ": " + message);
}

void require_keys(const Json& j, const std::string& path, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) schema(path, "expected an object");
  std::set<std::string> allowed;
  for (const char* k : required) {
    allowed.insert(k);
    if (!j.contains(k)) schema(path, std::string("missing field '") + k + "'");
  }
  for (const char* k : optional) allowed.insert(k);
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) schema(path + "/" + key, "unknown field");
  }
}

const Json& field(const Json& j, const char* key) { return j.at(key); }

long get_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) schema(path, "expected an integer");
  return j.get<long>();
}

std::string get_string(const Json& j, const std::string& path) {
  if (!j.is_string()) schema(path, "expected a string");
  return j.get<std::string>();
}

const Json& get_array(const Json& j, const std::string& path) {
  if (!j.is_array()) schema(path, "expected an array");
  return j;
}

RationalPi get_rational_pi(const Json& j, const std::string& path) {
  const std::string text = get_string(j, path);
  try {
    return RationalPi::parse(text);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::RationalSyntaxError) {
      fail(ErrorCode::RationalSyntaxError, path + ": " + e.what());
    }
    throw;
  }
}

Rational get_rational(const Json& j, const std::string& path) {
  return get_rational_pi(j, path).coeff();
}

Complex get_complex(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    schema(path, "expected [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json spectrum_json(const StepSpectrum& s) {
  Json bps = Json::array();
  Json pieces = Json::array();
  const auto& segs = s.segments();
  for (std::size_t k = 0; k < segs.size(); ++k) {
    if (k == 0) {
      bps.push_back(segs[k].left.str());
    } else if (segs[k - 1].right != segs[k].left) {
      pieces.push_back(Json{{"value", complex_json({})}, {"mod", "0"}});
      bps.push_back(segs[k].left.str());
    }
    pieces.push_back(Json{{"value", complex_json(segs[k].piece.value)},
                          {"mod", format_rational(segs[k].piece.modulation)}});
    bps.push_back(segs[k].right.str());
  }
  return Json{{"breakpoints", bps}, {"pieces", pieces}};
}

StepSpectrum parse_spectrum(const Json& j, const std::string& path, bool& canonicalized) {
  require_keys(j, path, {"breakpoints", "pieces"});
  const Json& bps = get_array(field(j, "breakpoints"), path + "/breakpoints");
  const Json& pieces = get_array(field(j, "pieces"), path + "/pieces");
  if (bps.empty() ? !pieces.empty() : pieces.size() + 1 != bps.size()) {
    schema(path + "/pieces", "expected one piece per pair of adjacent breakpoints");
  }
  std::vector<RationalPi> points;
  for (std::size_t k = 0; k < bps.size(); ++k) {
    points.push_back(get_rational_pi(bps[k], path + "/breakpoints/" + std::to_string(k)));
    if (k > 0 && !(points[k - 1] < points[k])) {
      schema(path + "/breakpoints/" + std::to_string(k), "breakpoints must increase strictly");
    }
  }
  std::vector<RawPiece> raw;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const std::string p = path + "/pieces/" + std::to_string(k);
    require_keys(pieces[k], p, {"value"}, {"mod"});
    const Complex value = get_complex(field(pieces[k], "value"), p + "/value");
    const Rational mod = pieces[k].contains("mod") ? get_rational(pieces[k]["mod"], p + "/mod")
                                                   : Rational(0);
    if (value == Complex{}) continue;
    raw.push_back(RawPiece{points[k], points[k + 1], value, mod});
  }
  StepSpectrum s = make_step_spectrum(std::move(raw));
  if (spectrum_json(s) != j) canonicalized = true;
  return s;
}

Json structure_json(const AffineStructure& a) {
  Json sigma = Json::array();
  Json theta = Json::array();
  for (int i = 0; i < a.n; ++i) {
    sigma.push_back(a.sigma[static_cast<std::size_t>(i)] + 1);
    theta.push_back(a.theta[static_cast<std::size_t>(i)].str());
  }
  return Json{{"n", a.n}, {"N", a.scale}, {"sigma", sigma}, {"theta", theta}};
}

AffineStructure parse_structure(const Json& j, const std::string& path,
                                std::initializer_list<const char*> extra = {}) {
  std::vector<const char*> req{"n", "N", "sigma", "theta"};
  if (!j.is_object()) schema(path, "expected an object");
  for (const char* k : req) {
    if (!j.contains(k)) schema(path, std::string("missing field '") + k + "'");
  }
  for (const auto& [key, value] : j.items()) {
    bool ok = key == "n" || key == "N" || key == "sigma" || key == "theta";
    for (const char* e : extra) ok = ok || key == e;
    if (!ok) schema(path + "/" + key, "unknown field");
  }
  AffineStructure a;
  const long n = get_int(field(j, "n"), path + "/n");
  if (n < 1) schema(path + "/n", "n must be positive");
  a.n = static_cast<int>(n);
  a.scale = get_int(field(j, "N"), path + "/N");
  if (a.scale < 2) schema(path + "/N", "N must be >= 2");
  const Json& sigma = get_array(field(j, "sigma"), path + "/sigma");
  const Json& theta = get_array(field(j, "theta"), path + "/theta");
  if (static_cast<long>(sigma.size()) != n) schema(path + "/sigma", "expected n entries");
  if (static_cast<long>(theta.size()) != n) schema(path + "/theta", "expected n entries");
  a.sigma.clear();
  a.theta.clear();
  for (long k = 0; k < n; ++k) {
    const std::string p = path + "/sigma/" + std::to_string(k);
    const long image = get_int(sigma[static_cast<std::size_t>(k)], p);
    if (image < 1 || image > n) schema(p, "image out of range 1..n");
    a.sigma.push_back(static_cast<int>(image - 1));
    a.theta.push_back(
        get_rational_pi(theta[static_cast<std::size_t>(k)], path + "/theta/" + std::to_string(k)));
  }
  return a;
}

Json function_json(const VectorFunction& f) {
  Json comps = Json::array();
  for (const auto& c : f.components) comps.push_back(spectrum_json(c));
  return Json{{"label", f.label}, {"components", comps}};
}

VectorFunction parse_function(const Json& j, const std::string& path, bool& canonicalized,
                              std::initializer_list<const char*> extra = {}) {
  if (!j.is_object()) schema(path, "expected an object");
  if (!j.contains("components")) schema(path, "missing field 'components'");
  for (const auto& [key, value] : j.items()) {
    bool ok = key == "label" || key == "components";
    for (const char* e : extra) ok = ok || key == e;
    if (!ok) schema(path + "/" + key, "unknown field");
  }
  VectorFunction f;
  if (j.contains("label")) f.label = get_string(j["label"], path + "/label");
  const Json& comps = get_array(field(j, "components"), path + "/components");
  if (comps.empty()) schema(path + "/components", "at least one component is required");
  for (std::size_t k = 0; k < comps.size(); ++k) {
    f.components.push_back(
        parse_spectrum(comps[k], path + "/components/" + std::to_string(k), canonicalized));
  }
  return f;
}

Json index_json(const FiberIndex& idx) { return Json{{"k", idx.k}, {"i", idx.i + 1}}; }

FiberIndex parse_index(const Json& j, const std::string& path) {
  require_keys(j, path, {"k", "i"});
  const long i = get_int(field(j, "i"), path + "/i");
  if (i < 1) schema(path + "/i", "component indices are 1-based");
  return {get_int(field(j, "k"), path + "/k"), static_cast<int>(i - 1)};
}

Json operator_json(const FiberOperator& t) {
  struct Visitor {
    Json operator()(const FiberOperator::Identity&) const { return Json{{"type", "identity"}}; }
    Json operator()(const FiberOperator::RankOne& r) const {
      Json v = Json::array();
      for (const auto& [idx, value] : r.f.entries()) {
        Json e = index_json(idx);
        e["value"] = complex_json(value);
        v.push_back(e);
      }
      return Json{{"type", "rank_one"}, {"vector", v}};
    }
    Json operator()(const FiberOperator::Matrix& m) const {
      Json v = Json::array();
      for (const auto& [rc, value] : m.entries) {
        v.push_back(Json{{"row", index_json(rc.first)},
                         {"col", index_json(rc.second)},
                         {"value", complex_json(value)}});
      }
      return Json{{"type", "matrix"}, {"entries", v}};
    }
    Json operator()(const FiberOperator::Conjugated&) const {
      fail(ErrorCode::InvalidArgument, "conjugated operators have no document form");
    }
  };
  return std::visit(Visitor{}, t.representation());
}

FiberOperator parse_operator(const Json& j, const std::string& path) {
  if (!j.contains("type")) schema(path, "missing field 'type'");
  const std::string type = get_string(j["type"], path + "/type");
  if (type == "identity") {
    require_keys(j, path, {"kind", "version", "type"});
    return FiberOperator::identity();
  }
  if (type == "rank_one") {
    require_keys(j, path, {"kind", "version", "type", "vector"});
    Fiber f;
    const Json& v = get_array(j["vector"], path + "/vector");
    for (std::size_t k = 0; k < v.size(); ++k) {
      const std::string p = path + "/vector/" + std::to_string(k);
      require_keys(v[k], p, {"k", "i", "value"});
      const FiberIndex idx = parse_index(Json{{"k", v[k]["k"]}, {"i", v[k]["i"]}}, p);
      f.add(idx, get_complex(v[k]["value"], p + "/value"));
    }
    if (f.empty()) schema(path + "/vector", "rank-one vector must be nonzero");
    return FiberOperator::rank_one(std::move(f));
  }
  if (type == "matrix") {
    require_keys(j, path, {"kind", "version", "type", "entries"});
    std::map<std::pair<FiberIndex, FiberIndex>, Complex> entries;
    const Json& v = get_array(j["entries"], path + "/entries");
    for (std::size_t k = 0; k < v.size(); ++k) {
      const std::string p = path + "/entries/" + std::to_string(k);
      require_keys(v[k], p, {"row", "col", "value"});
      entries[{parse_index(v[k]["row"], p + "/row"), parse_index(v[k]["col"], p + "/col")}] +=
          get_complex(v[k]["value"], p + "/value");
    }
    return FiberOperator::matrix(std::move(entries));
  }
  schema(path + "/type", "unknown operator type '" + type + "'");
}

SystemTag parse_tag(const Json& j, const std::string& path) {
  const std::string t = get_string(j, path);
  for (SystemTag tag : {SystemTag::Candidate, SystemTag::VerifiedNtf, SystemTag::VerifiedOrthonormal}) {
    if (t == to_string(tag)) return tag;
  }
  schema(path, "unknown tag '" + t + "'");
}

Json header(const char* kind) { return Json{{"kind", kind}, {"version", "1"}}; }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string format_complex(Complex c) {
  return format_residual(c.real()) + (std::signbit(c.imag()) ? "-" : "+") +
         format_residual(std::abs(c.imag())) + "i";
}

}  // namespace

ParsedDocument parse_document(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::SchemaError, std::string("/: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) schema("", "expected an object");
  if (!j.contains("kind")) schema("", "missing field 'kind'");
  if (!j.contains("version")) schema("", "missing field 'version'");
  const std::string kind = get_string(j["kind"], "/kind");
  if (get_string(j["version"], "/version") != "1") schema("/version", "unsupported version");
  ParsedDocument out;
  try {
    if (kind == "structure") {
      out.value = parse_structure(j, "", {"kind", "version"});
    } else if (kind == "function") {
      out.value = parse_function(j, "", out.canonicalized, {"kind", "version"});
    } else if (kind == "system") {
      require_keys(j, "", {"kind", "version", "structure", "psis"}, {"tag"});
      SystemDocument s;
      s.structure = parse_structure(j["structure"], "/structure");
      const Json& psis = get_array(j["psis"], "/psis");
      for (std::size_t k = 0; k < psis.size(); ++k) {
        s.psis.push_back(parse_function(psis[k], "/psis/" + std::to_string(k), out.canonicalized));
        if (s.psis.back().size() != s.structure.n) {
          schema("/psis/" + std::to_string(k) + "/components", "expected n components");
        }
      }
      if (j.contains("tag")) s.declared_tag = parse_tag(j["tag"], "/tag");
      out.value = std::move(s);
    } else if (kind == "operator") {
      out.value = parse_operator(j, "");
    } else {
      schema("/kind", "unknown kind '" + kind + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::SchemaError, std::string("/: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::OverlappingPieces || e.code() == ErrorCode::InvalidArgument) {
      fail(ErrorCode::SchemaError, e.what());
    }
    throw;
  }
  return out;
}

std::string serialize(const AffineStructure& a) {
  Json j = header("structure");
  j.update(structure_json(a));
  return dump(j);
}

std::string serialize(const VectorFunction& f) {
  Json j = header("function");
  j.update(function_json(f));
  return dump(j);
}

std::string serialize(const SystemDocument& s) {
  Json j = header("system");
  j["structure"] = structure_json(s.structure);
  Json psis = Json::array();
  for (const auto& p : s.psis) psis.push_back(function_json(p));
  j["psis"] = psis;
  j["tag"] = std::string(to_string(s.declared_tag));
  return dump(j);
}

std::string serialize(const FiberOperator& t) {
  Json j = header("operator");
  j.update(operator_json(t));
  return dump(j);
}

std::string serialize(const Document& d) {
  return std::visit([](const auto& v) { return serialize(v); }, d);
}

SystemDocument to_document(const WaveletSystem& w) {
  return SystemDocument{w.structure(), w.psis(), w.tag()};
}

std::string format_residual(double value) {
  if (value == 0.0) return std::signbit(value) ? "-0.0e0" : "0.0e0";
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1e", value);
  std::string s(buf);
  const auto e = s.find('e');
  std::string mantissa = s.substr(0, e);
  std::string exponent = s.substr(e + 1);
  bool negative = false;
  std::size_t pos = 0;
  if (pos < exponent.size() && (exponent[pos] == '+' || exponent[pos] == '-')) {
    negative = exponent[pos] == '-';
    ++pos;
  }
  while (pos + 1 < exponent.size() && exponent[pos] == '0') ++pos;
  return mantissa + "e" + (negative ? "-" : "") + exponent.substr(pos);
}

std::string report_json(const CheckReport& report, std::string_view command) {
  Json j;
  j["command"] = std::string(command);
  j["passed"] = report.passed;
  j["mode"] = std::string(to_string(report.mode));
  j["tolerance"] = report.tolerance;
  j["max_residual"] = report.max_residual;
  j["cells_checked"] = report.cells_checked;
  if (report.witness) {
    const Witness& w = *report.witness;
    Json wj;
    wj["equation"] = w.equation;
    wj["xi"] = w.xi.str();
    wj["cell"] = w.cell ? Json::array({w.cell->first.str(), w.cell->second.str()}) : Json();
    wj["i"] = w.i + 1;
    wj["j"] = w.j + 1;
    if (!w.index_name.empty()) wj[w.index_name] = w.index;
    wj["value"] = complex_json(w.value);
    j["witness"] = wj;
  } else {
    j["witness"] = nullptr;
  }
  j["notes"] = report.notes;
  return dump(j);
}

std::string report_text(const CheckReport& report, std::string_view command) {
  std::string out = std::string(command) + ": " + (report.passed ? "PASS" : "FAIL") + "\n";
  out += "mode " + std::string(to_string(report.mode)) + ", tolerance " +
         format_residual(report.tolerance) + "\n";
  out += "residual " + format_residual(report.max_residual) + "\n";
  out += "cells " + std::to_string(report.cells_checked) + "\n";
  if (report.witness) {
    const Witness& w = *report.witness;
    out += "witness: eq " + w.equation;
    if (!w.index_name.empty()) out += ", " + w.index_name + "=" + std::to_string(w.index);
    if (w.cell) {
      out += ", xi in [" + format_rational_full(w.cell->first.coeff()) + "," +
             format_rational_full(w.cell->second.coeff()) + "]·π";
    } else {
      out += ", xi = " + format_rational_full(w.xi.coeff()) + "·π";
    }
    out += " (i=" + std::to_string(w.i + 1) + ", j=" + std::to_string(w.j + 1) + ", value " +
           format_complex(w.value) + ")\n";
  }
  for (const auto& n : report.notes) out += "note: " + n + "\n";
  return out;
}

std::string to_csv(const std::vector<CsvRow>& rows) {
  std::string out = "xi_num,xi_den,value_re,value_im\n";
  char buf[96];
  for (const auto& r : rows) {
    out += r.xi.coeff().get_num().get_str() + "," + r.xi.coeff().get_den().get_str();
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g\n", r.value.real(), r.value.imag());
    out += buf;
  }
  return out;
}

std::vector<CsvRow> csv_rows(const CheckReport& report) {
  std::vector<CsvRow> rows;
  rows.reserve(report.samples.size());
  for (const auto& s : report.samples) rows.push_back({s.xi, {s.value, 0.0}});
  return rows;
}

}  // namespace supertrace
