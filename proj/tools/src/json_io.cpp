#include "folcalc_cli/json_io.hpp"

#include <map>
#include <memory>
#include <sstream>

#include "folcalc/errors.hpp"
#include "folcalc/geometries.hpp"

namespace folcalc::cli {

using foliated::BasePtr;
using foliated::BigradedForm;
using foliated::FramedTorus;
using foliated::Presymplectic;
using trig::TrigPoly;

std::string pointer_child(const std::string& parent, const std::string& key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~') escaped += "~0";
    else if (c == '/') escaped += "~1";
    else escaped += c;
  }
  return parent + "/" + escaped;
}

std::string pointer_child(const std::string& parent, std::size_t index) { return parent + "/" + std::to_string(index); }

ObjectReader::ObjectReader(Json& node, std::string pointer) : node_(node), pointer_(std::move(pointer)) {
  if (!node_.is_object()) throw ManifestError(pointer_, "expected an object");
}

Json& ObjectReader::required(const std::string& key) {
  seen_.insert(key);
  if (!node_.contains(key)) throw ManifestError(path(key), "required field is missing");
  return node_[key];
}

Json* ObjectReader::optional(const std::string& key) {
  seen_.insert(key);
  return node_.contains(key) ? &node_[key] : nullptr;
}

std::string ObjectReader::string_or(const std::string& key, const std::string& def) {
  if (Json* v = optional(key)) return as_string(*v, path(key));
  node_[key] = def;
  return def;
}

double ObjectReader::number_or(const std::string& key, double def) {
  if (Json* v = optional(key)) return as_number(*v, path(key));
  node_[key] = def;
  return def;
}

long long ObjectReader::integer_or(const std::string& key, long long def) {
  if (Json* v = optional(key)) return as_integer(*v, path(key));
  node_[key] = def;
  return def;
}

bool ObjectReader::bool_or(const std::string& key, bool def) {
  if (Json* v = optional(key)) {
    if (!v->is_boolean()) throw ManifestError(path(key), "expected a boolean");
    return v->get<bool>();
  }
  node_[key] = def;
  return def;
}

void ObjectReader::finish() const {
  for (const auto& [key, value] : node_.items())
    if (!seen_.count(key)) throw ManifestError(path(key), "unknown field");
}

std::string as_string(const Json& v, const std::string& pointer) {
  if (!v.is_string()) throw ManifestError(pointer, "expected a string");
  return v.get<std::string>();
}

double as_number(const Json& v, const std::string& pointer) {
  if (!v.is_number()) throw ManifestError(pointer, "expected a number");
  return v.get<double>();
}

long long as_integer(const Json& v, const std::string& pointer) {
  if (!v.is_number_integer()) throw ManifestError(pointer, "expected an integer");
  return v.get<long long>();
}

std::vector<double> as_number_list(const Json& v, const std::string& pointer) {
  if (!v.is_array()) throw ManifestError(pointer, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], pointer_child(pointer, i)));
  return out;
}

Rational parse_rational_value(const Json& v, const std::string& pointer) {
  if (v.is_number_integer()) return Rational(static_cast<long>(v.get<long long>()));
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const Error& e) {
      throw ManifestError(pointer, e.what());
    }
  }
  throw ManifestError(pointer, "expected an integer or a \"p/q\" string");
}

namespace {

trig::Mode parse_mode(const Json& v, const std::string& pointer, int dim) {
  if (!v.is_array() || static_cast<int>(v.size()) != dim)
    throw ManifestError(pointer, "expected a frequency vector of length " + std::to_string(dim));
  trig::Mode k{};
  for (int i = 0; i < dim; ++i) k[static_cast<std::size_t>(i)] = static_cast<int>(as_integer(v[static_cast<std::size_t>(i)], pointer_child(pointer, static_cast<std::size_t>(i))));
  return k;
}

}  // namespace

TrigPoly parse_trig(Json& v, const std::string& pointer, int dim) {
  if (v.is_number_integer() || v.is_string()) return TrigPoly::constant(dim, parse_rational_value(v, pointer));
  if (!v.is_array()) throw ManifestError(pointer, "expected a rational or a list of trigonometric terms");
  TrigPoly out(dim);
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::string at = pointer_child(pointer, i);
    ObjectReader term(v[i], at);
    Rational c = parse_rational_value(term.required("c"), term.path("c"));
    Json* cs = term.optional("cos");
    Json* sn = term.optional("sin");
    term.finish();
    if (cs && sn) throw ManifestError(at, "a term has either \"cos\" or \"sin\", not both");
    if (cs) out += TrigPoly::cos_mode(dim, parse_mode(*cs, term.path("cos"), dim), c);
    else if (sn) out += TrigPoly::sin_mode(dim, parse_mode(*sn, term.path("sin"), dim), c);
    else out += TrigPoly::constant(dim, c);
  }
  return out;
}

BigradedForm parse_form(Json& v, const std::string& pointer, const BasePtr& base) {
  ObjectReader r(v, pointer);
  std::string basis = r.string_or("basis", "coframe");
  if (basis != "coframe" && basis != "coordinate") throw ManifestError(r.path("basis"), "expected \"coframe\" or \"coordinate\"");
  Json& terms = r.required("terms");
  r.finish();
  const std::string tp = r.path("terms");
  if (!terms.is_array()) throw ManifestError(tp, "expected an array of terms");
  const int n = base->n();
  BigradedForm::Terms acc;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    std::string at = pointer_child(tp, i);
    ObjectReader term(terms[i], at);
    Json& idx = term.required("indices");
    Json& coef = term.required("coef");
    term.finish();
    if (!idx.is_array()) throw ManifestError(term.path("indices"), "expected an array of indices");
    Mask m = 0;
    int prev = -1;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      long long a = as_integer(idx[j], pointer_child(term.path("indices"), j));
      if (a <= prev || a >= n)
        throw ManifestError(pointer_child(term.path("indices"), j), "indices must increase and lie in [0, " + std::to_string(n) + ")");
      prev = static_cast<int>(a);
      m |= bit(prev);
    }
    TrigPoly c = parse_trig(coef, term.path("coef"), n);
    auto it = acc.find(m);
    if (it == acc.end()) acc.emplace(m, c);
    else it->second += c;
  }
  try {
    if (basis == "coordinate") return BigradedForm::from_coordinates(base, acc);
    BigradedForm f(base);
    for (const auto& [m, c] : acc) f.add_term(m, c);
    return f;
  } catch (const Error& e) {
    throw ManifestError(pointer, e.what());
  }
}

Presymplectic parse_geometry(Json& v, const std::string& pointer) {
  ObjectReader r(v, pointer);
  if (r.has("preset")) {
    std::string name = as_string(r.required("preset"), r.path("preset"));
    r.finish();
    try {
      return geometries::by_name(name);
    } catch (const Error& e) {
      throw ManifestError(r.path("preset"), e.what());
    }
  }
  std::string name = r.string_or("name", "custom");
  long long n = as_integer(r.required("n"), r.path("n"));
  long long k = as_integer(r.required("k"), r.path("k"));
  if (n < 1 || n > trig::kMaxDim) throw ManifestError(r.path("n"), "torus dimension must lie in [1, 6]");
  if (k < 0 || k > n) throw ManifestError(r.path("k"), "leaf dimension must lie in [0, n]");
  Json& frame = r.required("frame");
  Json& omega = r.required("omega");
  r.finish();
  const std::string fp = r.path("frame");
  if (!frame.is_array() || frame.size() != static_cast<std::size_t>(n))
    throw ManifestError(fp, "expected " + std::to_string(n) + " frame fields");
  std::vector<std::vector<TrigPoly>> columns;
  for (std::size_t a = 0; a < frame.size(); ++a) {
    std::string at = pointer_child(fp, a);
    if (!frame[a].is_array() || frame[a].size() != static_cast<std::size_t>(n))
      throw ManifestError(at, "expected " + std::to_string(n) + " components");
    columns.emplace_back();
    for (std::size_t i = 0; i < frame[a].size(); ++i)
      columns.back().push_back(parse_trig(frame[a][i], pointer_child(at, i), static_cast<int>(n)));
  }
  BasePtr base;
  try {
    base = std::make_shared<const FramedTorus>(static_cast<int>(n), static_cast<int>(k), columns, name);
  } catch (const Error& e) {
    throw ManifestError(fp, e.what());
  }
  BigradedForm w = parse_form(omega, r.path("omega"), base);
  try {
    return Presymplectic(base, w);
  } catch (const Error& e) {
    throw ManifestError(r.path("omega"), e.what());
  }
}

mapping_torus::RationalMatrix parse_matrix(const Json& v, const std::string& pointer) {
  if (!v.is_array() || v.empty()) throw ManifestError(pointer, "expected a non-empty array of rows");
  mapping_torus::RationalMatrix m;
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::string at = pointer_child(pointer, i);
    if (!v[i].is_array() || v[i].size() != v.size()) throw ManifestError(at, "matrix must be square");
    m.emplace_back();
    for (std::size_t j = 0; j < v[i].size(); ++j) m.back().push_back(parse_rational_value(v[i][j], pointer_child(at, j)));
  }
  return m;
}

Json rational_json(const Rational& q) { return rational_to_string(q); }

Json trig_json(const TrigPoly& p) {
  Json out = Json::array();
  const int dim = p.dim();
  for (const auto& [rc, c] : trig::real_coordinates(p)) {
    Json term;
    term["c"] = rational_json(c);
    if (!trig::is_zero_mode(rc.k)) {
      Json k = Json::array();
      for (int i = 0; i < dim; ++i) k.push_back(rc.k[static_cast<std::size_t>(i)]);
      term[rc.is_sin ? "sin" : "cos"] = k;
    }
    out.push_back(term);
  }
  return out;
}

std::string trig_text(const TrigPoly& p) {
  // Expand exp(i k.theta) = prod_a (cos(k_a t_a) + i sin(k_a t_a)) into per-axis products.
  using Factor = std::pair<int, bool>;  // (frequency, is_sin); frequency 0 is the constant 1
  const int dim = p.dim();
  std::map<std::vector<Factor>, CRat> acc;
  for (const auto& [k, c] : p.terms()) {
    std::vector<std::pair<std::vector<Factor>, CRat>> partial{{std::vector<Factor>(static_cast<std::size_t>(dim), {0, false}), c}};
    for (int a = 0; a < dim; ++a) {
      int f = k[static_cast<std::size_t>(a)];
      if (f == 0) continue;
      std::vector<std::pair<std::vector<Factor>, CRat>> next;
      for (auto& [key, v] : partial) {
        auto kc = key;
        kc[static_cast<std::size_t>(a)] = {std::abs(f), false};
        next.emplace_back(kc, v);
        auto ks = key;
        ks[static_cast<std::size_t>(a)] = {std::abs(f), true};
        CRat iv(-v.im, v.re);
        next.emplace_back(ks, f > 0 ? iv : -iv);
      }
      partial = std::move(next);
    }
    for (auto& [key, v] : partial) acc[key] += v;
  }
  std::string s;
  for (const auto& [key, v] : acc) {
    const Rational& c = v.re;
    if (c == 0) continue;
    std::string factors;
    for (int a = 0; a < dim; ++a) {
      auto [f, is_sin] = key[static_cast<std::size_t>(a)];
      if (f == 0) continue;
      if (!factors.empty()) factors += "*";
      factors += std::string(is_sin ? "sin(" : "cos(") + (f == 1 ? "" : std::to_string(f) + "*") + "t" + std::to_string(a) + ")";
    }
    Rational mag = abs(c);
    if (s.empty()) s += c < 0 ? "-" : "";
    else s += c < 0 ? " - " : " + ";
    if (factors.empty()) s += rational_to_string(mag);
    else s += (mag == 1 ? "" : rational_to_string(mag) + "*") + factors;
  }
  return s.empty() ? "0" : s;
}

Json form_json(const BigradedForm& f) {
  Json out;
  out["basis"] = "coframe";
  out["terms"] = Json::array();
  for (const auto& [m, c] : f.terms()) {
    Json term;
    term["indices"] = mask_indices(m);
    term["coef"] = trig_json(c);
    out["terms"].push_back(term);
  }
  return out;
}

std::string form_text(const BigradedForm& f) {
  if (f.is_zero()) return "0";
  std::string s;
  for (const auto& [m, c] : f.terms()) {
    if (!s.empty()) s += " + ";
    std::string coef = trig_text(c);
    bool single = coef.find(" + ") == std::string::npos && coef.find(" - ") == std::string::npos;
    s += single ? coef : "(" + coef + ")";
    std::string mono;
    for (int i : mask_indices(m)) mono += (mono.empty() ? "e" : "^e") + std::to_string(i);
    if (!mono.empty()) s += " " + mono;
  }
  return s;
}

Json num(double value, double tolerance) {
  Json out;
  out["value"] = value;
  out["tolerance"] = tolerance;
  return out;
}

Json exact(const Json& value) {
  Json out;
  out["value"] = value;
  out["tolerance"] = 0;
  return out;
}

}  // namespace folcalc::cli
