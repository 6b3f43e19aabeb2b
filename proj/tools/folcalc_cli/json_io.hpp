#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "folcalc/foliated.hpp"
#include "folcalc/mapping_torus.hpp"

namespace folcalc::cli {

using Json = nlohmann::ordered_json;

// Schema violation located by a JSON pointer into the manifest.
class ManifestError : public std::runtime_error {
 public:
  ManifestError(const std::string& pointer, const std::string& message)
      : std::runtime_error("manifest error at '" + pointer + "': " + message), pointer_(pointer) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

std::string pointer_child(const std::string& parent, const std::string& key);
std::string pointer_child(const std::string& parent, std::size_t index);

// Walks one manifest object. Defaults are written back into the node so the
// resolved manifest can be echoed; finish() rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(Json& node, std::string pointer);

  const std::string& pointer() const { return pointer_; }
  std::string path(const std::string& key) const { return pointer_child(pointer_, key); }
  bool has(const std::string& key) const { return node_.contains(key); }
  Json& required(const std::string& key);
  Json* optional(const std::string& key);

  std::string string_or(const std::string& key, const std::string& def);
  double number_or(const std::string& key, double def);
  long long integer_or(const std::string& key, long long def);
  bool bool_or(const std::string& key, bool def);

  void finish() const;

 private:
  Json& node_;
  std::string pointer_;
  std::set<std::string> seen_;
};

std::string as_string(const Json& v, const std::string& pointer);
double as_number(const Json& v, const std::string& pointer);
long long as_integer(const Json& v, const std::string& pointer);
std::vector<double> as_number_list(const Json& v, const std::string& pointer);

// Integers or "p/q" strings.
Rational parse_rational_value(const Json& v, const std::string& pointer);

// A constant (rational) or a list of terms {"c": q, "cos": k} / {"c": q, "sin": k} / {"c": q}.
trig::TrigPoly parse_trig(Json& v, const std::string& pointer, int dim);
// {"basis": "coframe" | "coordinate", "terms": [{"indices": [...], "coef": trig}]}
foliated::BigradedForm parse_form(Json& v, const std::string& pointer, const foliated::BasePtr& base);
// {"preset": name} or {"name", "n", "k", "frame": [[trig] per field], "omega": form}
foliated::Presymplectic parse_geometry(Json& v, const std::string& pointer);
mapping_torus::RationalMatrix parse_matrix(const Json& v, const std::string& pointer);

Json rational_json(const Rational& q);
Json trig_json(const trig::TrigPoly& p);
std::string trig_text(const trig::TrigPoly& p);
Json form_json(const foliated::BigradedForm& f);
std::string form_text(const foliated::BigradedForm& f);
// Every reported float carries the tolerance it was judged against.
Json num(double value, double tolerance);
Json exact(const Json& value);

}  // namespace folcalc::cli
