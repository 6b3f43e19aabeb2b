#pragma once

#include <array>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "folcalc/trig_poly.hpp"

namespace folcalc::poly {

using trig::TrigPoly;

inline constexpr int kMaxFibers = 6;
using Exponent = std::array<int, kMaxFibers>;

// Polynomial in fiber coordinates y_0..y_{m-1} with trig-polynomial coefficients.
class PolyTrig {
 public:
  using Terms = std::map<Exponent, TrigPoly>;

  PolyTrig(int dim = 0, int fibers = 0);
  static PolyTrig constant(int fibers, const TrigPoly& c);
  static PolyTrig coordinate(int dim, int fibers, int j);

  int dim() const { return dim_; }
  int fibers() const { return fibers_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;  // -1 for zero
  void add_term(const Exponent& e, const TrigPoly& c);

  TrigPoly at_zero() const;
  PolyTrig truncated(int max_degree) const;
  PolyTrig d_y(int j) const;
  PolyTrig map_coefficients(const std::function<TrigPoly(const TrigPoly&)>& f) const;
  // y_j := values[j].
  TrigPoly substitute(std::span<const TrigPoly> values) const;
  double evaluate(std::span<const double> theta, std::span<const double> y) const;

  PolyTrig& operator+=(const PolyTrig& o);
  PolyTrig& operator-=(const PolyTrig& o);
  PolyTrig& operator*=(const TrigPoly& c);
  PolyTrig& operator*=(const Rational& c);
  PolyTrig operator-() const;
  bool operator==(const PolyTrig& o) const { return terms_ == o.terms_; }
  bool operator!=(const PolyTrig& o) const { return !(*this == o); }
  std::string to_string() const;

  friend PolyTrig multiply(const PolyTrig& a, const PolyTrig& b, int max_degree);

 private:
  int dim_;
  int fibers_;
  Terms terms_;
};

inline PolyTrig operator+(PolyTrig a, const PolyTrig& b) { return a += b; }
inline PolyTrig operator-(PolyTrig a, const PolyTrig& b) { return a -= b; }
inline PolyTrig operator*(PolyTrig a, const TrigPoly& c) { return a *= c; }
// Product truncated at total y-degree max_degree (negative: no truncation).
PolyTrig multiply(const PolyTrig& a, const PolyTrig& b, int max_degree = -1);

}  // namespace folcalc::poly
