#pragma once

#include <map>
#include <string>
#include <span>
#include <utility>

#include "folcalc/framed_torus.hpp"

namespace folcalc::foliated {

// Differential form on T^n written in the adapted coframe as
// sum_I c_I e^I with I increasing. A monomial with u transverse and v leaf
// indices has bidegree (u, v); the form may be inhomogeneous.
class BigradedForm {
 public:
  using Terms = std::map<Mask, TrigPoly>;

  explicit BigradedForm(BasePtr base);
  static BigradedForm function(BasePtr base, const TrigPoly& f);
  static BigradedForm monomial(BasePtr base, Mask m, const TrigPoly& c);
  // Converts sum_I c_I dtheta^I (coordinate basis) into the adapted coframe.
  static BigradedForm from_coordinates(BasePtr base, const Terms& coordinate_terms);

  const BasePtr& base() const { return base_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  TrigPoly coeff(Mask m) const;
  void add_term(Mask m, const TrigPoly& c);

  std::pair<int, int> bidegree(Mask m) const;
  // Block (u, v); empty when absent.
  BigradedForm block(int u, int v) const;
  // Coefficient of the block keyed by (transverse subset, leaf subset), i.e.
  // the value on (Y_T..., V_L...) in that order.
  TrigPoly block_value(Mask transverse, Mask leaf) const;
  bool is_foliated() const;    // only (0, v) blocks
  bool is_transverse() const;  // only (u, 0) blocks
  // Total degree when all terms share one; -1 for zero or mixed forms.
  int degree() const;
  int max_freq() const;

  // Coordinate-basis coefficients sum_I c_I dtheta^I.
  Terms to_coordinates() const;
  double evaluate_coeff(Mask m, std::span<const double> theta) const;

  BigradedForm& operator+=(const BigradedForm& o);
  BigradedForm& operator-=(const BigradedForm& o);
  BigradedForm& operator*=(const Rational& c);
  BigradedForm& operator*=(const TrigPoly& f);
  BigradedForm operator-() const;
  bool operator==(const BigradedForm& o) const { return terms_ == o.terms_; }
  bool operator!=(const BigradedForm& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  BasePtr base_;
  Terms terms_;
};

inline BigradedForm operator+(BigradedForm a, const BigradedForm& b) { return a += b; }
inline BigradedForm operator-(BigradedForm a, const BigradedForm& b) { return a -= b; }
inline BigradedForm operator*(BigradedForm a, const Rational& c) { return a *= c; }
inline BigradedForm operator*(const Rational& c, BigradedForm a) { return a *= c; }
inline BigradedForm operator*(const TrigPoly& f, BigradedForm a) { return a *= f; }

BigradedForm wedge(const BigradedForm& a, const BigradedForm& b);
// Contraction with the frame field E_a.
BigradedForm interior(int a, const BigradedForm& form);
BigradedForm exterior_d(const BigradedForm& form);
// d of the coframe monomial e^I.
std::map<Mask, TrigPoly> d_basis_monomial(const FramedTorus& base, Mask mask);

struct DComponents {
  BigradedForm d01;   // raises v
  BigradedForm d10;   // raises u
  BigradedForm d2m1;  // (u, v) -> (u+2, v-1); vanishes iff G is involutive
};
DComponents d_components(const BigradedForm& form);

// Restriction to the leaves: the (0, *) part.
BigradedForm leaf_restriction(const BigradedForm& form);
// Leafwise differential d_F on foliated forms.
BigradedForm d_F(const BigradedForm& form);

}  // namespace folcalc::foliated
