#pragma once

#include <vector>

#include "folcalc/bigraded_form.hpp"

namespace folcalc::foliated {

enum class ValueBundle { G, GStar };

// Foliated forms with values in G or G*: components[t] multiplies Y_t (for G)
// or the transverse covector e^{k+t} (for G*).
struct ValuedForm {
  BasePtr base;
  ValueBundle bundle = ValueBundle::GStar;
  std::vector<BigradedForm> components;

  ValuedForm(BasePtr b, ValueBundle v);
  bool is_zero() const;
  int degree() const;  // -1 when zero or mixed
  bool operator==(const ValuedForm& o) const { return bundle == o.bundle && components == o.components; }
  bool operator!=(const ValuedForm& o) const { return !(*this == o); }
  ValuedForm& operator+=(const ValuedForm& o);
  ValuedForm& operator-=(const ValuedForm& o);
  ValuedForm& operator*=(const Rational& c);
  ValuedForm operator-() const;
};

inline ValuedForm operator+(ValuedForm a, const ValuedForm& b) { return a += b; }
inline ValuedForm operator-(ValuedForm a, const ValuedForm& b) { return a -= b; }
inline ValuedForm operator*(const Rational& c, ValuedForm a) { return a *= c; }

// (1, v) form eta  ->  G*-valued v-form with <tau(eta)(V...), Y> = eta(Y, V...).
ValuedForm tau(const BigradedForm& eta);
BigradedForm tau_inv(const ValuedForm& xi);

// Differentials of the Bott connection on G and of its dual on G*.
ValuedForm bott_d(const ValuedForm& eta);
ValuedForm bott_d_star(const ValuedForm& xi);

// <<eta (x) Y, xi (x) gamma>> = <gamma, Y> eta ^ xi.
BigradedForm pairing(const ValuedForm& eta_g, const ValuedForm& xi_gstar);

// Closed 2-form of bidegree (2, 0) whose restriction to G is nondegenerate.
class Presymplectic {
 public:
  Presymplectic(BasePtr base, BigradedForm omega);

  const BasePtr& base() const { return base_; }
  const BigradedForm& omega() const { return omega_; }
  // B(s, t) = omega(Y_s, Y_t) and its ring inverse.
  const TrigMatrix& b_matrix() const { return b_; }
  const TrigMatrix& b_inverse() const { return b_inv_; }

  ValuedForm flat(const ValuedForm& eta_g) const;          // Id (x) omega-flat
  ValuedForm flat_inverse(const ValuedForm& xi_gstar) const;  // Id (x) omega-flat^{-1}

 private:
  BasePtr base_;
  BigradedForm omega_;
  TrigMatrix b_;
  TrigMatrix b_inv_;
};

// Representative (-1)^v tau(d10 alpha) of d_nu[alpha]; requires d_F alpha = 0.
ValuedForm d_nu_rep(const BigradedForm& alpha);
// Phi(alpha) = (-1)^{v+1} (Id (x) omega-flat^{-1}) tau(d10 alpha).
ValuedForm phi_map(const Presymplectic& p, const BigradedForm& alpha);

// Bott connection along a leafwise field X = sum_a x_a V_a on a section of G or G*.
ValuedForm covariant_derivative(const std::vector<TrigPoly>& x, const ValuedForm& section);

}  // namespace folcalc::foliated
