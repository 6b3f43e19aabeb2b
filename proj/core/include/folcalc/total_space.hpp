#pragma once

#include <map>
#include <span>
#include <vector>

#include "folcalc/bigraded_form.hpp"
#include "folcalc/poly_trig.hpp"

namespace folcalc::total {

using foliated::BasePtr;
using foliated::BigradedForm;
using poly::PolyTrig;
using trig::TrigPoly;

// T^n x R^m with the basis {E_a (lifted base frame), d/dy_j}; dual basis
// {e^a, dy_j}. Basis index a < n is the base, n + j is fiber j.
struct TotalSpace {
  BasePtr base;
  int fibers = 0;

  int n() const { return base->n(); }
  int dim() const { return base->n() + fibers; }
  int fiber_index(int j) const { return base->n() + j; }
  Mask base_mask() const { return range_mask(0, base->n()); }
  Mask fiber_mask() const { return range_mask(base->n(), dim()); }
  PolyTrig zero() const { return PolyTrig(base->n(), fibers); }
  PolyTrig lift(const TrigPoly& c) const { return PolyTrig::constant(fibers, c); }
  // Derivative of f along basis field A.
  PolyTrig apply_basis_field(int a, const PolyTrig& f) const;
  bool operator==(const TotalSpace& o) const { return base == o.base && fibers == o.fibers; }
};

// Differential form on the total space with y-polynomial coefficients.
class TotalForm {
 public:
  using Terms = std::map<Mask, PolyTrig>;
  explicit TotalForm(TotalSpace space);
  static TotalForm pullback(const TotalSpace& space, const BigradedForm& base_form);

  const TotalSpace& space() const { return space_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  PolyTrig coeff(Mask m) const;
  void add_term(Mask m, const PolyTrig& c);

  TotalForm& operator+=(const TotalForm& o);
  TotalForm& operator-=(const TotalForm& o);
  TotalForm operator-() const;
  bool operator==(const TotalForm& o) const { return terms_ == o.terms_; }

 private:
  TotalSpace space_;
  Terms terms_;
};

inline TotalForm operator+(TotalForm a, const TotalForm& b) { return a += b; }
inline TotalForm operator-(TotalForm a, const TotalForm& b) { return a -= b; }

TotalForm wedge(const TotalForm& a, const TotalForm& b);
TotalForm total_d(const TotalForm& f);
// Pullback along theta -> (theta, a(theta)): y_j := a_j, dy_j := d a_j.
BigradedForm substitute_section(const TotalForm& f, std::span<const TrigPoly> a);
// Pullback to the slice y = h (constant).
BigradedForm slice(const TotalForm& f, std::span<const Rational> h);

// Square matrix of PolyTrig entries.
struct PolyMatrix {
  int size = 0;
  std::vector<PolyTrig> data;
  PolyMatrix() = default;
  PolyMatrix(int n, const PolyTrig& zero) : size(n), data(static_cast<std::size_t>(n * n), zero) {}
  PolyTrig& operator()(int i, int j) { return data[static_cast<std::size_t>(i * size + j)]; }
  const PolyTrig& operator()(int i, int j) const { return data[static_cast<std::size_t>(i * size + j)]; }
};
PolyMatrix matmul(const PolyMatrix& a, const PolyMatrix& b, int max_degree);
// M(A, B) = form(E_A, E_B) for a 2-form.
PolyMatrix form_matrix(const TotalForm& two_form);

// Multivector field sum_I c_I E_I on the total space.
class Multivector {
 public:
  using Terms = std::map<Mask, PolyTrig>;
  explicit Multivector(TotalSpace space);
  static Multivector vector_field(const TotalSpace& space, const std::vector<PolyTrig>& components);

  const TotalSpace& space() const { return space_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  PolyTrig coeff(Mask m) const;
  void add_term(Mask m, const PolyTrig& c);
  std::vector<PolyTrig> components() const;  // for degree 1
  Multivector truncated(int max_degree) const;
  Multivector at_zero() const;  // y = 0 in every coefficient

  Multivector& operator+=(const Multivector& o);
  Multivector& operator-=(const Multivector& o);
  Multivector operator-() const;
  bool operator==(const Multivector& o) const { return terms_ == o.terms_; }

 private:
  TotalSpace space_;
  Terms terms_;
};

Multivector wedge(const Multivector& a, const Multivector& b, int max_degree = -1);
// Lie derivative of P along the vector field X, truncated in y-degree.
Multivector lie_derivative(const Multivector& x, const Multivector& p, int max_degree = -1);
// Schouten bracket [P, X] = -L_X P for a vector field X.
Multivector schouten_with_vector(const Multivector& p, const Multivector& x, int max_degree = -1);

}  // namespace folcalc::total
