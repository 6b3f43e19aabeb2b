#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "folcalc/complex_rational.hpp"

namespace folcalc::trig {

inline constexpr int kMaxDim = 6;

// Integer frequency vector; entries past the torus dimension stay zero.
using Mode = std::array<int, kMaxDim>;

Mode make_mode(std::initializer_list<int> ks);
Mode negate(const Mode& k);
bool is_zero_mode(const Mode& k);
// True for the representative of {k, -k} whose first nonzero entry is positive.
bool is_positive_mode(const Mode& k);

// Real trigonometric polynomial on T^n, sum of c_k exp(i k.theta) with exact
// Gaussian-rational c_k. Real-valuedness is the invariant c_{-k} = conj(c_k);
// zero coefficients are never stored, so == is structural.
class TrigPoly {
 public:
  using Terms = std::map<Mode, CRat>;

  explicit TrigPoly(int dim = 0);

  static TrigPoly constant(int dim, const Rational& c);
  static TrigPoly cos_mode(int dim, const Mode& k, const Rational& amp = 1);
  static TrigPoly sin_mode(int dim, const Mode& k, const Rational& amp = 1);
  static TrigPoly cos_axis(int dim, int axis, int freq = 1);
  static TrigPoly sin_axis(int dim, int axis, int freq = 1);
  // Validates Hermitian symmetry and drops zero entries.
  static TrigPoly from_terms(int dim, const Terms& terms);

  int dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  CRat coeff(const Mode& k) const;
  int max_abs_freq() const;
  std::vector<int> active_axes() const;
  double evaluate(std::span<const double> theta) const;

  TrigPoly& operator+=(const TrigPoly& o);
  TrigPoly& operator-=(const TrigPoly& o);
  TrigPoly& operator*=(const TrigPoly& o);
  TrigPoly& operator*=(const Rational& c);
  TrigPoly operator-() const;

  bool operator==(const TrigPoly& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }
  bool operator!=(const TrigPoly& o) const { return !(*this == o); }

  std::string to_string() const;

  // Low-level insertion used by builders that maintain the symmetry themselves.
  void add_term_unchecked(const Mode& k, const CRat& c);
  bool is_hermitian() const;

 private:
  int dim_;
  Terms terms_;
};

inline TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
inline TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }
inline TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
  TrigPoly r = a;
  r *= b;
  return r;
}
inline TrigPoly operator*(TrigPoly a, const Rational& c) { return a *= c; }
inline TrigPoly operator*(const Rational& c, TrigPoly a) { return a *= c; }

TrigPoly tp_mul(const TrigPoly& a, const TrigPoly& b);
// Multiplies mode k by i*k[axis].
TrigPoly tp_partial(const TrigPoly& p, int axis);
// Keeps the modes with k[a] = 0 for every a in axes.
TrigPoly tp_average(const TrigPoly& p, std::span<const int> axes);
TrigPoly tp_pow(const TrigPoly& p, int n);

// Exact Laurent division of univariate polynomials in z = exp(i theta_axis).
// Returns nullopt when g does not divide f. Throws on g = 0 or multivariate input.
std::optional<TrigPoly> tp_div_exact(const TrigPoly& f, const TrigPoly& g);

// Real coordinates against {1, cos(k.theta), sin(k.theta) : k positive}.
struct RealCoord {
  Mode k;
  bool is_sin;
  bool operator<(const RealCoord& o) const { return k != o.k ? k < o.k : is_sin < o.is_sin; }
  bool operator==(const RealCoord& o) const { return k == o.k && is_sin == o.is_sin; }
};
std::vector<std::pair<RealCoord, Rational>> real_coordinates(const TrigPoly& p);
TrigPoly real_basis_function(int dim, const RealCoord& c);

// Floating-point evaluator for hot loops.
class CompiledTrig {
 public:
  CompiledTrig() = default;
  explicit CompiledTrig(const TrigPoly& p);
  double operator()(std::span<const double> theta) const;
  bool is_zero() const { return constant_ == 0.0 && modes_.empty(); }

 private:
  struct Term {
    std::array<int, kMaxDim> k;
    double a;  // cos coefficient
    double b;  // sin coefficient
  };
  int dim_ = 0;
  double constant_ = 0.0;
  std::vector<Term> modes_;
};

}  // namespace folcalc::trig
