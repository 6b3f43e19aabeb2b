#pragma once

#include <complex>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace folcalc {

using Rational = mpq_class;

// Exact Gaussian rational re + i*im.
struct CRat {
  Rational re{0};
  Rational im{0};

  CRat() = default;
  CRat(long v) : re(v) {}  // NOLINT(google-explicit-constructor)
  CRat(Rational r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  CRat(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }
  CRat conj() const { return CRat(re, -im); }
  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

  CRat& operator+=(const CRat& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  CRat& operator-=(const CRat& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  CRat& operator*=(const CRat& o);
  CRat& operator/=(const CRat& o);
};

inline CRat operator+(CRat a, const CRat& b) { return a += b; }
inline CRat operator-(CRat a, const CRat& b) { return a -= b; }
inline CRat operator*(CRat a, const CRat& b) { return a *= b; }
inline CRat operator/(CRat a, const CRat& b) { return a /= b; }
inline CRat operator-(const CRat& a) { return CRat(-a.re, -a.im); }
inline bool operator==(const CRat& a, const CRat& b) { return a.re == b.re && a.im == b.im; }
inline bool operator!=(const CRat& a, const CRat& b) { return !(a == b); }

// Accepts "p", "-p", "p/q". Throws Error(Parse) otherwise.
Rational parse_rational(std::string_view text);
std::string rational_to_string(const Rational& q);
std::string to_string(const CRat& c);

// Exact binary value of a finite double.
Rational rational_from_double(double v);

}  // namespace folcalc
