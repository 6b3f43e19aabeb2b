#include "folcalc/complex_rational.hpp"

#include <cmath>

#include "folcalc/errors.hpp"

namespace folcalc {

CRat& CRat::operator*=(const CRat& o) {
  Rational r = re * o.re - im * o.im;
  Rational i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

CRat& CRat::operator/=(const CRat& o) {
  Rational den = o.re * o.re + o.im * o.im;
  require(sgn(den) != 0, ErrorKind::DivisionByZero, "complex rational division by zero");
  Rational r = (re * o.re + im * o.im) / den;
  Rational i = (im * o.re - re * o.im) / den;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto valid_int = [](const std::string& p) {
    if (p.empty()) return false;
    std::size_t i = (p[0] == '-' || p[0] == '+') ? 1 : 0;
    if (i == p.size()) return false;
    for (; i < p.size(); ++i)
      if (p[i] < '0' || p[i] > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
    fail(ErrorKind::Parse, "malformed rational '" + s + "'");
  Rational q;
  q.get_num() = mpz_class(num, 10);
  q.get_den() = mpz_class(den, 10);
  require(sgn(q.get_den()) != 0, ErrorKind::Parse, "zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

std::string rational_to_string(const Rational& q) { return q.get_str(10); }

std::string to_string(const CRat& c) {
  if (c.is_real()) return rational_to_string(c.re);
  return "(" + rational_to_string(c.re) + (sgn(c.im) < 0 ? "" : "+") + rational_to_string(c.im) + "i)";
}

Rational rational_from_double(double v) {
  require(std::isfinite(v), ErrorKind::InvalidArgument, "non-finite double");
  return Rational(v);
}

}  // namespace folcalc
