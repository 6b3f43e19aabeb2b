#include "folcalc/poly_trig.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "folcalc/errors.hpp"

namespace folcalc::poly {

namespace {
int total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }
}  // namespace

PolyTrig::PolyTrig(int dim, int fibers) : dim_(dim), fibers_(fibers) {
  require(fibers >= 0 && fibers <= kMaxFibers, ErrorKind::InvalidArgument, "fiber count out of range");
}

PolyTrig PolyTrig::constant(int fibers, const TrigPoly& c) {
  PolyTrig p(c.dim(), fibers);
  p.add_term(Exponent{}, c);
  return p;
}

PolyTrig PolyTrig::coordinate(int dim, int fibers, int j) {
  require(j >= 0 && j < fibers, ErrorKind::InvalidArgument, "fiber coordinate out of range");
  PolyTrig p(dim, fibers);
  Exponent e{};
  e[j] = 1;
  p.add_term(e, TrigPoly::constant(dim, 1));
  return p;
}

int PolyTrig::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

void PolyTrig::add_term(const Exponent& e, const TrigPoly& c) {
  if (c.is_zero()) return;
  require(c.dim() == dim_, ErrorKind::DimensionMismatch, "coefficient lives on another torus");
  auto [it, ins] = terms_.try_emplace(e, c);
  if (!ins) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

TrigPoly PolyTrig::at_zero() const {
  auto it = terms_.find(Exponent{});
  return it == terms_.end() ? TrigPoly(dim_) : it->second;
}

PolyTrig PolyTrig::truncated(int max_degree) const {
  PolyTrig out(dim_, fibers_);
  for (const auto& [e, c] : terms_)
    if (total_degree(e) <= max_degree) out.terms_.emplace(e, c);
  return out;
}

PolyTrig PolyTrig::d_y(int j) const {
  PolyTrig out(dim_, fibers_);
  for (const auto& [e, c] : terms_) {
    if (e[j] == 0) continue;
    Exponent f = e;
    f[j] -= 1;
    out.add_term(f, c * Rational(e[j]));
  }
  return out;
}

PolyTrig PolyTrig::map_coefficients(const std::function<TrigPoly(const TrigPoly&)>& f) const {
  PolyTrig out(dim_, fibers_);
  for (const auto& [e, c] : terms_) out.add_term(e, f(c));
  return out;
}

TrigPoly PolyTrig::substitute(std::span<const TrigPoly> values) const {
  require(static_cast<int>(values.size()) == fibers_, ErrorKind::DimensionMismatch, "substitution needs one value per fiber");
  TrigPoly out(dim_);
  for (const auto& [e, c] : terms_) {
    TrigPoly t = c;
    for (int j = 0; j < fibers_; ++j)
      for (int p = 0; p < e[j]; ++p) t *= values[static_cast<std::size_t>(j)];
    out += t;
  }
  return out;
}

double PolyTrig::evaluate(std::span<const double> theta, std::span<const double> y) const {
  double sum = 0;
  for (const auto& [e, c] : terms_) {
    double t = c.evaluate(theta);
    for (int j = 0; j < fibers_; ++j) t *= std::pow(y[static_cast<std::size_t>(j)], e[j]);
    sum += t;
  }
  return sum;
}

PolyTrig& PolyTrig::operator+=(const PolyTrig& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

PolyTrig& PolyTrig::operator-=(const PolyTrig& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

PolyTrig& PolyTrig::operator*=(const TrigPoly& c) {
  Terms out;
  for (const auto& [e, v] : terms_) {
    TrigPoly t = v * c;
    if (!t.is_zero()) out.emplace(e, std::move(t));
  }
  terms_ = std::move(out);
  return *this;
}

PolyTrig& PolyTrig::operator*=(const Rational& c) {
  if (sgn(c) == 0) terms_.clear();
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

PolyTrig PolyTrig::operator-() const {
  PolyTrig r = *this;
  for (auto& [e, v] : r.terms_) v = -v;
  return r;
}

std::string PolyTrig::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ")";
    for (int j = 0; j < fibers_; ++j)
      if (e[j]) os << "*y" << j << (e[j] > 1 ? "^" + std::to_string(e[j]) : "");
  }
  return os.str();
}

PolyTrig multiply(const PolyTrig& a, const PolyTrig& b, int max_degree) {
  require(a.dim_ == b.dim_ && a.fibers_ == b.fibers_, ErrorKind::DimensionMismatch, "multiplying unrelated polynomials");
  PolyTrig out(a.dim_, a.fibers_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      Exponent e{};
      for (int j = 0; j < kMaxFibers; ++j) e[j] = ea[j] + eb[j];
      if (max_degree >= 0 && total_degree(e) > max_degree) continue;
      out.add_term(e, ca * cb);
    }
  return out;
}

}  // namespace folcalc::poly
