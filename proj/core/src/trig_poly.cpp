#include "folcalc/trig_poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "folcalc/errors.hpp"

namespace folcalc::trig {

Mode make_mode(std::initializer_list<int> ks) {
  require(ks.size() <= static_cast<std::size_t>(kMaxDim), ErrorKind::InvalidArgument, "mode too long");
  Mode m{};
  std::copy(ks.begin(), ks.end(), m.begin());
  return m;
}

Mode negate(const Mode& k) {
  Mode m{};
  for (int i = 0; i < kMaxDim; ++i) m[i] = -k[i];
  return m;
}

bool is_zero_mode(const Mode& k) {
  return std::all_of(k.begin(), k.end(), [](int v) { return v == 0; });
}

bool is_positive_mode(const Mode& k) {
  for (int v : k)
    if (v != 0) return v > 0;
  return false;
}

TrigPoly::TrigPoly(int dim) : dim_(dim) {
  require(dim >= 0 && dim <= kMaxDim, ErrorKind::InvalidArgument, "torus dimension out of range");
}

TrigPoly TrigPoly::constant(int dim, const Rational& c) {
  TrigPoly p(dim);
  if (sgn(c) != 0) p.terms_[Mode{}] = CRat(c);
  return p;
}

TrigPoly TrigPoly::cos_mode(int dim, const Mode& k, const Rational& amp) {
  if (is_zero_mode(k)) return constant(dim, amp);
  TrigPoly p(dim);
  Rational half = amp / 2;
  p.add_term_unchecked(k, CRat(half));
  p.add_term_unchecked(negate(k), CRat(half));
  return p;
}

TrigPoly TrigPoly::sin_mode(int dim, const Mode& k, const Rational& amp) {
  TrigPoly p(dim);
  if (is_zero_mode(k)) return p;
  Rational half = amp / 2;
  p.add_term_unchecked(k, CRat(0, -half));
  p.add_term_unchecked(negate(k), CRat(0, half));
  return p;
}

TrigPoly TrigPoly::cos_axis(int dim, int axis, int freq) {
  require(axis >= 0 && axis < dim, ErrorKind::InvalidArgument, "axis out of range");
  Mode k{};
  k[axis] = freq;
  return cos_mode(dim, k);
}

TrigPoly TrigPoly::sin_axis(int dim, int axis, int freq) {
  require(axis >= 0 && axis < dim, ErrorKind::InvalidArgument, "axis out of range");
  Mode k{};
  k[axis] = freq;
  return sin_mode(dim, k);
}

TrigPoly TrigPoly::from_terms(int dim, const Terms& terms) {
  TrigPoly p(dim);
  for (const auto& [k, c] : terms) {
    for (int i = dim; i < kMaxDim; ++i)
      require(k[i] == 0, ErrorKind::InvalidArgument, "mode has entries beyond the torus dimension");
    if (!c.is_zero()) p.terms_[k] = c;
  }
  require(p.is_hermitian(), ErrorKind::InvalidArgument,
          "coefficients violate c(-k) = conj(c(k)); the polynomial is not real");
  return p;
}

bool TrigPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && is_zero_mode(terms_.begin()->first));
}

Rational TrigPoly::constant_term() const {
  auto it = terms_.find(Mode{});
  return it == terms_.end() ? Rational(0) : it->second.re;
}

CRat TrigPoly::coeff(const Mode& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? CRat() : it->second;
}

int TrigPoly::max_abs_freq() const {
  int m = 0;
  for (const auto& [k, c] : terms_)
    for (int v : k) m = std::max(m, std::abs(v));
  return m;
}

std::vector<int> TrigPoly::active_axes() const {
  std::vector<int> axes;
  for (int a = 0; a < dim_; ++a)
    for (const auto& [k, c] : terms_)
      if (k[a] != 0) {
        axes.push_back(a);
        break;
      }
  return axes;
}

double TrigPoly::evaluate(std::span<const double> theta) const {
  require(static_cast<int>(theta.size()) >= dim_, ErrorKind::DimensionMismatch, "point has too few coordinates");
  double sum = 0.0;
  for (const auto& [k, c] : terms_) {
    double phase = 0.0;
    for (int i = 0; i < dim_; ++i) phase += k[i] * theta[i];
    sum += c.re.get_d() * std::cos(phase) - c.im.get_d() * std::sin(phase);
  }
  return sum;
}

void TrigPoly::add_term_unchecked(const Mode& k, const CRat& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool TrigPoly::is_hermitian() const {
  for (const auto& [k, c] : terms_) {
    auto it = terms_.find(negate(k));
    if (it == terms_.end() || it->second != c.conj()) return false;
  }
  return true;
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& o) {
  require(dim_ == o.dim_, ErrorKind::DimensionMismatch, "adding trig polynomials on different tori");
  for (const auto& [k, c] : o.terms_) add_term_unchecked(k, c);
  return *this;
}

TrigPoly& TrigPoly::operator-=(const TrigPoly& o) {
  require(dim_ == o.dim_, ErrorKind::DimensionMismatch, "subtracting trig polynomials on different tori");
  for (const auto& [k, c] : o.terms_) add_term_unchecked(k, -c);
  return *this;
}

TrigPoly& TrigPoly::operator*=(const TrigPoly& o) {
  require(dim_ == o.dim_, ErrorKind::DimensionMismatch, "multiplying trig polynomials on different tori");
  if (terms_.empty() || o.terms_.empty()) {
    terms_.clear();
    return *this;
  }
  Terms out;
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : o.terms_) {
      Mode k{};
      for (int i = 0; i < kMaxDim; ++i) k[i] = ka[i] + kb[i];
      auto [it, inserted] = out.try_emplace(k, ca);
      if (inserted)
        it->second *= cb;
      else
        it->second += ca * cb;
    }
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  terms_ = std::move(out);
  return *this;
}

TrigPoly& TrigPoly::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) {
    v.re *= c;
    v.im *= c;
  }
  return *this;
}

TrigPoly TrigPoly::operator-() const {
  TrigPoly r = *this;
  for (auto& [k, v] : r.terms_) v = -v;
  return r;
}

std::string TrigPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << folcalc::to_string(c) << "*e[";
    for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << k[i];
    os << "]";
  }
  return os.str();
}

TrigPoly tp_mul(const TrigPoly& a, const TrigPoly& b) { return a * b; }

TrigPoly tp_partial(const TrigPoly& p, int axis) {
  require(axis >= 0 && axis < p.dim(), ErrorKind::InvalidArgument, "partial: axis out of range");
  TrigPoly r(p.dim());
  for (const auto& [k, c] : p.terms()) {
    if (k[axis] == 0) continue;
    Rational f(k[axis]);
    r.add_term_unchecked(k, CRat(-c.im * f, c.re * f));
  }
  return r;
}

TrigPoly tp_average(const TrigPoly& p, std::span<const int> axes) {
  for (int a : axes) require(a >= 0 && a < p.dim(), ErrorKind::InvalidArgument, "average: axis out of range");
  TrigPoly r(p.dim());
  for (const auto& [k, c] : p.terms()) {
    bool keep = std::all_of(axes.begin(), axes.end(), [&](int a) { return k[a] == 0; });
    if (keep) r.add_term_unchecked(k, c);
  }
  return r;
}

TrigPoly tp_pow(const TrigPoly& p, int n) {
  require(n >= 0, ErrorKind::InvalidArgument, "negative power");
  TrigPoly r = TrigPoly::constant(p.dim(), 1);
  for (int i = 0; i < n; ++i) r *= p;
  return r;
}

std::optional<TrigPoly> tp_div_exact(const TrigPoly& f, const TrigPoly& g) {
  require(f.dim() == g.dim(), ErrorKind::DimensionMismatch, "division on different tori");
  require(!g.is_zero(), ErrorKind::DivisionByZero, "tp_div_exact by the zero polynomial");
  auto g_axes = g.active_axes();
  auto f_axes = f.active_axes();
  require(g_axes.size() <= 1, ErrorKind::InvalidArgument, "tp_div_exact: divisor is multivariate");
  require(f_axes.size() <= 1, ErrorKind::InvalidArgument, "tp_div_exact: dividend is multivariate");
  if (g_axes.empty()) {
    TrigPoly q = f;
    q *= Rational(1) / g.constant_term();
    return q;
  }
  int axis = g_axes[0];
  require(f_axes.empty() || f_axes[0] == axis, ErrorKind::InvalidArgument,
          "tp_div_exact: dividend and divisor depend on different axes");
  if (f.is_zero()) return TrigPoly(f.dim());

  auto to_laurent = [axis](const TrigPoly& p, int& lo) {
    lo = p.terms().begin()->first[axis];
    int hi = lo;
    for (const auto& [k, c] : p.terms()) {
      lo = std::min(lo, k[axis]);
      hi = std::max(hi, k[axis]);
    }
    std::vector<CRat> v(static_cast<std::size_t>(hi - lo + 1));
    for (const auto& [k, c] : p.terms()) v[static_cast<std::size_t>(k[axis] - lo)] = c;
    return v;
  };
  int flo = 0, glo = 0;
  std::vector<CRat> num = to_laurent(f, flo);
  std::vector<CRat> den = to_laurent(g, glo);
  if (num.size() < den.size()) return std::nullopt;
  std::vector<CRat> quot(num.size() - den.size() + 1);
  const CRat& lead = den.back();
  for (std::size_t i = quot.size(); i-- > 0;) {
    CRat q = num[i + den.size() - 1] / lead;
    quot[i] = q;
    if (q.is_zero()) continue;
    for (std::size_t j = 0; j < den.size(); ++j) num[i + j] -= q * den[j];
  }
  for (const auto& r : num)
    if (!r.is_zero()) return std::nullopt;
  TrigPoly out(f.dim());
  for (std::size_t i = 0; i < quot.size(); ++i) {
    Mode k{};
    k[axis] = static_cast<int>(i) + flo - glo;
    out.add_term_unchecked(k, quot[i]);
  }
  require(out.is_hermitian(), ErrorKind::InvalidArgument, "tp_div_exact: quotient is not real");
  return out;
}

std::vector<std::pair<RealCoord, Rational>> real_coordinates(const TrigPoly& p) {
  std::vector<std::pair<RealCoord, Rational>> out;
  for (const auto& [k, c] : p.terms()) {
    if (is_zero_mode(k)) {
      out.push_back({RealCoord{k, false}, c.re});
    } else if (is_positive_mode(k)) {
      if (sgn(c.re) != 0) out.push_back({RealCoord{k, false}, 2 * c.re});
      if (sgn(c.im) != 0) out.push_back({RealCoord{k, true}, -2 * c.im});
    }
  }
  return out;
}

TrigPoly real_basis_function(int dim, const RealCoord& c) {
  return c.is_sin ? TrigPoly::sin_mode(dim, c.k) : TrigPoly::cos_mode(dim, c.k);
}

CompiledTrig::CompiledTrig(const TrigPoly& p) : dim_(p.dim()) {
  for (const auto& [k, c] : p.terms()) {
    if (is_zero_mode(k)) {
      constant_ = c.re.get_d();
    } else if (is_positive_mode(k)) {
      modes_.push_back(Term{k, 2 * c.re.get_d(), -2 * c.im.get_d()});
    }
  }
}

double CompiledTrig::operator()(std::span<const double> theta) const {
  double sum = constant_;
  for (const auto& t : modes_) {
    double phase = 0.0;
    for (int i = 0; i < dim_; ++i) phase += t.k[i] * theta[i];
    sum += t.a * std::cos(phase) + t.b * std::sin(phase);
  }
  return sum;
}

}  // namespace folcalc::trig
