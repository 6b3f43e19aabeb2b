#include "folcalc/total_space.hpp"

#include "folcalc/errors.hpp"

namespace folcalc::total {

PolyTrig TotalSpace::apply_basis_field(int a, const PolyTrig& f) const {
  if (a < n()) return f.map_coefficients([&](const TrigPoly& c) { return base->apply_field(a, c); });
  return f.d_y(a - n());
}

namespace {

template <class Terms>
void accumulate(Terms& terms, Mask m, const PolyTrig& c, int sign) {
  if (c.is_zero() || sign == 0) return;
  auto it = terms.find(m);
  if (it == terms.end()) {
    terms.emplace(m, sign > 0 ? c : -c);
    return;
  }
  if (sign > 0) it->second += c;
  else it->second -= c;
  if (it->second.is_zero()) terms.erase(it);
}

}  // namespace

TotalForm::TotalForm(TotalSpace space) : space_(std::move(space)) {
  require(space_.base != nullptr, ErrorKind::InvalidArgument, "total space without base");
  require(space_.dim() <= 31, ErrorKind::InvalidArgument, "total space too large");
}

TotalForm TotalForm::pullback(const TotalSpace& space, const BigradedForm& base_form) {
  require(base_form.base() == space.base, ErrorKind::DimensionMismatch, "pullback of a form over another frame");
  TotalForm out(space);
  for (const auto& [m, c] : base_form.terms()) out.add_term(m, space.lift(c));
  return out;
}

PolyTrig TotalForm::coeff(Mask m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? space_.zero() : it->second;
}

void TotalForm::add_term(Mask m, const PolyTrig& c) { accumulate(terms_, m, c, 1); }

TotalForm& TotalForm::operator+=(const TotalForm& o) {
  for (const auto& [m, c] : o.terms_) accumulate(terms_, m, c, 1);
  return *this;
}

TotalForm& TotalForm::operator-=(const TotalForm& o) {
  for (const auto& [m, c] : o.terms_) accumulate(terms_, m, c, -1);
  return *this;
}

TotalForm TotalForm::operator-() const {
  TotalForm r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

TotalForm wedge(const TotalForm& a, const TotalForm& b) {
  require(a.space() == b.space(), ErrorKind::DimensionMismatch, "wedge over different total spaces");
  TotalForm out(a.space());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      PolyTrig c = poly::multiply(ca, cb);
      out.add_term(ma | mb, s > 0 ? c : -c);
    }
  return out;
}

TotalForm total_d(const TotalForm& f) {
  const TotalSpace& sp = f.space();
  TotalForm out(sp);
  for (const auto& [m, c] : f.terms()) {
    for (int a = 0; a < sp.dim(); ++a) {
      if (has_bit(m, a)) continue;
      PolyTrig d = sp.apply_basis_field(a, c);
      if (d.is_zero()) continue;
      out.add_term(bit(a) | m, wedge_sign(bit(a), m) > 0 ? d : -d);
    }
    Mask base_part = m & sp.base_mask();
    Mask fiber_part = m & sp.fiber_mask();
    for (const auto& [dm, dc] : foliated::d_basis_monomial(*sp.base, base_part)) {
      PolyTrig t = c;
      t *= dc;
      out.add_term(dm | fiber_part, t);
    }
  }
  return out;
}

BigradedForm substitute_section(const TotalForm& f, std::span<const TrigPoly> a) {
  const TotalSpace& sp = f.space();
  require(static_cast<int>(a.size()) == sp.fibers, ErrorKind::DimensionMismatch, "section needs one function per fiber");
  std::vector<BigradedForm> da;
  for (const auto& aj : a) da.push_back(foliated::exterior_d(BigradedForm::function(sp.base, aj)));
  BigradedForm out(sp.base);
  for (const auto& [m, c] : f.terms()) {
    BigradedForm piece = BigradedForm::monomial(sp.base, m & sp.base_mask(), c.substitute(a));
    for (int j = 0; j < sp.fibers; ++j)
      if (has_bit(m, sp.fiber_index(j))) piece = foliated::wedge(piece, da[static_cast<std::size_t>(j)]);
    out += piece;
  }
  return out;
}

BigradedForm slice(const TotalForm& f, std::span<const Rational> h) {
  const TotalSpace& sp = f.space();
  require(static_cast<int>(h.size()) == sp.fibers, ErrorKind::DimensionMismatch, "slice needs one value per fiber");
  std::vector<TrigPoly> values;
  for (const auto& v : h) values.push_back(TrigPoly::constant(sp.n(), v));
  BigradedForm out(sp.base);
  for (const auto& [m, c] : f.terms())
    if ((m & sp.fiber_mask()) == 0) out.add_term(m, c.substitute(values));
  return out;
}

PolyMatrix matmul(const PolyMatrix& a, const PolyMatrix& b, int max_degree) {
  require(a.size == b.size, ErrorKind::DimensionMismatch, "matmul shape mismatch");
  PolyMatrix out(a.size, a.data.empty() ? PolyTrig() : PolyTrig(a.data[0].dim(), a.data[0].fibers()));
  for (int i = 0; i < a.size; ++i)
    for (int j = 0; j < a.size; ++j)
      for (int l = 0; l < a.size; ++l)
        if (!a(i, l).is_zero() && !b(l, j).is_zero()) out(i, j) += poly::multiply(a(i, l), b(l, j), max_degree);
  return out;
}

PolyMatrix form_matrix(const TotalForm& two_form) {
  const TotalSpace& sp = two_form.space();
  PolyMatrix m(sp.dim(), sp.zero());
  for (const auto& [mask, c] : two_form.terms()) {
    require(popcount(mask) == 2, ErrorKind::InvalidArgument, "form_matrix expects a 2-form");
    auto idx = mask_indices(mask);
    m(idx[0], idx[1]) += c;
    m(idx[1], idx[0]) -= c;
  }
  return m;
}

Multivector::Multivector(TotalSpace space) : space_(std::move(space)) {}

Multivector Multivector::vector_field(const TotalSpace& space, const std::vector<PolyTrig>& components) {
  require(static_cast<int>(components.size()) == space.dim(), ErrorKind::DimensionMismatch, "vector field needs dim components");
  Multivector out(space);
  for (int a = 0; a < space.dim(); ++a) out.add_term(bit(a), components[static_cast<std::size_t>(a)]);
  return out;
}

PolyTrig Multivector::coeff(Mask m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? space_.zero() : it->second;
}

void Multivector::add_term(Mask m, const PolyTrig& c) { accumulate(terms_, m, c, 1); }

std::vector<PolyTrig> Multivector::components() const {
  std::vector<PolyTrig> out(static_cast<std::size_t>(space_.dim()), space_.zero());
  for (const auto& [m, c] : terms_) {
    require(popcount(m) == 1, ErrorKind::InvalidArgument, "components() expects a vector field");
    out[static_cast<std::size_t>(std::countr_zero(m))] = c;
  }
  return out;
}

Multivector Multivector::truncated(int max_degree) const {
  Multivector out(space_);
  for (const auto& [m, c] : terms_) out.add_term(m, c.truncated(max_degree));
  return out;
}

Multivector Multivector::at_zero() const {
  Multivector out(space_);
  for (const auto& [m, c] : terms_) out.add_term(m, space_.lift(c.at_zero()));
  return out;
}

Multivector& Multivector::operator+=(const Multivector& o) {
  for (const auto& [m, c] : o.terms_) accumulate(terms_, m, c, 1);
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& o) {
  for (const auto& [m, c] : o.terms_) accumulate(terms_, m, c, -1);
  return *this;
}

Multivector Multivector::operator-() const {
  Multivector r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Multivector wedge(const Multivector& a, const Multivector& b, int max_degree) {
  Multivector out(a.space());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      PolyTrig c = poly::multiply(ca, cb, max_degree);
      out.add_term(ma | mb, s > 0 ? c : -c);
    }
  return out;
}

Multivector lie_derivative(const Multivector& x, const Multivector& p, int max_degree) {
  const TotalSpace& sp = p.space();
  const int dim = sp.dim();
  const int n = sp.n();
  auto xc = x.components();
  // [X, E_A] = sum_C X^C [E_C, E_A] - sum_C E_A(X^C) E_C
  std::vector<std::vector<PolyTrig>> bracket(static_cast<std::size_t>(dim), std::vector<PolyTrig>(static_cast<std::size_t>(dim), sp.zero()));
  for (int a = 0; a < dim; ++a) {
    auto& w = bracket[static_cast<std::size_t>(a)];
    for (int c = 0; c < dim; ++c) w[static_cast<std::size_t>(c)] -= sp.apply_basis_field(a, xc[static_cast<std::size_t>(c)]);
    if (a >= n) continue;
    for (int c = 0; c < n; ++c) {
      if (xc[static_cast<std::size_t>(c)].is_zero()) continue;
      for (int d = 0; d < n; ++d) {
        const TrigPoly& s = sp.base->structure(d, c, a);
        if (s.is_zero()) continue;
        PolyTrig t = xc[static_cast<std::size_t>(c)];
        t *= s;
        w[static_cast<std::size_t>(d)] += t;
      }
    }
  }
  Multivector out(sp);
  for (const auto& [m, f] : p.terms()) {
    PolyTrig xf = sp.zero();
    for (int c = 0; c < dim; ++c)
      if (!xc[static_cast<std::size_t>(c)].is_zero())
        xf += poly::multiply(xc[static_cast<std::size_t>(c)], sp.apply_basis_field(c, f), max_degree);
    out.add_term(m, xf);
    auto idx = mask_indices(m);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      Mask rest = m & ~bit(idx[i]);
      int pos_sign = (i % 2) ? -1 : 1;
      const auto& w = bracket[static_cast<std::size_t>(idx[i])];
      for (int d = 0; d < dim; ++d) {
        if (w[static_cast<std::size_t>(d)].is_zero()) continue;
        int s = wedge_sign(bit(d), rest);
        if (s == 0) continue;
        PolyTrig t = poly::multiply(f, w[static_cast<std::size_t>(d)], max_degree);
        out.add_term(bit(d) | rest, s * pos_sign > 0 ? t : -t);
      }
    }
  }
  return out;
}

Multivector schouten_with_vector(const Multivector& p, const Multivector& x, int max_degree) {
  return -lie_derivative(x, p, max_degree);
}

}  // namespace folcalc::total
