#include "folcalc/bigraded_form.hpp"

#include <sstream>

#include "folcalc/errors.hpp"

namespace folcalc::foliated {

namespace {

// Re-expresses monomials under a change of 1-form basis old_r = sum_c m(r, c) new_c.
BigradedForm::Terms change_basis(const BigradedForm::Terms& terms, const TrigMatrix& m) {
  BigradedForm::Terms out;
  int dim = m.data.empty() ? 0 : m.data[0].dim();
  for (const auto& [mask, coeff] : terms) {
    // Expand the wedge product one factor at a time.
    std::map<Mask, TrigPoly> acc{{Mask{0}, coeff}};
    for (int r : mask_indices(mask)) {
      std::map<Mask, TrigPoly> next;
      for (const auto& [am, ac] : acc)
        for (int c = 0; c < m.cols; ++c) {
          const TrigPoly& e = m(r, c);
          if (e.is_zero()) continue;
          int s = wedge_sign(am, bit(c));
          if (s == 0) continue;
          TrigPoly t = ac * e;
          if (s < 0) t = -t;
          auto [it, ins] = next.try_emplace(am | bit(c), TrigPoly(dim));
          it->second += t;
        }
      acc = std::move(next);
    }
    for (auto& [am, ac] : acc) {
      if (ac.is_zero()) continue;
      auto [it, ins] = out.try_emplace(am, TrigPoly(dim));
      it->second += ac;
      if (it->second.is_zero()) out.erase(it);
    }
  }
  return out;
}

void accumulate(BigradedForm::Terms& terms, Mask m, const TrigPoly& c, int sign, int dim) {
  if (c.is_zero() || sign == 0) return;
  auto [it, ins] = terms.try_emplace(m, TrigPoly(dim));
  if (sign > 0) it->second += c;
  else it->second -= c;
  if (it->second.is_zero()) terms.erase(it);
}

// d of the basis monomial e^I.
std::map<Mask, TrigPoly> d_monomial(const FramedTorus& base, Mask mask) {
  std::map<Mask, TrigPoly> out;
  std::vector<int> idx = mask_indices(mask);
  for (std::size_t p = 0; p < idx.size(); ++p) {
    Mask before = 0, after = 0;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      if (j < p) before |= bit(idx[j]);
      if (j > p) after |= bit(idx[j]);
    }
    for (const auto& [b, s] : base.d_coframe(idx[p])) {
      int sign = wedge_sign(before, b);
      if (sign == 0) continue;
      sign *= wedge_sign(before | b, after);
      if (sign == 0) continue;
      if (p % 2) sign = -sign;
      accumulate(out, before | b | after, s, sign, base.n());
    }
  }
  return out;
}

}  // namespace

std::map<Mask, TrigPoly> d_basis_monomial(const FramedTorus& base, Mask mask) { return d_monomial(base, mask); }

BigradedForm::BigradedForm(BasePtr base) : base_(std::move(base)) {
  require(base_ != nullptr, ErrorKind::InvalidArgument, "form without a base torus");
}

BigradedForm BigradedForm::function(BasePtr base, const TrigPoly& f) {
  BigradedForm out(std::move(base));
  out.add_term(0, f);
  return out;
}

BigradedForm BigradedForm::monomial(BasePtr base, Mask m, const TrigPoly& c) {
  BigradedForm out(std::move(base));
  out.add_term(m, c);
  return out;
}

BigradedForm BigradedForm::from_coordinates(BasePtr base, const Terms& coordinate_terms) {
  BigradedForm out(base);
  for (const auto& [m, c] : coordinate_terms)
    require(c.dim() == base->n() && (m & ~base->all_mask()) == 0, ErrorKind::DimensionMismatch,
            "coordinate form does not live on the base torus");
  out.terms_ = change_basis(coordinate_terms, base->frame_matrix());
  return out;
}

TrigPoly BigradedForm::coeff(Mask m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? TrigPoly(base_->n()) : it->second;
}

void BigradedForm::add_term(Mask m, const TrigPoly& c) {
  require((m & ~base_->all_mask()) == 0, ErrorKind::InvalidArgument, "monomial index beyond the torus dimension");
  require(c.dim() == base_->n(), ErrorKind::DimensionMismatch, "coefficient lives on another torus");
  accumulate(terms_, m, c, 1, base_->n());
}

std::pair<int, int> BigradedForm::bidegree(Mask m) const {
  return {popcount(m & base_->transverse_mask()), popcount(m & base_->leaf_mask())};
}

BigradedForm BigradedForm::block(int u, int v) const {
  BigradedForm out(base_);
  for (const auto& [m, c] : terms_)
    if (bidegree(m) == std::make_pair(u, v)) out.terms_.emplace(m, c);
  return out;
}

TrigPoly BigradedForm::block_value(Mask transverse, Mask leaf) const {
  require((transverse & ~base_->transverse_mask()) == 0 && (leaf & ~base_->leaf_mask()) == 0,
          ErrorKind::InvalidArgument, "block key mixes leaf and transverse indices");
  TrigPoly c = coeff(transverse | leaf);
  if ((popcount(transverse) * popcount(leaf)) % 2) c = -c;
  return c;
}

bool BigradedForm::is_foliated() const {
  for (const auto& [m, c] : terms_)
    if (m & base_->transverse_mask()) return false;
  return true;
}

bool BigradedForm::is_transverse() const {
  for (const auto& [m, c] : terms_)
    if (m & base_->leaf_mask()) return false;
  return true;
}

int BigradedForm::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) {
    if (d == -1) d = popcount(m);
    else if (d != popcount(m)) return -1;
  }
  return d;
}

int BigradedForm::max_freq() const {
  int f = 0;
  for (const auto& [m, c] : terms_) f = std::max(f, c.max_abs_freq());
  return f;
}

BigradedForm::Terms BigradedForm::to_coordinates() const {
  return change_basis(terms_, base_->coframe_matrix());
}

double BigradedForm::evaluate_coeff(Mask m, std::span<const double> theta) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second.evaluate(theta);
}

BigradedForm& BigradedForm::operator+=(const BigradedForm& o) {
  require(base_ == o.base_, ErrorKind::DimensionMismatch, "adding forms over different frames");
  for (const auto& [m, c] : o.terms_) accumulate(terms_, m, c, 1, base_->n());
  return *this;
}

BigradedForm& BigradedForm::operator-=(const BigradedForm& o) {
  require(base_ == o.base_, ErrorKind::DimensionMismatch, "subtracting forms over different frames");
  for (const auto& [m, c] : o.terms_) accumulate(terms_, m, c, -1, base_->n());
  return *this;
}

BigradedForm& BigradedForm::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

BigradedForm& BigradedForm::operator*=(const TrigPoly& f) {
  Terms out;
  for (const auto& [m, v] : terms_) accumulate(out, m, v * f, 1, base_->n());
  terms_ = std::move(out);
  return *this;
}

BigradedForm BigradedForm::operator-() const {
  BigradedForm r = *this;
  for (auto& [m, v] : r.terms_) v = -v;
  return r;
}

std::string BigradedForm::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ")";
    for (int i : mask_indices(m)) os << " e" << i;
  }
  return os.str();
}

BigradedForm wedge(const BigradedForm& a, const BigradedForm& b) {
  require(a.base() == b.base(), ErrorKind::DimensionMismatch, "wedge of forms over different frames");
  BigradedForm out(a.base());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      TrigPoly t = ca * cb;
      out.add_term(ma | mb, s > 0 ? t : -t);
    }
  return out;
}

BigradedForm interior(int a, const BigradedForm& form) {
  BigradedForm out(form.base());
  for (const auto& [m, c] : form.terms()) {
    if (!has_bit(m, a)) continue;
    out.add_term(m & ~bit(a), rank_below(m, a) % 2 ? -c : c);
  }
  return out;
}

namespace {

template <class Sink>
void d_term(const FramedTorus& base, Mask m, const TrigPoly& f, Sink&& sink) {
  for (int a = 0; a < base.n(); ++a) {
    if (has_bit(m, a)) continue;
    TrigPoly ea = base.apply_field(a, f);
    if (ea.is_zero()) continue;
    sink(bit(a) | m, wedge_sign(bit(a), m) > 0 ? ea : -ea);
  }
  for (const auto& [dm, dc] : d_monomial(base, m)) sink(dm, f * dc);
}

}  // namespace

BigradedForm exterior_d(const BigradedForm& form) {
  BigradedForm out(form.base());
  for (const auto& [m, f] : form.terms())
    d_term(*form.base(), m, f, [&](Mask om, const TrigPoly& c) { out.add_term(om, c); });
  return out;
}

DComponents d_components(const BigradedForm& form) {
  DComponents out{BigradedForm(form.base()), BigradedForm(form.base()), BigradedForm(form.base())};
  for (const auto& [m, f] : form.terms()) {
    int u = form.bidegree(m).first;
    d_term(*form.base(), m, f, [&](Mask om, const TrigPoly& c) {
      int du = form.bidegree(om).first - u;
      switch (du) {
        case 0: out.d01.add_term(om, c); break;
        case 1: out.d10.add_term(om, c); break;
        case 2: out.d2m1.add_term(om, c); break;
        default: fail(ErrorKind::NotInvolutive, "differential produced bidegree shift outside {0,1,2}");
      }
    });
  }
  return out;
}

BigradedForm leaf_restriction(const BigradedForm& form) {
  BigradedForm out(form.base());
  for (const auto& [m, c] : form.terms())
    if ((m & form.base()->transverse_mask()) == 0) out.add_term(m, c);
  return out;
}

BigradedForm d_F(const BigradedForm& form) {
  require(form.is_foliated(), ErrorKind::InvalidArgument, "d_F expects a foliated form");
  return leaf_restriction(d_components(form).d01);
}

}  // namespace folcalc::foliated
