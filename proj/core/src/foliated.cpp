#include "folcalc/foliated.hpp"

#include "folcalc/errors.hpp"

namespace folcalc::foliated {

ValuedForm::ValuedForm(BasePtr b, ValueBundle v) : base(std::move(b)), bundle(v) {
  require(base != nullptr, ErrorKind::InvalidArgument, "valued form without a base torus");
  components.assign(static_cast<std::size_t>(base->q()), BigradedForm(base));
}

bool ValuedForm::is_zero() const {
  for (const auto& c : components)
    if (!c.is_zero()) return false;
  return true;
}

int ValuedForm::degree() const {
  int d = -1;
  for (const auto& c : components) {
    if (c.is_zero()) continue;
    int cd = c.degree();
    if (cd < 0 || (d >= 0 && cd != d)) return -1;
    d = cd;
  }
  return d;
}

ValuedForm& ValuedForm::operator+=(const ValuedForm& o) {
  require(bundle == o.bundle && base == o.base, ErrorKind::DimensionMismatch, "adding sections of different bundles");
  for (std::size_t t = 0; t < components.size(); ++t) components[t] += o.components[t];
  return *this;
}

ValuedForm& ValuedForm::operator-=(const ValuedForm& o) {
  require(bundle == o.bundle && base == o.base, ErrorKind::DimensionMismatch, "subtracting sections of different bundles");
  for (std::size_t t = 0; t < components.size(); ++t) components[t] -= o.components[t];
  return *this;
}

ValuedForm& ValuedForm::operator*=(const Rational& c) {
  for (auto& comp : components) comp *= c;
  return *this;
}

ValuedForm ValuedForm::operator-() const {
  ValuedForm r = *this;
  for (auto& comp : r.components) comp = -comp;
  return r;
}

ValuedForm tau(const BigradedForm& eta) {
  const auto& base = eta.base();
  for (const auto& [m, c] : eta.terms())
    require(eta.bidegree(m).first == 1, ErrorKind::InvalidArgument, "tau expects a form of bidegree (1, v)");
  ValuedForm out(base, ValueBundle::GStar);
  for (int t = 0; t < base->q(); ++t)
    out.components[static_cast<std::size_t>(t)] = interior(base->transverse_index(t), eta);
  return out;
}

BigradedForm tau_inv(const ValuedForm& xi) {
  require(xi.bundle == ValueBundle::GStar, ErrorKind::InvalidArgument, "tau_inv expects a G*-valued form");
  BigradedForm out(xi.base);
  for (int t = 0; t < xi.base->q(); ++t) {
    const auto& comp = xi.components[static_cast<std::size_t>(t)];
    require(comp.is_foliated(), ErrorKind::InvalidArgument, "tau_inv expects foliated components");
    BigradedForm et = BigradedForm::monomial(xi.base, bit(xi.base->transverse_index(t)), TrigPoly::constant(xi.base->n(), 1));
    out += wedge(et, comp);
  }
  return out;
}

namespace {

// Connection 1-form term sum_a c^{k+r}_{a,k+s} e^a, the V_a-derivative of Y_s along Y_r.
BigradedForm connection_form(const FramedTorus& base, const BasePtr& ptr, int r, int s) {
  BigradedForm out(ptr);
  for (int a = 0; a < base.k(); ++a) {
    const TrigPoly& c = base.structure(base.transverse_index(r), a, base.transverse_index(s));
    if (!c.is_zero()) out.add_term(bit(a), c);
  }
  return out;
}

}  // namespace

ValuedForm bott_d(const ValuedForm& eta) {
  require(eta.bundle == ValueBundle::G, ErrorKind::InvalidArgument, "bott_d expects a G-valued form");
  const auto& base = *eta.base;
  ValuedForm out(eta.base, ValueBundle::G);
  for (int r = 0; r < base.q(); ++r) {
    auto& acc = out.components[static_cast<std::size_t>(r)];
    acc = d_F(eta.components[static_cast<std::size_t>(r)]);
    for (int s = 0; s < base.q(); ++s) {
      const auto& es = eta.components[static_cast<std::size_t>(s)];
      if (es.is_zero()) continue;
      // d(eta_s Y_s) = d eta_s Y_s + (-1)^p eta_s ^ nabla Y_s, sign folded per monomial degree.
      BigradedForm conn = connection_form(base, eta.base, r, s);
      for (const auto& [m, c] : es.terms()) {
        BigradedForm piece = wedge(BigradedForm::monomial(eta.base, m, c), conn);
        if (popcount(m) % 2) acc -= piece;
        else acc += piece;
      }
    }
  }
  return out;
}

ValuedForm bott_d_star(const ValuedForm& xi) {
  require(xi.bundle == ValueBundle::GStar, ErrorKind::InvalidArgument, "bott_d_star expects a G*-valued form");
  const auto& base = *xi.base;
  ValuedForm out(xi.base, ValueBundle::GStar);
  for (int s = 0; s < base.q(); ++s) {
    auto& acc = out.components[static_cast<std::size_t>(s)];
    acc = d_F(xi.components[static_cast<std::size_t>(s)]);
    for (int r = 0; r < base.q(); ++r) {
      const auto& xr = xi.components[static_cast<std::size_t>(r)];
      if (xr.is_zero()) continue;
      // The dual connection carries the opposite sign.
      BigradedForm conn = connection_form(base, xi.base, r, s);
      for (const auto& [m, c] : xr.terms()) {
        BigradedForm piece = wedge(BigradedForm::monomial(xi.base, m, c), conn);
        if (popcount(m) % 2) acc += piece;
        else acc -= piece;
      }
    }
  }
  return out;
}

BigradedForm pairing(const ValuedForm& eta_g, const ValuedForm& xi_gstar) {
  require(eta_g.bundle == ValueBundle::G && xi_gstar.bundle == ValueBundle::GStar, ErrorKind::InvalidArgument,
          "pairing expects (G-valued, G*-valued)");
  require(eta_g.base == xi_gstar.base, ErrorKind::DimensionMismatch, "pairing over different frames");
  BigradedForm out(eta_g.base);
  for (std::size_t t = 0; t < eta_g.components.size(); ++t)
    out += wedge(eta_g.components[t], xi_gstar.components[t]);
  return out;
}

Presymplectic::Presymplectic(BasePtr base, BigradedForm omega) : base_(std::move(base)), omega_(std::move(omega)) {
  require(omega_.base() == base_, ErrorKind::DimensionMismatch, "presymplectic form over another frame");
  for (const auto& [m, c] : omega_.terms())
    require(omega_.bidegree(m) == std::make_pair(2, 0), ErrorKind::NotPresymplectic,
            "omega must have bidegree (2, 0); offending monomial mask " + std::to_string(m));
  require(exterior_d(omega_).is_zero(), ErrorKind::NotPresymplectic, "omega is not closed");
  int q = base_->q();
  b_ = TrigMatrix(q, q, base_->n());
  for (int s = 0; s < q; ++s)
    for (int t = s + 1; t < q; ++t) {
      TrigPoly c = omega_.coeff(bit(base_->transverse_index(s)) | bit(base_->transverse_index(t)));
      b_(s, t) = c;
      b_(t, s) = -c;
    }
  TrigPoly det = determinant(b_);
  require(det.is_constant() && !det.is_zero(), ErrorKind::NotPresymplectic,
          "omega restricted to G has non-constant or vanishing determinant " + det.to_string());
  b_inv_ = ring_inverse(b_);
}

ValuedForm Presymplectic::flat(const ValuedForm& eta_g) const {
  require(eta_g.bundle == ValueBundle::G, ErrorKind::InvalidArgument, "flat expects a G-valued form");
  ValuedForm out(base_, ValueBundle::GStar);
  int q = base_->q();
  for (int r = 0; r < q; ++r)
    for (int s = 0; s < q; ++s)
      if (!b_(s, r).is_zero()) out.components[static_cast<std::size_t>(r)] += b_(s, r) * eta_g.components[static_cast<std::size_t>(s)];
  return out;
}

ValuedForm Presymplectic::flat_inverse(const ValuedForm& xi_gstar) const {
  require(xi_gstar.bundle == ValueBundle::GStar, ErrorKind::InvalidArgument, "flat_inverse expects a G*-valued form");
  ValuedForm out(base_, ValueBundle::G);
  int q = base_->q();
  for (int s = 0; s < q; ++s)
    for (int r = 0; r < q; ++r)
      if (!b_inv_(r, s).is_zero())
        out.components[static_cast<std::size_t>(s)] += b_inv_(r, s) * xi_gstar.components[static_cast<std::size_t>(r)];
  return out;
}

ValuedForm d_nu_rep(const BigradedForm& alpha) {
  require(alpha.is_foliated(), ErrorKind::InvalidArgument, "d_nu_rep expects a foliated form");
  require(alpha.is_zero() || alpha.degree() >= 0, ErrorKind::InvalidArgument, "d_nu_rep expects a homogeneous form");
  auto dc = d_components(alpha);
  require(dc.d01.is_zero(), ErrorKind::NotLeafwiseClosed, "d_F alpha = " + dc.d01.to_string());
  ValuedForm out = tau(dc.d10);
  int v = alpha.degree();
  if (v % 2) out = -out;
  return out;
}

ValuedForm phi_map(const Presymplectic& p, const BigradedForm& alpha) {
  require(alpha.is_foliated(), ErrorKind::InvalidArgument, "phi_map expects a foliated form");
  require(alpha.base() == p.base(), ErrorKind::DimensionMismatch, "phi_map over another frame");
  int v = alpha.degree();
  require(v >= 0 || alpha.is_zero(), ErrorKind::InvalidArgument, "phi_map expects a homogeneous form");
  ValuedForm out = p.flat_inverse(tau(d_components(alpha).d10));
  if ((v + 1) % 2) out = -out;
  return out;
}

ValuedForm covariant_derivative(const std::vector<TrigPoly>& x, const ValuedForm& section) {
  const auto& base = *section.base;
  require(static_cast<int>(x.size()) == base.k(), ErrorKind::DimensionMismatch, "leafwise field needs k components");
  ValuedForm d = section.bundle == ValueBundle::G ? bott_d(section) : bott_d_star(section);
  ValuedForm out(section.base, section.bundle);
  for (std::size_t t = 0; t < d.components.size(); ++t)
    for (int a = 0; a < base.k(); ++a) {
      if (x[static_cast<std::size_t>(a)].is_zero()) continue;
      out.components[t] += x[static_cast<std::size_t>(a)] * interior(a, d.components[t]);
    }
  return out;
}

}  // namespace folcalc::foliated
