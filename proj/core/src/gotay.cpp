#include "folcalc/gotay.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "folcalc/errors.hpp"

namespace folcalc::gotay {

using poly::PolyTrig;

GotayModel build_gotay(const Presymplectic& p) {
  TotalSpace space{p.base(), p.base()->k()};
  TotalForm theta(space);
  for (int i = 0; i < space.fibers; ++i)
    theta.add_term(bit(i), PolyTrig::coordinate(space.n(), space.fibers, i));
  TotalForm omega = TotalForm::pullback(space, p.omega()) - total::total_d(theta);
  PolyMatrix m = total::form_matrix(omega);
  return GotayModel{p, space, omega, m};
}

std::vector<TrigPoly> section_of(const BigradedForm& beta) {
  const auto& base = beta.base();
  for (const auto& [m, c] : beta.terms())
    require(popcount(m) == 1 && (m & base->transverse_mask()) == 0, ErrorKind::InvalidArgument,
            "a section of T*F is a foliated 1-form");
  std::vector<TrigPoly> a;
  for (int i = 0; i < base->k(); ++i) a.push_back(beta.coeff(bit(i)));
  return a;
}

SectionPullback section_pullback(const GotayModel& model, const std::vector<TrigPoly>& section) {
  const auto& base = model.space.base;
  require(static_cast<int>(section.size()) == base->k(), ErrorKind::DimensionMismatch, "section needs k coefficients");
  BigradedForm j_alpha(base);
  for (int i = 0; i < base->k(); ++i) j_alpha.add_term(bit(i), section[static_cast<std::size_t>(i)]);
  SectionPullback out{model.presymplectic.omega() - foliated::exterior_d(j_alpha),
                      total::substitute_section(model.omega, section), false};
  out.agree = out.via_formula == out.via_substitution;
  return out;
}

GridSpec GridSpec::uniform(int dim, int pts) { return GridSpec{std::vector<int>(static_cast<std::size_t>(dim), pts)}; }

std::size_t GridSpec::size() const {
  std::size_t total = 1;
  for (int p : points) total *= static_cast<std::size_t>(p);
  return total;
}

std::vector<double> GridSpec::point(std::size_t idx) const {
  std::vector<double> theta(points.size());
  for (std::size_t a = 0; a < points.size(); ++a) {
    auto pts = static_cast<std::size_t>(points[a]);
    theta[a] = 2 * M_PI * static_cast<double>(idx % pts) / static_cast<double>(pts);
    idx /= pts;
  }
  return theta;
}

BigradedForm wedge_power(const BigradedForm& omega, int r) {
  BigradedForm out = BigradedForm::function(omega.base(), TrigPoly::constant(omega.base()->n(), 1));
  for (int i = 0; i < r; ++i) out = foliated::wedge(out, omega);
  return out;
}

namespace {

template <class F>
void for_each_grid_point(const GridSpec& grid, F&& f) {
  for (std::size_t idx = 0; idx < grid.size(); ++idx) f(grid.point(idx));
}

int numeric_rank(const BigradedForm& omega, const std::vector<std::pair<Mask, trig::CompiledTrig>>& comps,
                 std::span<const double> theta) {
  int n = omega.base()->n();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [mask, c] : comps) {
    auto idx = mask_indices(mask);
    double v = c(theta);
    m(idx[0], idx[1]) = v;
    m(idx[1], idx[0]) = -v;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  double tol = 1e-9 * std::max(1.0, svd.singularValues().size() ? svd.singularValues()(0) : 0.0);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++rank;
  return rank;
}

}  // namespace

CoisotropicVerdict coisotropic_check(const BigradedForm& omega, int ambient_half_dim, const GridSpec& grid,
                                     bool collect_rows, double margin_tol) {
  const int d = omega.base()->n();
  const int r = d - ambient_half_dim;
  require(r >= 0 && 2 * r <= d, ErrorKind::InvalidArgument, "ambient dimension incompatible with the base");
  require(static_cast<int>(grid.points.size()) == d, ErrorKind::DimensionMismatch, "grid needs one size per axis");
  for (const auto& [m, c] : omega.terms())
    require(popcount(m) == 2, ErrorKind::InvalidArgument, "coisotropic_check expects a 2-form");

  std::vector<std::pair<Mask, trig::CompiledTrig>> omega_comps;
  for (const auto& [m, c] : omega.terms()) omega_comps.emplace_back(m, trig::CompiledTrig(c));

  BigradedForm top = wedge_power(omega, r + 1);
  if (!top.is_zero()) {
    NotCoisotropic bad;
    bad.reason = "omega^" + std::to_string(r + 1) + " does not vanish";
    bad.value = -1;
    for (const auto& [m, c] : top.terms()) {
      trig::CompiledTrig cc(c);
      for_each_grid_point(grid, [&](const std::vector<double>& th) {
        double v = std::abs(cc(th));
        if (v > bad.value) {
          bad.value = v;
          bad.witness = th;
          bad.component = m;
        }
      });
    }
    return bad;
  }

  BigradedForm power = wedge_power(omega, r);
  Rational fact = 1;
  for (int i = 2; i <= r; ++i) fact *= i;
  power *= Rational(1) / fact;
  std::vector<trig::CompiledTrig> comps;
  for (const auto& [m, c] : power.terms()) comps.emplace_back(c);

  Coisotropic ok;
  ok.half_rank = r;
  ok.margin = std::numeric_limits<double>::infinity();
  std::vector<double> worst;
  std::vector<GridRow> rows;
  for_each_grid_point(grid, [&](const std::vector<double>& th) {
    double m = 0;
    for (const auto& c : comps) m = std::max(m, std::abs(c(th)));
    if (m < ok.margin) {
      ok.margin = m;
      worst = th;
    }
    if (collect_rows) rows.push_back(GridRow{th, m, numeric_rank(omega, omega_comps, th)});
  });
  if (ok.margin <= margin_tol) {
    NotCoisotropic bad;
    bad.reason = "omega^" + std::to_string(r) + " vanishes on the grid";
    bad.witness = worst;
    bad.value = ok.margin;
    bad.rows = std::move(rows);
    return bad;
  }
  ok.rows = std::move(rows);
  return ok;
}

PiJet pi_jet(const GotayModel& model, int order) {
  require(order >= 0 && order <= 4, ErrorKind::InvalidArgument, "jet order out of range");
  const TotalSpace& sp = model.space;
  const int dim = sp.dim();
  foliated::TrigMatrix m0(dim, dim, sp.n());
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m0(i, j) = model.matrix(i, j).at_zero();
  TrigPoly det = foliated::determinant(m0);
  require(det.is_constant() && !det.is_zero(), ErrorKind::Unsupported,
          "Omega_0 is not invertible over the trig-polynomial ring");
  foliated::TrigMatrix inv0 = foliated::ring_inverse(m0);
  PolyMatrix a(dim, sp.zero()), y(dim, sp.zero());
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      a(i, j) = sp.lift(inv0(i, j));
      y(i, j) = model.matrix(i, j) - sp.lift(model.matrix(i, j).at_zero());
    }
  // (M0 + Y)^{-1} = sum_p (-A Y)^p A
  PolyMatrix neg_ay = total::matmul(a, y, order);
  for (auto& e : neg_ay.data) e = -e;
  PolyMatrix term = a, sum = a;
  for (int p = 1; p <= order; ++p) {
    term = total::matmul(neg_ay, term, order);
    for (std::size_t i = 0; i < sum.data.size(); ++i) sum.data[i] += term.data[i];
  }
  for (auto& e : sum.data) e = -e;
  return PiJet{order, sum};
}

PolyMatrix pi_times_omega(const PiJet& jet, const GotayModel& model) {
  return total::matmul(jet.pi, model.matrix, jet.order);
}

namespace {

Multivector pi_sharp_basis(const GotayModel& model, const PiJet& jet, int a) {
  Multivector v(model.space);
  for (int b = 0; b < model.space.dim(); ++b) v.add_term(bit(b), jet.pi(a, b));
  return v;
}

}  // namespace

Multivector vert_field_from_form(const GotayModel& model, const PiJet& jet, const BigradedForm& beta) {
  require(beta.is_foliated(), ErrorKind::InvalidArgument, "vert_field_from_form expects a foliated form");
  const TotalSpace& sp = model.space;
  Multivector out(sp);
  for (const auto& [m, c] : beta.terms()) {
    Multivector acc(sp);
    acc.add_term(0, sp.lift(c));
    for (int a : mask_indices(m)) acc = total::wedge(acc, pi_sharp_basis(model, jet, a), jet.order);
    out += acc;
  }
  return out.truncated(jet.order);
}

BigradedForm form_from_vert_field(const GotayModel& model, const Multivector& v) {
  const TotalSpace& sp = model.space;
  const auto& base = sp.base;
  BigradedForm out(base);
  int k = -1;
  for (const auto& [m, c] : v.terms()) {
    require(k < 0 || k == popcount(m), ErrorKind::InvalidArgument, "form_from_vert_field expects a homogeneous multivector");
    k = popcount(m);
    BigradedForm acc = BigradedForm::function(base, c.at_zero());
    for (int a : mask_indices(m)) {
      BigradedForm flat(base);
      for (int b = 0; b < sp.n(); ++b) flat.add_term(bit(b), model.matrix(a, b).at_zero());
      acc = foliated::wedge(acc, flat);
    }
    out += foliated::leaf_restriction(acc);
  }
  if (k % 2 == 1) out = -out;
  return out;
}

}  // namespace folcalc::gotay
