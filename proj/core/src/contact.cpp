#include "folcalc/contact.hpp"

#include <cmath>
#include <limits>

#include "folcalc/errors.hpp"
#include "folcalc/total_space.hpp"

namespace folcalc::contact {

namespace {

double min_abs_on_grid(const trig::TrigPoly& f, const GridSpec& grid, std::vector<double>* witness = nullptr) {
  trig::CompiledTrig c(f);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto th = grid.point(i);
    double v = std::abs(c(th));
    if (v < best) {
      best = v;
      if (witness) *witness = th;
    }
  }
  return best;
}

std::string point_string(const std::vector<double>& th) {
  std::string s = "(";
  for (std::size_t i = 0; i < th.size(); ++i) s += (i ? ", " : "") + std::to_string(th[i]);
  return s + ")";
}

void check_inputs(const Presymplectic& p, const std::vector<BigradedForm>& alphas, const GridSpec& grid) {
  require(!alphas.empty(), ErrorKind::InvalidArgument, "need at least one one-form");
  require(static_cast<int>(grid.points.size()) == p.base()->n(), ErrorKind::DimensionMismatch,
          "grid needs one size per axis");
  for (const auto& a : alphas) {
    require(a.base() == p.base(), ErrorKind::DimensionMismatch, "one-form lives on another base");
    for (const auto& [m, c] : a.terms())
      require(popcount(m) == 1, ErrorKind::InvalidArgument, "expected one-forms");
  }
}

BigradedForm wedge_all(const Presymplectic& p, const std::vector<BigradedForm>& alphas) {
  BigradedForm g = BigradedForm::function(p.base(), trig::TrigPoly::constant(p.base()->n(), 1));
  for (const auto& a : alphas) g = foliated::wedge(g, a);
  return g;
}

}  // namespace

ContactReport contact_model_check(const Presymplectic& p, const std::vector<BigradedForm>& alphas,
                                  const std::vector<Rational>& h, const GridSpec& grid) {
  check_inputs(p, alphas, grid);
  const auto& base = p.base();
  const int n = base->n();
  const int q = static_cast<int>(alphas.size());
  require(static_cast<int>(h.size()) == q, ErrorKind::DimensionMismatch, "h needs one entry per one-form");
  require((n - q) % 2 == 0 && q <= n, ErrorKind::InvalidArgument, "dimension count incompatible with q-contact data");
  for (std::size_t i = 0; i < alphas.size(); ++i)
    require(foliated::exterior_d(alphas[i]) == p.omega(), ErrorKind::InvalidArgument,
            "d alpha_" + std::to_string(i) + " differs from omega_C");

  BigradedForm volume = foliated::wedge(wedge_all(p, alphas), gotay::wedge_power(p.omega(), (n - q) / 2));
  std::vector<double> witness;
  ContactReport out{Rational(1), false, false, 0, BigradedForm(base)};
  out.volume_margin = min_abs_on_grid(volume.coeff(range_mask(0, n)), grid, &witness);
  require(out.volume_margin > 1e-9, ErrorKind::InvalidArgument,
          "alpha_1 ^ ... ^ alpha_q ^ omega^m vanishes near " + point_string(witness));

  total::TotalSpace space{base, q};
  total::TotalForm omega = total::TotalForm::pullback(space, p.omega());
  for (int i = 0; i < q; ++i) {
    total::TotalForm ya(space);
    for (const auto& [m, c] : alphas[static_cast<std::size_t>(i)].terms())
      ya.add_term(m, poly::PolyTrig::coordinate(n, q, i) * c);
    omega += total::total_d(ya);
  }
  out.slice = total::slice(omega, h);
  out.factor = 1;
  for (const auto& v : h) out.factor += v;
  out.degenerate = out.factor == 0;
  out.matches = out.slice == p.omega() * out.factor;
  return out;
}

RummlerReport rummler_check(const Presymplectic& p, const std::vector<BigradedForm>& alphas, const GridSpec& grid) {
  check_inputs(p, alphas, grid);
  const auto& base = p.base();
  const int q = static_cast<int>(alphas.size());
  require(q == base->k(), ErrorKind::InvalidArgument, "need as many one-forms as the leaf rank");
  BigradedForm gamma = wedge_all(p, alphas);
  RummlerReport out;
  std::vector<double> witness;
  out.leaf_margin = min_abs_on_grid(gamma.coeff(base->leaf_mask()), grid, &witness);
  if (!(out.leaf_margin > 1e-9)) {
    out.failed_block = std::make_pair(0, q);
    out.detail = "gamma vanishes on leaves near " + point_string(witness);
    return out;
  }
  BigradedForm dg = foliated::exterior_d(gamma);
  for (auto [u, v] : {std::pair{0, q + 1}, std::pair{1, q}}) {
    BigradedForm b = dg.block(u, v);
    if (!b.is_zero()) {
      out.failed_block = std::make_pair(u, v);
      out.detail = "block (" + std::to_string(u) + ", " + std::to_string(v) + ") of dgamma is " + b.to_string();
      return out;
    }
  }
  out.ok = true;
  return out;
}

}  // namespace folcalc::contact
