#include "folcalc/cohomology.hpp"

#include <cmath>

#include "folcalc/errors.hpp"

namespace folcalc::cohom {

using foliated::BasePtr;
using foliated::ValueBundle;

Box default_box(int dim, int max_freq) { return Box::uniform(dim, 2 * max_freq + 4); }

namespace {

std::vector<Mask> leaf_subsets(const BasePtr& base, int v) { return subsets_of_size(base->leaf_mask(), v); }

}  // namespace

linsolve::SlotOperator leafwise_operator(const BasePtr& base, int v) {
  require(v >= 1 && v <= base->k(), ErrorKind::InvalidArgument, "leafwise degree out of range");
  auto in = leaf_subsets(base, v - 1);
  auto out = leaf_subsets(base, v);
  linsolve::SlotOperator op;
  op.dim = base->n();
  op.in_slots = static_cast<int>(in.size());
  op.out_slots = static_cast<int>(out.size());
  op.shifts = base->coefficient_support();
  op.apply = [base, in, out](int slot, const TrigPoly& f) {
    BigradedForm h = BigradedForm::monomial(base, in[static_cast<std::size_t>(slot)], f);
    BigradedForm dh = foliated::d_F(h);
    std::vector<TrigPoly> res;
    for (Mask m : out) res.push_back(dh.coeff(m));
    return res;
  };
  return op;
}

linsolve::SlotOperator bott_star_operator(const BasePtr& base, int p) {
  require(p >= 0 && p < base->k(), ErrorKind::InvalidArgument, "Bott degree out of range");
  auto in = leaf_subsets(base, p);
  auto out = leaf_subsets(base, p + 1);
  int q = base->q();
  linsolve::SlotOperator op;
  op.dim = base->n();
  op.in_slots = q * static_cast<int>(in.size());
  op.out_slots = q * static_cast<int>(out.size());
  op.shifts = base->coefficient_support();
  op.apply = [base, in, out, q](int slot, const TrigPoly& f) {
    int t = slot / static_cast<int>(in.size());
    int j = slot % static_cast<int>(in.size());
    ValuedForm xi(base, ValueBundle::GStar);
    xi.components[static_cast<std::size_t>(t)] = BigradedForm::monomial(base, in[static_cast<std::size_t>(j)], f);
    ValuedForm d = foliated::bott_d_star(xi);
    std::vector<TrigPoly> res;
    for (int s = 0; s < q; ++s)
      for (Mask m : out) res.push_back(d.components[static_cast<std::size_t>(s)].coeff(m));
    return res;
  };
  return op;
}

std::vector<ComponentAverage> leafwise_certificates(const BasePtr& base, int v) {
  auto out = leaf_subsets(base, v);
  std::vector<ComponentAverage> res;
  for (const auto& f : linsolve::annihilating_averages(leafwise_operator(base, v)))
    res.push_back(ComponentAverage{out[static_cast<std::size_t>(f.out_slot)], f.axes});
  return res;
}

TrigPoly apply_average(const ComponentAverage& f, const BigradedForm& g) {
  return trig::tp_average(g.coeff(f.component), f.axes);
}

ExactnessVerdict exactness_test(const BigradedForm& g, std::optional<Box> box) {
  const BasePtr& base = g.base();
  require(g.is_foliated(), ErrorKind::InvalidArgument, "exactness_test expects a foliated form");
  if (g.is_zero()) return ExactWithPrimitive{BigradedForm(base)};
  int v = g.degree();
  require(v >= 1, ErrorKind::InvalidArgument, "exactness_test expects a homogeneous form of degree >= 1");
  require(foliated::d_F(g).is_zero(), ErrorKind::NotLeafwiseClosed, "exactness_test input is not d_F-closed");
  Box b = box ? *box : default_box(base->n(), std::max(g.max_freq(), base->max_coefficient_freq()));

  auto op = leafwise_operator(base, v);
  auto out = leaf_subsets(base, v);
  auto in = leaf_subsets(base, v - 1);
  std::vector<TrigPoly> rhs;
  for (Mask m : out) rhs.push_back(g.coeff(m));
  auto sol = linsolve::truncated_solve(op, rhs, b);
  if (sol.solved) {
    BigradedForm h(base);
    for (std::size_t j = 0; j < in.size(); ++j) h.add_term(in[j], sol.solution[j]);
    require(foliated::d_F(h) == g, ErrorKind::InvalidArgument, "internal: primitive fails verification");
    return ExactWithPrimitive{h};
  }
  for (const auto& f : leafwise_certificates(base, v)) {
    TrigPoly avg = apply_average(f, g);
    if (!avg.is_zero()) return NotExactCertified{f.component, f.axes, avg};
  }
  return InconclusiveOnBox{b, sol.unknowns};
}

BottExactness bott_star_exactness(const ValuedForm& rhs, std::optional<Box> box) {
  require(rhs.bundle == ValueBundle::GStar, ErrorKind::InvalidArgument, "expects a G*-valued form");
  const BasePtr& base = rhs.base;
  BottExactness res;
  res.certificate_value = TrigPoly(base->n());
  if (rhs.is_zero()) {
    res.potential = ValuedForm(base, ValueBundle::GStar);
    return res;
  }
  int v = rhs.degree();
  require(v >= 1, ErrorKind::InvalidArgument, "bott_star_exactness expects a homogeneous form of degree >= 1");
  int maxf = base->max_coefficient_freq();
  for (const auto& c : rhs.components) maxf = std::max(maxf, c.max_freq());
  Box b = box ? *box : default_box(base->n(), maxf);
  auto op = bott_star_operator(base, v - 1);
  auto out = leaf_subsets(base, v);
  auto in = leaf_subsets(base, v - 1);
  std::vector<TrigPoly> r;
  for (const auto& comp : rhs.components)
    for (Mask m : out) r.push_back(comp.coeff(m));
  auto sol = linsolve::truncated_solve(op, r, b);
  if (sol.solved) {
    ValuedForm gamma(base, ValueBundle::GStar);
    for (int slot = 0; slot < op.in_slots; ++slot) {
      int t = slot / static_cast<int>(in.size());
      int j = slot % static_cast<int>(in.size());
      gamma.components[static_cast<std::size_t>(t)].add_term(in[static_cast<std::size_t>(j)], sol.solution[static_cast<std::size_t>(slot)]);
    }
    require(foliated::bott_d_star(gamma) == rhs, ErrorKind::InvalidArgument, "internal: potential fails verification");
    res.potential = gamma;
    return res;
  }
  for (const auto& f : linsolve::annihilating_averages(op)) {
    TrigPoly avg = trig::tp_average(r[static_cast<std::size_t>(f.out_slot)], f.axes);
    if (!avg.is_zero()) {
      res.certificate = f;
      res.certificate_value = avg;
      break;
    }
  }
  return res;
}

KernelVerdict dnu_kernel_test(const TrigPoly& g, int axis) {
  auto axes = g.active_axes();
  require(axes.empty() || (axes.size() == 1 && axes[0] == axis), ErrorKind::InvalidArgument,
          "dnu_kernel_test expects a function of the single transverse angle");
  TrigPoly dg = trig::tp_partial(g, axis);
  if (dg.is_zero()) return InKernel{TrigPoly(g.dim())};
  auto l = trig::tp_div_exact(dg, TrigPoly::sin_axis(g.dim(), axis));
  if (l) return InKernel{*l};
  return NotInKernel{dg};
}

std::size_t class_independence(const std::vector<TrigPoly>& gs) { return linsolve::rank_of(gs); }

std::size_t suspension_h1(const std::vector<double>& mu, bool dense, double tol) {
  require(dense, ErrorKind::Unsupported, "suspension_h1 needs the dense-leaf hypothesis");
  std::size_t ones = 0;
  for (double m : mu)
    if (std::abs(m - 1.0) <= tol) ++ones;
  return ones + 1;
}

}  // namespace folcalc::cohom
