#include "folcalc/random_forms.hpp"

namespace folcalc::random {

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  int p = num(rng);
  if (p == 0) p = 1;
  Rational q(p, den(rng));
  q.canonicalize();
  return q;
}

TrigPoly random_trig(std::mt19937_64& rng, int dim, const TrigShape& shape) {
  std::vector<int> axes = shape.axes;
  if (axes.empty())
    for (int i = 0; i < dim; ++i) axes.push_back(i);
  std::uniform_int_distribution<int> freq(-shape.max_freq, shape.max_freq);
  std::uniform_int_distribution<int> kind(0, 1);
  TrigPoly p(dim);
  for (int t = 0; t < shape.terms; ++t) {
    trig::Mode k{};
    for (int a : axes) k[a] = freq(rng);
    Rational amp = random_rational(rng);
    if (kind(rng) == 0 || trig::is_zero_mode(k)) p += TrigPoly::cos_mode(dim, k, amp);
    else p += TrigPoly::sin_mode(dim, k, amp);
  }
  return p;
}

BigradedForm random_form(std::mt19937_64& rng, const BasePtr& base, int u, int v, const TrigShape& shape,
                         int monomials) {
  auto tr = subsets_of_size(base->transverse_mask(), u);
  auto lf = subsets_of_size(base->leaf_mask(), v);
  BigradedForm out(base);
  if (tr.empty() || lf.empty()) return out;
  std::uniform_int_distribution<std::size_t> pick_t(0, tr.size() - 1), pick_l(0, lf.size() - 1);
  for (int i = 0; i < monomials; ++i) out.add_term(tr[pick_t(rng)] | lf[pick_l(rng)], random_trig(rng, base->n(), shape));
  return out;
}

ValuedForm random_valued(std::mt19937_64& rng, const BasePtr& base, foliated::ValueBundle bundle, int v,
                         const TrigShape& shape) {
  ValuedForm out(base, bundle);
  for (auto& c : out.components) c = random_form(rng, base, 0, v, shape, 1);
  return out;
}

}  // namespace folcalc::random
