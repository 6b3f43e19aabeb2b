#pragma once

#include <random>
#include <vector>

#include "folcalc/foliated.hpp"

namespace folcalc::random {

using foliated::BasePtr;
using foliated::BigradedForm;
using foliated::ValuedForm;
using trig::TrigPoly;

struct TrigShape {
  int max_freq = 2;
  int terms = 3;
  std::vector<int> axes;  // empty: all axes
};

Rational random_rational(std::mt19937_64& rng);
TrigPoly random_trig(std::mt19937_64& rng, int dim, const TrigShape& shape = {});
// Homogeneous form of bidegree (u, v) with up to `monomials` nonzero monomials.
BigradedForm random_form(std::mt19937_64& rng, const BasePtr& base, int u, int v, const TrigShape& shape = {},
                         int monomials = 2);
ValuedForm random_valued(std::mt19937_64& rng, const BasePtr& base, foliated::ValueBundle bundle, int v,
                         const TrigShape& shape = {});

}  // namespace folcalc::random
