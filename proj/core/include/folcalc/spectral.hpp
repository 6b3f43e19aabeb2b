#pragma once

#include <vector>

#include "folcalc/trig_poly.hpp"

namespace folcalc::spectral {

// Samples on a uniform periodic grid with `dims[a]` points along axis a,
// axis 0 varying fastest (the GridSpec ordering).
struct GridData {
  std::vector<int> dims;
  std::vector<double> values;
};

// Spectral derivative along `axis`; the Nyquist mode is discarded.
std::vector<double> derivative(const GridData& f, int axis);

struct TrigFit {
  trig::TrigPoly poly;
  double residual = 0;  // max |fit - data| on the grid
};
// Trig polynomial interpolating the samples, coefficients rounded to exact
// binary rationals and |c| < drop_tol discarded. Nyquist modes are dropped.
TrigFit fit(const GridData& f, double drop_tol = 1e-13);

}  // namespace folcalc::spectral
