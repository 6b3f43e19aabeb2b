#pragma once

#include <optional>
#include <string>
#include <vector>

#include "folcalc/foliated.hpp"
#include "folcalc/gotay.hpp"

namespace folcalc::contact {

using foliated::BigradedForm;
using foliated::Presymplectic;
using gotay::GridSpec;

struct ContactReport {
  Rational factor;          // 1 + sum h_i
  bool degenerate = false;  // factor == 0
  bool matches = false;     // slice == factor * omega_C, exactly
  double volume_margin = 0; // min over the grid of |alpha_1 ^ ... ^ alpha_q ^ omega^m|
  BigradedForm slice;
};

// Slice of p*omega_C + sum_i d(y_i p*alpha_i) at y = h, compared with
// (1 + sum h_i) omega_C. Requires d alpha_i = omega_C and a nowhere-vanishing
// volume alpha_1 ^ ... ^ alpha_q ^ omega_C^m on the grid.
ContactReport contact_model_check(const Presymplectic& p, const std::vector<BigradedForm>& alphas,
                                  const std::vector<Rational>& h, const GridSpec& grid);

struct RummlerReport {
  bool ok = false;
  double leaf_margin = 0;  // min over the grid of the leafwise coefficient of gamma
  std::optional<std::pair<int, int>> failed_block;
  std::string detail;
};

// gamma = alpha_1 ^ ... ^ alpha_q must be nowhere zero on leaves and dgamma
// must have vanishing (0, q+1) and (1, q) blocks.
RummlerReport rummler_check(const Presymplectic& p, const std::vector<BigradedForm>& alphas, const GridSpec& grid);

}  // namespace folcalc::contact
