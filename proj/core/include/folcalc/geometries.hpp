#pragma once

#include <string>
#include <vector>

#include "folcalc/foliated.hpp"

namespace folcalc::geometries {

using foliated::Presymplectic;

// T^3, TF spanned by d1 + cos(theta2) d3, G by d2, d3;
// omega = dtheta2 ^ (dtheta3 - cos(theta2) dtheta1).
Presymplectic t3_example();
// T^3, TF = d1, G spanned by d2 and d3 + sin(theta2) d1 (not involutive).
Presymplectic t3_noninvolutive();
// T^4 with omega = dtheta1 ^ dtheta2 and TF spanned by d3, d4.
Presymplectic zambon_t4();
// Same form, complement Y1 = d1 + sin(theta2) d3 (not involutive).
Presymplectic zambon_t4_twisted();
// T^n with the foliation by a single leaf and omega = 0.
Presymplectic lagrangian_torus(int n);
// T^3 = unit cosphere bundle of T^2: alpha = cos(theta3) dtheta1 + sin(theta3) dtheta2,
// omega = d alpha, TF spanned by the Reeb field.
Presymplectic contact_t3();

std::vector<std::string> names();
Presymplectic by_name(const std::string& name);

}  // namespace folcalc::geometries
