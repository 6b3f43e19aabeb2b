#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "folcalc/foliated.hpp"
#include "folcalc/linear_solve.hpp"

namespace folcalc::cohom {

using foliated::BigradedForm;
using foliated::ValuedForm;
using linsolve::Box;
using trig::TrigPoly;

struct ExactWithPrimitive {
  BigradedForm primitive;
};
struct NotExactCertified {
  Mask component;          // leaf monomial whose average is nonzero
  std::vector<int> axes;   // averaged torus axes
  TrigPoly certificate;    // the nonzero average
};
struct InconclusiveOnBox {
  Box box;
  std::size_t unknowns = 0;
};
using ExactnessVerdict = std::variant<ExactWithPrimitive, NotExactCertified, InconclusiveOnBox>;

// Default search box: max |k_i| <= 2 * maxfreq + 4.
Box default_box(int dim, int max_freq);

// Decides whether a d_F-closed foliated form of degree >= 1 is d_F-exact.
// Non-exactness is only reported with an averaging certificate.
ExactnessVerdict exactness_test(const BigradedForm& g, std::optional<Box> box = std::nullopt);

// d_F from foliated (v-1)-forms to v-forms as a slot operator.
linsolve::SlotOperator leafwise_operator(const foliated::BasePtr& base, int v);
// d_nabla* from G*-valued (p)-forms to (p+1)-forms as a slot operator.
linsolve::SlotOperator bott_star_operator(const foliated::BasePtr& base, int p);

// Averages of monomial components that vanish on d_F of every (v-1)-form.
struct ComponentAverage {
  Mask component;
  std::vector<int> axes;
};
std::vector<ComponentAverage> leafwise_certificates(const foliated::BasePtr& base, int v);
TrigPoly apply_average(const ComponentAverage& f, const BigradedForm& g);

struct BottExactness {
  std::optional<ValuedForm> potential;  // d_nabla* potential = rhs
  std::optional<linsolve::AveragingFunctional> certificate;
  TrigPoly certificate_value;
};
BottExactness bott_star_exactness(const ValuedForm& rhs, std::optional<Box> box = std::nullopt);

// Kernel of d_nu on the classes g(theta2) e^0 for the T^3 example geometry.
struct InKernel {
  TrigPoly l;  // g' = l * sin(theta_axis)
};
struct NotInKernel {
  TrigPoly derivative;
};
using KernelVerdict = std::variant<InKernel, NotInKernel>;
KernelVerdict dnu_kernel_test(const TrigPoly& g, int axis = 1);

// Rank of the span of the given functions.
std::size_t class_independence(const std::vector<TrigPoly>& gs);

// First cohomology dimension of the suspension foliation: #{mu_j = 1} + 1.
std::size_t suspension_h1(const std::vector<double>& mu, bool dense, double tol = 1e-9);

}  // namespace folcalc::cohom
