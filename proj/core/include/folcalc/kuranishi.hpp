#pragma once

#include <optional>
#include <string>

#include "folcalc/cohomology.hpp"
#include "folcalc/gotay.hpp"

namespace folcalc::kuranishi {

using foliated::BigradedForm;
using foliated::Presymplectic;

// Binary bracket on foliated one-forms:
// lambda2(a, b) = -<< flat^{-1} tau(d10 a), tau(d10 b) >>.
BigradedForm lambda2(const Presymplectic& p, const BigradedForm& alpha, const BigradedForm& beta);

// Same bracket through the Poisson structure of the normal form:
// P([[Pi, xi1], xi2]) restricted to the zero section, xi_i the vertical
// fiberwise-constant fields attached to the arguments.
BigradedForm lambda2_oracle(const gotay::GotayModel& model, const BigradedForm& alpha, const BigradedForm& beta);

enum class Status { UnobstructedCertified, ObstructedCertified, Inconclusive };
std::string status_name(Status s);

struct KuranishiVerdict {
  BigradedForm lambda2_value;
  Status status = Status::Inconclusive;
  cohom::ExactnessVerdict certificate;
  // Potential s with d_nabla* s = d_nu(beta) when kernel membership was certified.
  std::optional<foliated::ValuedForm> kernel_potential;
};

KuranishiVerdict kuranishi(const Presymplectic& p, const BigradedForm& beta,
                           std::optional<linsolve::Box> box = std::nullopt);

}  // namespace folcalc::kuranishi
