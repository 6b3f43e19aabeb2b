#include "folcalc/kuranishi.hpp"

#include "folcalc/errors.hpp"

namespace folcalc::kuranishi {

namespace {

void require_one_form(const BigradedForm& f, const char* what) {
  require(f.is_foliated(), ErrorKind::InvalidArgument, std::string(what) + " must be a foliated form");
  for (const auto& [m, c] : f.terms())
    require(popcount(m) == 1, ErrorKind::InvalidArgument, std::string(what) + " must be a one-form");
}

}  // namespace

BigradedForm lambda2(const Presymplectic& p, const BigradedForm& alpha, const BigradedForm& beta) {
  require_one_form(alpha, "alpha");
  require_one_form(beta, "beta");
  auto ta = foliated::tau(foliated::d_components(alpha).d10);
  auto tb = foliated::tau(foliated::d_components(beta).d10);
  return -foliated::pairing(p.flat_inverse(ta), tb);
}

BigradedForm lambda2_oracle(const gotay::GotayModel& model, const BigradedForm& alpha, const BigradedForm& beta) {
  require_one_form(alpha, "alpha");
  require_one_form(beta, "beta");
  constexpr int kOrder = 2;
  gotay::PiJet jet = gotay::pi_jet(model, kOrder);
  const auto& sp = model.space;
  total::Multivector pi(sp);
  for (int a = 0; a < sp.dim(); ++a)
    for (int b = a + 1; b < sp.dim(); ++b) pi.add_term(bit(a) | bit(b), jet.pi(a, b));
  total::Multivector x1 = gotay::vert_field_from_form(model, jet, alpha).at_zero();
  total::Multivector x2 = gotay::vert_field_from_form(model, jet, beta).at_zero();
  total::Multivector br = total::schouten_with_vector(total::schouten_with_vector(pi, x1, kOrder), x2, kOrder);
  total::Multivector vertical(sp);
  total::Multivector br0 = br.at_zero();
  for (const auto& [m, c] : br0.terms())
    if ((m & sp.base_mask()) == 0) vertical.add_term(m, c);
  return gotay::form_from_vert_field(model, vertical);
}

std::string status_name(Status s) {
  switch (s) {
    case Status::UnobstructedCertified: return "UnobstructedCertified";
    case Status::ObstructedCertified: return "ObstructedCertified";
    case Status::Inconclusive: return "Inconclusive";
  }
  return "?";
}

KuranishiVerdict kuranishi(const Presymplectic& p, const BigradedForm& beta, std::optional<linsolve::Box> box) {
  require_one_form(beta, "beta");
  require(foliated::d_F(beta).is_zero(), ErrorKind::NotLeafwiseClosed, "beta is not d_F-closed");
  KuranishiVerdict out{lambda2(p, beta, beta), Status::Inconclusive, cohom::InconclusiveOnBox{}, std::nullopt};

  if (!beta.is_zero()) {
    auto kernel = cohom::bott_star_exactness(foliated::d_nu_rep(beta), box);
    out.kernel_potential = kernel.potential;
  } else {
    out.kernel_potential = foliated::ValuedForm(p.base(), foliated::ValueBundle::GStar);
  }

  if (out.lambda2_value.is_zero())
    out.certificate = cohom::ExactWithPrimitive{BigradedForm(p.base())};
  else
    out.certificate = cohom::exactness_test(out.lambda2_value, box);

  if (out.kernel_potential)
    out.status = Status::UnobstructedCertified;
  else if (std::holds_alternative<cohom::NotExactCertified>(out.certificate))
    out.status = Status::ObstructedCertified;
  return out;
}

}  // namespace folcalc::kuranishi
