#include <doctest.h>

#include <random>

#include "folcalc/errors.hpp"
#include "folcalc/geometries.hpp"
#include "folcalc/kuranishi.hpp"
#include "folcalc/random_forms.hpp"

using namespace folcalc;
using namespace folcalc::kuranishi;
using foliated::BasePtr;
using trig::TrigPoly;

namespace {

BigradedForm one_form(std::mt19937_64& rng, const BasePtr& base) {
  return random::random_form(rng, base, 0, 1, {2, 3, {}}, 2);
}

// sin(theta1) dtheta3 + cos(theta2) dtheta4 in the leaf coframe of the T^4 model.
BigradedForm obstructed_beta(const BasePtr& base) {
  return BigradedForm::monomial(base, bit(0), TrigPoly::sin_axis(4, 0)) +
         BigradedForm::monomial(base, bit(1), TrigPoly::cos_axis(4, 1));
}

BigradedForm cos_power_beta(const BasePtr& base, int n) {
  return BigradedForm::monomial(base, bit(0), trig::tp_pow(TrigPoly::cos_axis(3, 1), n));
}

}  // namespace

TEST_CASE("lambda2 on the T^4 model") {
  auto p = geometries::zambon_t4();
  auto base = p.base();
  BigradedForm beta = obstructed_beta(base);
  TrigPoly expected = TrigPoly::cos_axis(4, 0) * TrigPoly::sin_axis(4, 1) * Rational(-2);
  CHECK(lambda2(p, beta, beta) == BigradedForm::monomial(base, bit(0) | bit(1), expected));

  BigradedForm single = BigradedForm::monomial(base, bit(0), TrigPoly::sin_axis(4, 0));
  CHECK(lambda2(p, single, single).is_zero());
  BigradedForm constant = BigradedForm::monomial(base, bit(0), TrigPoly::constant(4, 3)) +
                          BigradedForm::monomial(base, bit(1), TrigPoly::constant(4, -1));
  CHECK(lambda2(p, constant, beta).is_zero());
}

TEST_CASE("lambda2 matches the derived-bracket route") {
  std::mt19937_64 rng(2024);
  struct Case {
    const char* name;
    int pairs;
  };
  for (Case c : {Case{"zambon-t4", 50}, Case{"t3-example", 20}, Case{"zambon-t4-twisted", 20}}) {
    CAPTURE(c.name);
    auto p = geometries::by_name(c.name);
    auto model = gotay::build_gotay(p);
    for (int i = 0; i < c.pairs; ++i) {
      BigradedForm a = one_form(rng, p.base());
      BigradedForm b = one_form(rng, p.base());
      CHECK(lambda2(p, a, b) == lambda2_oracle(model, a, b));
    }
  }
  auto p = geometries::zambon_t4();
  auto model = gotay::build_gotay(p);
  BigradedForm beta = obstructed_beta(p.base());
  CHECK(lambda2_oracle(model, beta, beta) == lambda2(p, beta, beta));
  BigradedForm constant = BigradedForm::monomial(p.base(), bit(1), TrigPoly::constant(4, 5));
  CHECK(lambda2_oracle(model, constant, constant).is_zero());
}

TEST_CASE("lambda2 symmetry and scaling") {
  std::mt19937_64 rng(77);
  for (const char* name : {"zambon-t4", "zambon-t4-twisted", "contact-t3"}) {
    CAPTURE(name);
    auto p = geometries::by_name(name);
    for (int i = 0; i < 20; ++i) {
      BigradedForm a = one_form(rng, p.base());
      BigradedForm b = one_form(rng, p.base());
      CHECK(lambda2(p, a, b) == lambda2(p, b, a));
      Rational c = random::random_rational(rng);
      CHECK(lambda2(p, a * c, a * c) == lambda2(p, a, a) * (c * c));
      // Bilinearity in the first slot.
      CHECK(lambda2(p, a + b, b) == lambda2(p, a, b) + lambda2(p, b, b));
    }
  }
}

TEST_CASE("obstructed verdict with averaging certificate") {
  auto p = geometries::zambon_t4();
  KuranishiVerdict v = kuranishi::kuranishi(p, obstructed_beta(p.base()));
  CHECK(v.status == Status::ObstructedCertified);
  CHECK_FALSE(v.kernel_potential.has_value());
  REQUIRE(std::holds_alternative<cohom::NotExactCertified>(v.certificate));
  const auto& cert = std::get<cohom::NotExactCertified>(v.certificate);
  CHECK(cert.certificate == TrigPoly::cos_axis(4, 0) * TrigPoly::sin_axis(4, 1) * Rational(-2));
  CHECK(cert.component == (bit(0) | bit(1)));
}

TEST_CASE("kernel family is unobstructed and never certified obstructed") {
  auto p = geometries::t3_example();
  for (int n = 0; n <= 10; ++n) {
    CAPTURE(n);
    BigradedForm beta = cos_power_beta(p.base(), n);
    KuranishiVerdict v = kuranishi::kuranishi(p, beta);
    CHECK(v.status == Status::UnobstructedCertified);
    REQUIRE(v.kernel_potential.has_value());
    CHECK(foliated::bott_d_star(*v.kernel_potential) == foliated::d_nu_rep(beta));
    CHECK_FALSE(std::holds_alternative<cohom::NotExactCertified>(cohom::exactness_test(lambda2(p, beta, beta))));
    // Agrees with the dedicated kernel test.
    CHECK(std::holds_alternative<cohom::InKernel>(cohom::dnu_kernel_test(trig::tp_pow(TrigPoly::cos_axis(3, 1), n))));
  }
}

TEST_CASE("verdict edge cases") {
  auto p = geometries::zambon_t4();
  auto base = p.base();
  KuranishiVerdict zero = kuranishi::kuranishi(p, BigradedForm(base));
  CHECK(zero.status == Status::UnobstructedCertified);
  CHECK(zero.lambda2_value.is_zero());

  // lambda2 vanishes here but that alone certifies nothing.
  BigradedForm single = BigradedForm::monomial(base, bit(0), TrigPoly::sin_axis(4, 0));
  KuranishiVerdict v = kuranishi::kuranishi(p, single);
  CHECK(v.lambda2_value.is_zero());
  CHECK(v.status != Status::ObstructedCertified);

  // Not leafwise closed: d_F(sin(theta3) dtheta4) != 0.
  BigradedForm open = BigradedForm::monomial(base, bit(1), TrigPoly::sin_axis(4, 2));
  try {
    kuranishi::kuranishi(p, open);
    FAIL("expected NotLeafwiseClosed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotLeafwiseClosed);
  }
  CHECK_THROWS_AS(lambda2(p, BigradedForm::monomial(base, bit(2), TrigPoly::constant(4, 1)), single), Error);
  CHECK(status_name(Status::Inconclusive) == "Inconclusive");
}
