#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "folcalc/errors.hpp"
#include "folcalc/random_forms.hpp"
#include "folcalc/trig_poly.hpp"

using folcalc::Error;
using folcalc::ErrorKind;
using folcalc::Rational;
using namespace folcalc::trig;

namespace {

std::vector<double> random_point(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
  std::vector<double> x(static_cast<std::size_t>(dim));
  for (auto& v : x) v = u(rng);
  return x;
}

// Trapezoid rule over a full period is exact for trig polynomials of low degree.
double grid_average(const TrigPoly& p, std::vector<double> x, const std::vector<int>& axes, int pts) {
  double sum = 0;
  int total = 1;
  for (std::size_t i = 0; i < axes.size(); ++i) total *= pts;
  for (int idx = 0; idx < total; ++idx) {
    int r = idx;
    for (int a : axes) {
      x[static_cast<std::size_t>(a)] = 2 * std::numbers::pi * (r % pts) / pts;
      r /= pts;
    }
    sum += p.evaluate(x);
  }
  return sum / total;
}

}  // namespace

TEST_CASE("cos and sin builders evaluate pointwise") {
  TrigPoly c = TrigPoly::cos_axis(3, 1);
  TrigPoly s = TrigPoly::sin_axis(3, 1, 2);
  std::vector<double> x{0.3, 1.1, -0.4};
  CHECK(c.evaluate(x) == doctest::Approx(std::cos(1.1)));
  CHECK(s.evaluate(x) == doctest::Approx(std::sin(2.2)));
  CHECK(c.is_hermitian());
  CHECK(s.is_hermitian());
}

TEST_CASE("zero coefficients are never stored") {
  TrigPoly c = TrigPoly::cos_axis(2, 0);
  TrigPoly z = c - c;
  CHECK(z.is_zero());
  CHECK(z == TrigPoly(2));
  CHECK((c * Rational(0)).size() == 0);
}

TEST_CASE("non-Hermitian tables are rejected") {
  TrigPoly::Terms t;
  t[make_mode({1})] = folcalc::CRat(1);
  CHECK_THROWS_AS(TrigPoly::from_terms(1, t), Error);
}

TEST_CASE("product, derivative and average agree with pointwise oracles") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    TrigPoly a = folcalc::random::random_trig(rng, 3);
    TrigPoly b = folcalc::random::random_trig(rng, 3);
    auto x = random_point(rng, 3);
    TrigPoly ab = tp_mul(a, b);
    CHECK(ab.is_hermitian());
    CHECK(ab.evaluate(x) == doctest::Approx(a.evaluate(x) * b.evaluate(x)).epsilon(1e-12));

    // Central difference with h = 1e-5 has error ~ h^2 * |f'''|.
    const double h = 1e-5;
    for (int axis = 0; axis < 3; ++axis) {
      auto xp = x, xm = x;
      xp[static_cast<std::size_t>(axis)] += h;
      xm[static_cast<std::size_t>(axis)] -= h;
      double fd = (a.evaluate(xp) - a.evaluate(xm)) / (2 * h);
      CHECK(tp_partial(a, axis).evaluate(x) == doctest::Approx(fd).epsilon(1e-6));
    }
    std::vector<int> axes{0, 2};
    CHECK(tp_average(ab, axes).evaluate(x) == doctest::Approx(grid_average(ab, x, axes, 16)).epsilon(1e-12));
  }
}

TEST_CASE("ring laws hold structurally") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    TrigPoly a = folcalc::random::random_trig(rng, 2);
    TrigPoly b = folcalc::random::random_trig(rng, 2);
    TrigPoly c = folcalc::random::random_trig(rng, 2);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    // Leibniz rule for the exact derivative.
    CHECK(tp_partial(a * b, 1) == tp_partial(a, 1) * b + a * tp_partial(b, 1));
  }
}

TEST_CASE("exact Laurent division examples") {
  const int n = 3;
  TrigPoly s = TrigPoly::sin_axis(n, 1), c = TrigPoly::cos_axis(n, 1);
  auto q1 = tp_div_exact(-s, s);
  REQUIRE(q1.has_value());
  CHECK(*q1 == TrigPoly::constant(n, -1));
  auto q2 = tp_div_exact(s * c, s);
  REQUIRE(q2.has_value());
  CHECK(*q2 == c);
  CHECK_FALSE(tp_div_exact(c, s).has_value());
  CHECK_THROWS_AS(tp_div_exact(c, TrigPoly(n)), Error);
  CHECK_THROWS_AS(tp_div_exact(c, s + TrigPoly::cos_axis(n, 0)), Error);
}

TEST_CASE("division recovers random factors") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    folcalc::random::TrigShape shape{3, 3, {1}};
    TrigPoly a = folcalc::random::random_trig(rng, 3, shape);
    TrigPoly b = folcalc::random::random_trig(rng, 3, shape);
    if (b.is_zero()) continue;
    auto q = tp_div_exact(a * b, b);
    REQUIRE(q.has_value());
    CHECK(*q == a);
  }
}

TEST_CASE("real coordinates round-trip") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    TrigPoly a = folcalc::random::random_trig(rng, 2);
    TrigPoly back(2);
    for (const auto& [coord, v] : real_coordinates(a)) back += real_basis_function(2, coord) * v;
    CHECK(back == a);
  }
}

TEST_CASE("compiled evaluator matches exact evaluation") {
  std::mt19937_64 rng(9);
  TrigPoly a = folcalc::random::random_trig(rng, 4, {3, 6, {}});
  CompiledTrig ca(a);
  for (int i = 0; i < 10; ++i) {
    auto x = random_point(rng, 4);
    CHECK(ca(x) == doctest::Approx(a.evaluate(x)).epsilon(1e-13));
  }
}

TEST_CASE("powers of cosine") {
  TrigPoly c = TrigPoly::cos_axis(1, 0);
  TrigPoly c2 = tp_pow(c, 2);
  // cos^2 = 1/2 + cos(2x)/2
  CHECK(c2 == TrigPoly::constant(1, Rational(1, 2)) + TrigPoly::cos_axis(1, 0, 2) * Rational(1, 2));
}
