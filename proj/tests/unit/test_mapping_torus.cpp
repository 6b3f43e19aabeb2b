#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "folcalc/errors.hpp"
#include "folcalc/mapping_torus.hpp"

using namespace folcalc;
using namespace folcalc::mapping_torus;

namespace {

RationalMatrix rm(std::initializer_list<std::initializer_list<long>> rows) {
  RationalMatrix m;
  for (const auto& r : rows) {
    m.emplace_back();
    for (long v : r) m.back().emplace_back(v);
  }
  return m;
}

const RationalMatrix kAnosov = rm({{3, 1, 1, 1}, {1, 2, 1, 0}, {1, 1, 1, 0}, {1, 0, 0, 1}});

IntPoly ip(std::initializer_list<long> cs) {
  IntPoly p;
  for (long c : cs) p.emplace_back(c);
  return p;
}

mpz_class trace_power(const IntMatrix& a, int k) {
  const std::size_t n = a.size();
  IntMatrix p(n, std::vector<mpz_class>(n, 0));
  for (std::size_t i = 0; i < n; ++i) p[i][i] = 1;
  for (int s = 0; s < k; ++s) {
    IntMatrix q(n, std::vector<mpz_class>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t j = 0; j < n; ++j) q[i][j] += p[i][l] * a[l][j];
    p = q;
  }
  mpz_class t = 0;
  for (std::size_t i = 0; i < n; ++i) t += p[i][i];
  return t;
}

}  // namespace

TEST_CASE("four-dimensional Anosov matrix") {
  MatrixReport r = analyze_matrix(kAnosov, {4.39, 1 / 4.39});
  CHECK(r.det == 1);
  CHECK(r.det_one);
  CHECK(r.charpoly == ip({1, -7, 13, -7, 1}));
  CHECK(poly_to_string(r.charpoly) == "X^4 - 7X^3 + 13X^2 - 7X + 1");
  CHECK(r.cayley_hamilton);
  CHECK(r.eigen_product_ok);
  CHECK(r.diagonalizable_positive);
  REQUIRE(r.eigenvalues.size() == 4);
  CHECK(r.eigenvalues[0] == doctest::Approx(4.39).epsilon(0.01 / 4.39));
  CHECK(r.eigenvalues[1] == doctest::Approx(1.84).epsilon(0.01 / 1.84));
  CHECK(r.eigenvalues[2] * r.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.eigenvalues[3] * r.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-10));
  REQUIRE(r.mu.size() == 2);
  REQUIRE(r.lambda.size() == 2);
  CHECK(r.mu[0] == r.eigenvalues[0]);
  CHECK(r.lambda[0] == r.eigenvalues[1]);
  CHECK(r.cond1);
  CHECK(r.cond2.kind == IrreducibilityKind::IrreducibleModP);
  CHECK(r.cond2.prime == 2);
  CHECK(r.reciprocity.ok);
}

TEST_CASE("charpoly agrees with Newton identities on random integer matrices") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> entry(-4, 4);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 4;
    IntMatrix a(n, std::vector<mpz_class>(n));
    for (auto& row : a)
      for (auto& v : row) v = entry(rng);
    IntPoly p = characteristic_polynomial(a);
    REQUIRE(p.size() == n + 1);
    CHECK(annihilates(p, a));
    // p_k + c_1 p_{k-1} + ... + k c_k = 0 with c_i the coefficient of X^{n-i}
    for (std::size_t k = 1; k <= n; ++k) {
      mpz_class s = trace_power(a, static_cast<int>(k)) + mpz_class(static_cast<long>(k)) * p[k];
      for (std::size_t i = 1; i < k; ++i) s += p[i] * trace_power(a, static_cast<int>(k - i));
      CHECK(s == 0);
    }
    mpz_class sign = (n % 2 == 0) ? 1 : -1;
    CHECK(p.back() == sign * determinant(a));
  }
}

TEST_CASE("irreducibility certificates") {
  SUBCASE("reducible X^2 - 1") {
    auto c = irreducibility_certificate(ip({1, 0, -1}));
    CHECK(c.kind == IrreducibilityKind::ReducibleWithFactor);
    CHECK(c.factor == ip({1, -1}));
  }
  SUBCASE("X^2 - 2 is irreducible") {
    auto c = irreducibility_certificate(ip({1, 0, -2}));
    CHECK(c.kind == IrreducibilityKind::IrreducibleModP);
    CHECK(c.prime == 3);
  }
  SUBCASE("product of quadratics") {
    // (X^2 + X - 1)(X^2 - 3X + 1)
    auto c = irreducibility_certificate(ip({1, -2, -3, 4, -1}));
    CHECK(c.kind == IrreducibilityKind::ReducibleWithFactor);
    REQUIRE(c.factor.size() == 3);
    CHECK((c.factor == ip({1, 1, -1}) || c.factor == ip({1, -3, 1})));
  }
  SUBCASE("zero constant term") {
    auto c = irreducibility_certificate(ip({1, 3, 0}));
    CHECK(c.kind == IrreducibilityKind::ReducibleWithFactor);
    CHECK(c.factor == ip({1, 0}));
  }
  SUBCASE("limits") {
    CHECK_THROWS_AS(irreducibility_certificate(ip({1, 0, 0, 0, 0, 0, 0, 1})), Error);
    CHECK_THROWS_AS(irreducibility_certificate(ip({2, 1})), Error);
  }
  SUBCASE("cyclotomic image mod 2") {
    auto c = irreducibility_certificate(ip({1, 1, 1, 1, 1}));
    CHECK(c.kind == IrreducibilityKind::IrreducibleModP);
    CHECK(c.prime == 2);
  }
}

TEST_CASE("reciprocity") {
  CHECK(reciprocity_check({2.0, 0.5, 3.0, 1.0 / 3.0}).ok);
  CHECK(reciprocity_check({1.0, 1.0, 4.0, 0.25}).ok);
  Reciprocity bad = reciprocity_check({2.0, 2.0, 0.5});
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.unmatched.has_value());
  CHECK(*bad.unmatched == doctest::Approx(2.0));
  CHECK_THROWS_AS(reciprocity_check({-1.0, -1.0}), Error);
  CHECK(reciprocity_check({}).ok);
}

TEST_CASE("symplectic matrix from symmetric pair") {
  RationalMatrix s = symplectic_from_symmetric(rm({{1, 0}, {0, 1}}), rm({{1, 1}, {1, 0}}));
  CHECK(s == kAnosov);
  CHECK(is_symplectic(s));
  CHECK(rational_determinant(s) == 1);

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> entry(-3, 3);
  int built = 0;
  for (int trial = 0; trial < 40 && built < 15; ++trial) {
    const std::size_t n = 1 + trial % 3;
    RationalMatrix x(n, std::vector<Rational>(n)), y(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        x[i][j] = x[j][i] = entry(rng);
        y[i][j] = y[j][i] = Rational(entry(rng)) / 2;
      }
    if (rational_determinant(x) == 0) continue;
    RationalMatrix m = symplectic_from_symmetric(x, y);
    CHECK(is_symplectic(m));
    CHECK(rational_determinant(m) == 1);
    ++built;
  }
  CHECK(built >= 10);

  CHECK_THROWS_AS(symplectic_from_symmetric(rm({{1, 2}, {0, 1}}), rm({{0, 0}, {0, 0}})), Error);
  CHECK_THROWS_AS(symplectic_from_symmetric(rm({{1, 1}, {1, 1}}), rm({{0, 0}, {0, 0}})), Error);
}

TEST_CASE("suspension form") {
  Eigen::MatrixXd a(4, 4);
  a << 3, 1, 1, 1, 1, 2, 1, 0, 1, 1, 1, 0, 1, 0, 0, 1;
  SuspensionForm f = build_suspension_form(a, {4.39, 1 / 4.39});
  CHECK_FALSE(f.degenerate);
  CHECK(f.rank == 2);
  CHECK(f.kernel_dim == 3);
  CHECK(f.kernel_defect < 1e-9);
  CHECK(f.invariance_defect < 1e-9);

  // Conjugate of diag(2, 1/2, 3, 1/3, 5) by a fixed invertible matrix.
  Eigen::VectorXd d(5);
  d << 2, 0.5, 3, 1.0 / 3.0, 5;
  Eigen::MatrixXd p(5, 5);
  p << 1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 1;
  Eigen::MatrixXd synth = p * d.asDiagonal() * p.inverse();
  SuspensionForm g = build_suspension_form(synth, {5});
  CHECK(g.rank == 4);
  CHECK(g.kernel_dim == 2);
  CHECK(g.kernel_defect < 1e-9);
  CHECK(g.invariance_defect < 1e-9);
  CHECK(g.pairs.size() == 2);

  SuspensionForm empty = build_suspension_form(a, {4.39, 1 / 4.39, 1.84, 1 / 1.84});
  CHECK(empty.degenerate);
  CHECK(empty.rank == 0);

  CHECK_THROWS_AS(build_suspension_form(synth, {2}), Error);  // {1/2, 3, 1/3, 5} unmatched
  Eigen::MatrixXd neg = Eigen::MatrixXd::Identity(2, 2);
  neg(0, 0) = -1;
  CHECK_THROWS_AS(build_suspension_form(neg, {1}), Error);
}

TEST_CASE("first cohomology of the suspension") {
  MatrixReport r = analyze_matrix(kAnosov, {4.39, 1 / 4.39});
  SuspensionH1 h = suspension_h1_report(r.mu);
  CHECK(h.dimension == 1);
  CHECK(h.generators == std::vector<std::string>{"dt"});
  CHECK(suspension_h1_report({1.0, 2.0}).dimension == 2);
  CHECK(suspension_h1_report({}).dimension == 1);
}

TEST_CASE("matrix input validation") {
  RationalMatrix frac = {{Rational(2), Rational(0)}, {Rational(0), Rational(1, 2)}};
  CHECK_THROWS_AS(analyze_matrix(frac, {2}), Error);
  try {
    analyze_matrix(frac, {2});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonIntegerMatrix);
  }
  CHECK_THROWS_AS(analyze_matrix(rm({{1, 0, 0}, {0, 1, 0}}), {1}), Error);
  CHECK_THROWS_AS(analyze_matrix(kAnosov, {10.0}), Error);

  MatrixReport id = analyze_matrix(rm({{1, 0}, {0, 1}}), {1});
  CHECK(id.det_one);
  CHECK_FALSE(id.cond1);
  CHECK(id.cond2.kind == IrreducibilityKind::ReducibleWithFactor);

  MatrixReport rot = analyze_matrix(rm({{0, -1}, {1, 0}}), {});
  CHECK_FALSE(rot.diagonalizable_positive);

  MatrixReport jordan = analyze_matrix(rm({{1, 1}, {0, 1}}), {});
  CHECK_FALSE(jordan.diagonalizable_positive);
}
