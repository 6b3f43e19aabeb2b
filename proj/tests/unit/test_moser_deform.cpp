#include <doctest.h>

#include <cmath>
#include <random>

#include "folcalc/contact.hpp"
#include "folcalc/errors.hpp"
#include "folcalc/geometries.hpp"
#include "folcalc/moser.hpp"
#include "folcalc/random_forms.hpp"
#include "folcalc/spectral.hpp"

using namespace folcalc;
using namespace folcalc::moser;
using foliated::BasePtr;

namespace {

TrigPoly one(int n) { return TrigPoly::constant(n, 1); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

// beta = cos^2(theta2) e^0 on the T^3 example with the basic extension
// 2 cos(theta2) dtheta3 - cos^2(theta2) dtheta1.
struct CosSquare {
  Presymplectic p = geometries::t3_example();
  BigradedForm beta{p.base()};
  BigradedForm ext{p.base()};
  CosSquare() {
    TrigPoly c = TrigPoly::cos_axis(3, 1);
    beta = BigradedForm::monomial(p.base(), bit(0), c * c);
    BigradedForm::Terms coords;
    coords[bit(2)] = c * Rational(2);
    coords[bit(0)] = -(c * c);
    ext = BigradedForm::from_coordinates(p.base(), coords);
  }
};

ProlongOptions options(double t_max, double dt, std::vector<int> grid) {
  ProlongOptions o;
  o.t_max = t_max;
  o.dt = dt;
  o.grid = GridSpec{std::move(grid)};
  return o;
}

}  // namespace

TEST_CASE("verify_extension") {
  auto lag = geometries::lagrangian_torus(2);
  BigradedForm dtheta1 = BigradedForm::monomial(lag.base(), bit(0), one(2));
  CHECK(verify_extension(dtheta1, dtheta1).d_beta_ext.is_zero());

  CosSquare ex;
  CHECK(verify_extension(ex.beta, ex.ext).d_beta_ext ==
        BigradedForm::monomial(ex.p.base(), bit(1) | bit(2), TrigPoly::sin_axis(3, 1) * Rational(-2)));

  // Naive extension cos(theta2) dtheta1 of cos(theta2) e^0.
  TrigPoly c = TrigPoly::cos_axis(3, 1);
  BigradedForm::Terms naive;
  naive[bit(0)] = c;
  BigradedForm naive_ext = BigradedForm::from_coordinates(ex.p.base(), naive);
  BigradedForm beta1 = BigradedForm::monomial(ex.p.base(), bit(0), c);
  CHECK(kind_of([&] { verify_extension(beta1, naive_ext); }) == ErrorKind::NotBasicDifferential);
  CHECK(kind_of([&] { verify_extension(ex.beta, naive_ext); }) == ErrorKind::NotAnExtension);

  // Closed extensions always pass.
  BigradedForm closed = foliated::exterior_d(BigradedForm::function(ex.p.base(), TrigPoly::sin_axis(3, 0)));
  CHECK(verify_extension(foliated::leaf_restriction(closed), closed).d_beta_ext.is_zero());
}

TEST_CASE("moser_field closed-form values") {
  auto lag = geometries::lagrangian_torus(2);
  auto model = gotay::build_gotay(lag);
  BigradedForm dtheta1 = BigradedForm::monomial(lag.base(), bit(0), one(2));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 20; ++i) {
    std::vector<double> th{3 * u(rng), 3 * u(rng)}, y{u(rng), u(rng)};
    Eigen::VectorXd x = moser_field(model, dtheta1, 0.3 * std::abs(u(rng)), th, y);
    Eigen::VectorXd expected = Eigen::VectorXd::Zero(4);
    expected(2) = -1;
    CHECK((x - expected).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(moser_field(model, BigradedForm(lag.base()), 0.1, th, y).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("moser_field solves the Moser equation against the symbolic form") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> angle(0, 2 * M_PI), fib(-0.2, 0.2), tdist(0, 0.05);
  for (const char* name : {"zambon-t4", "t3-example", "contact-t3"}) {
    CAPTURE(name);
    auto p = geometries::by_name(name);
    auto model = gotay::build_gotay(p);
    const int n = p.base()->n(), k = p.base()->k();
    BigradedForm ext = random::random_form(rng, p.base(), 0, 1, {1, 2, {}}, 2) +
                       random::random_form(rng, p.base(), 1, 0, {1, 2, {}}, 1);
    BigradedForm d_ext = foliated::exterior_d(ext);
    for (int s = 0; s < 100; ++s) {
      std::vector<double> th(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(k));
      for (auto& v : th) v = angle(rng);
      for (auto& v : y) v = fib(rng);
      double t = tdist(rng);
      Eigen::VectorXd x = moser_field(model, ext, t, th, y);
      // Symbolic route: omega_t(E_A, E_B) from the exact coefficient tables.
      for (int b = 0; b < n + k; ++b) {
        double lhs = 0;
        for (int a = 0; a < n + k; ++a) {
          double w = model.matrix(a, b).evaluate(th, y);
          if (a < n && b < n && a != b) {
            Mask m = bit(a) | bit(b);
            double dv = d_ext.evaluate_coeff(m, th);
            w -= t * (a < b ? dv : -dv);
          }
          lhs += x(a) * w;
        }
        double rhs = b < n ? ext.evaluate_coeff(bit(b), th) : 0.0;
        CHECK(std::abs(lhs - rhs) < 1e-12);
      }
    }
  }
}

TEST_CASE("moser_field reports degenerate omega_t") {
  CosSquare ex;
  auto model = gotay::build_gotay(ex.p);
  // omega_t = (1 + 2 t sin(theta2)) e^1 ^ e^2 + e^0 ^ dy degenerates at t = 1/2, theta2 = 3 pi / 2.
  std::vector<double> th{0.0, 3 * M_PI / 2, 0.0}, y{0.0};
  CHECK(kind_of([&] { moser_field(model, ex.ext, 0.5, th, y); }) == ErrorKind::SingularAtPoint);
  CHECK_NOTHROW(moser_field(model, ex.ext, 0.25, th, y));
}

TEST_CASE("prolong on the Lagrangian torus is t dtheta1") {
  auto lag = geometries::lagrangian_torus(2);
  auto model = gotay::build_gotay(lag);
  BigradedForm dtheta1 = BigradedForm::monomial(lag.base(), bit(0), one(2));
  auto opt = options(0.02, 1e-3, {8, 8});
  opt.sample_times = {0.01, 0.02};
  DeformationPath path = prolong(model, dtheta1, dtheta1, opt);
  REQUIRE(path.times.size() == 4);
  CHECK(path.times[1] == 1e-3);
  for (std::size_t ti = 0; ti < path.times.size(); ++ti) {
    const auto& sec = path.sections[ti];
    for (std::size_t pt = 0; pt < path.grid.size(); ++pt) {
      CHECK(std::abs(sec[2 * pt] - path.times[ti]) < 1e-12);
      CHECK(std::abs(sec[2 * pt + 1]) < 1e-12);
    }
    CHECK(path.diagnostics[ti].fd_residual < 1e-9);
    CHECK(path.diagnostics[ti].rank_margin == 1.0);
    REQUIRE(path.fitted[ti].has_value());
    CHECK(*path.diagnostics[ti].fit_residual < 1e-12);
  }
  CHECK(path.diagnostics[0].max_abs_sigma == 0.0);

  DeformationPath zero = prolong(model, BigradedForm(lag.base()), BigradedForm(lag.base()), opt);
  for (const auto& sec : zero.sections)
    for (double v : sec) CHECK(v == 0.0);
}

TEST_CASE("prolong on the T^3 example converges at first order") {
  CosSquare ex;
  auto model = gotay::build_gotay(ex.p);
  double prev = 0;
  for (double dt : {4e-3, 2e-3, 1e-3, 5e-4}) {
    CAPTURE(dt);
    auto opt = options(dt, dt, {4, 16, 4});
    opt.fit = false;
    DeformationPath path = prolong(model, ex.beta, ex.ext, opt);
    double r = path.diagnostics[1].fd_residual;
    CHECK(r < 5 * dt);
    CHECK(r > 0);
    if (prev > 0) CHECK(prev / r >= 1.8);
    prev = r;
  }

  auto opt = options(0.05, 1e-3, {4, 16, 4});
  opt.sample_times = {0.025, 0.05};
  DeformationPath path = prolong(model, ex.beta, ex.ext, opt);
  CHECK(path.initial_margin == doctest::Approx(1.0));
  for (const auto& d : path.diagnostics) {
    CHECK(d.rank_margin >= 0.5 * path.initial_margin);
    CHECK(d.newton_residual <= 1e-10);
    CHECK(*d.fit_residual < 1e-8);
    CHECK(*d.fit_excess < 1e-8);
  }
  // sigma_t only depends on theta2: every grid slice agrees.
  const auto& last = path.sections.back();
  for (std::size_t pt = 0; pt < path.grid.size(); ++pt) {
    std::size_t j = (pt / 4) % 16;
    CHECK(std::abs(last[pt] - last[4 * j]) < 1e-12);
  }
}

TEST_CASE("flow pulls omega_t back to Omega_G") {
  CosSquare ex;
  MoserSystem sys(gotay::build_gotay(ex.p), ex.ext);
  auto check = flow_symplecticity(sys, 0.05, 1e-3, 10, 99);
  CHECK(check.samples == 10);
  CHECK(check.max_defect < 1e-6);

  auto zam = geometries::zambon_t4();
  BigradedForm::Terms coords;
  coords[bit(2)] = TrigPoly::sin_axis(4, 0);  // sin(theta1) dtheta3
  BigradedForm ext = BigradedForm::from_coordinates(zam.base(), coords);
  MoserSystem zsys(gotay::build_gotay(zam), ext);
  CHECK(flow_symplecticity(zsys, 0.05, 1e-3, 6, 5).max_defect < 1e-6);
}

TEST_CASE("spectral derivative and exact fit") {
  // f = 3/4 cos(theta1) - 1/8 sin(theta1 + 2 theta2) + 1/2
  trig::Mode k{};
  k[0] = 1;
  k[1] = 2;
  TrigPoly f = TrigPoly::cos_axis(2, 0) * Rational(3, 4) - TrigPoly::sin_mode(2, k) * Rational(1, 8) +
               TrigPoly::constant(2, Rational(1, 2));
  GridSpec grid{{8, 8}};
  spectral::GridData g{grid.points, {}};
  trig::CompiledTrig cf(f), df(trig::tp_partial(f, 1));
  for (std::size_t i = 0; i < grid.size(); ++i) g.values.push_back(cf(grid.point(i)));
  auto fit = spectral::fit(g);
  // Coefficients are binary rationals within roundoff of the exact ones.
  TrigPoly diff = fit.poly - f;
  for (const auto& [mode, c] : diff.terms()) CHECK(std::abs(c.to_complex()) < 1e-15);
  CHECK(fit.poly.terms().size() == f.terms().size());
  CHECK(fit.residual < 1e-14);
  auto d = spectral::derivative(g, 1);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(d[i] - df(grid.point(i))) < 1e-13);
  // Nyquist modes are not representable and get dropped.
  spectral::GridData nyq{{4}, {1, -1, 1, -1}};
  CHECK(spectral::fit(nyq).poly.is_zero());
  CHECK(spectral::fit(nyq).residual == doctest::Approx(1.0));
}

TEST_CASE("graph rank margin matches the symbolic coisotropic margin") {
  auto c = geometries::contact_t3();
  auto model = gotay::build_gotay(c);
  GridSpec grid{{8, 8, 8}};
  TrigPoly s = TrigPoly::sin_axis(3, 0) * Rational(3, 10) + TrigPoly::cos_axis(3, 2) * Rational(1, 5);
  trig::CompiledTrig cs(s);
  std::vector<double> sigma;
  for (std::size_t i = 0; i < grid.size(); ++i) sigma.push_back(cs(grid.point(i)));
  auto margins = graph_rank_margins(c, grid, sigma, 1);
  double spectral_min = *std::min_element(margins.begin(), margins.end());

  auto pulled = gotay::section_pullback(model, {s}).via_formula;
  auto verdict = gotay::coisotropic_check(pulled, model.space.dim() / 2, grid);
  REQUIRE(std::holds_alternative<gotay::Coisotropic>(verdict));
  CHECK(spectral_min == doctest::Approx(std::get<gotay::Coisotropic>(verdict).margin).epsilon(1e-12));
}

TEST_CASE("contact model slices") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> num(-20, 20);
  for (int n : {2, 3}) {
    auto lag = geometries::lagrangian_torus(n);
    std::vector<BigradedForm> alphas;
    for (int i = 0; i < n; ++i) alphas.push_back(BigradedForm::monomial(lag.base(), bit(i), one(n)));
    GridSpec grid = GridSpec::uniform(n, 4);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<Rational> h;
      Rational sum = 1;
      for (int i = 0; i < n; ++i) {
        h.emplace_back(num(rng), 100);
        sum += h.back();
      }
      auto r = contact::contact_model_check(lag, alphas, h, grid);
      CHECK(r.matches);
      CHECK(r.factor == sum);
      CHECK_FALSE(r.degenerate);
    }
    auto r0 = contact::contact_model_check(lag, alphas, std::vector<Rational>(static_cast<std::size_t>(n), 0), grid);
    CHECK(r0.factor == 1);
    std::vector<Rational> bad(static_cast<std::size_t>(n), 0);
    bad[0] = -1;
    CHECK(contact::contact_model_check(lag, alphas, bad, grid).degenerate);
  }

  auto c = geometries::contact_t3();
  std::vector<BigradedForm> alpha{BigradedForm::monomial(c.base(), bit(0), one(3))};
  GridSpec grid = GridSpec::uniform(3, 6);
  for (Rational h : {Rational(0), Rational(1, 10), Rational(-3, 7)}) {
    auto r = contact::contact_model_check(c, alpha, {h}, grid);
    CHECK(r.matches);
    CHECK(r.slice == c.omega() * (1 + h));
    CHECK(r.volume_margin == doctest::Approx(1.0));
  }
  // d(2 alpha) != omega_C
  std::vector<BigradedForm> twice{alpha[0] * Rational(2)};
  CHECK_THROWS_AS(contact::contact_model_check(c, twice, {Rational(0)}, grid), Error);
}

TEST_CASE("Rummler criterion") {
  auto lag = geometries::lagrangian_torus(3);
  std::vector<BigradedForm> alphas;
  for (int i = 0; i < 3; ++i) alphas.push_back(BigradedForm::monomial(lag.base(), bit(i), one(3)));
  auto ok = contact::rummler_check(lag, alphas, GridSpec::uniform(3, 4));
  CHECK(ok.ok);
  CHECK(ok.leaf_margin == 1.0);

  auto c = geometries::contact_t3();
  CHECK(contact::rummler_check(c, {BigradedForm::monomial(c.base(), bit(0), one(3))}, GridSpec::uniform(3, 6)).ok);

  // (2 + cos(theta2)) e^0 on the T^3 example has a (1, 1) defect.
  auto t3 = geometries::t3_example();
  TrigPoly g = TrigPoly::constant(3, 2) + TrigPoly::cos_axis(3, 1);
  auto bad = contact::rummler_check(t3, {BigradedForm::monomial(t3.base(), bit(0), g)}, GridSpec::uniform(3, 6));
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.failed_block.has_value());
  CHECK(*bad.failed_block == std::make_pair(1, 1));

  // Vanishing somewhere on the leaves.
  auto zero = contact::rummler_check(t3, {BigradedForm::monomial(t3.base(), bit(0), TrigPoly::cos_axis(3, 1))},
                                     GridSpec::uniform(3, 4));
  CHECK_FALSE(zero.ok);
  CHECK(*zero.failed_block == std::make_pair(0, 1));
}
