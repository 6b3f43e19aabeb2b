#include "folcalc/geometries.hpp"

#include <memory>

#include "folcalc/errors.hpp"

namespace folcalc::geometries {

using foliated::BigradedForm;
using foliated::FramedTorus;
using trig::TrigPoly;

namespace {

TrigPoly one(int n) { return TrigPoly::constant(n, 1); }
TrigPoly zero(int n) { return TrigPoly(n); }

std::vector<TrigPoly> unit(int n, int axis) {
  std::vector<TrigPoly> v(static_cast<std::size_t>(n), zero(n));
  v[static_cast<std::size_t>(axis)] = one(n);
  return v;
}

Presymplectic with_transverse_area(std::shared_ptr<const FramedTorus> base, int s, int t, long sign = 1) {
  BigradedForm omega = BigradedForm::monomial(base, mask_of({s, t}), TrigPoly::constant(base->n(), sign));
  return Presymplectic(base, omega);
}

}  // namespace

Presymplectic t3_example() {
  const int n = 3;
  auto v = unit(n, 0);
  v[2] = TrigPoly::cos_axis(n, 1);
  auto base = std::make_shared<const FramedTorus>(n, 1, std::vector{v, unit(n, 1), unit(n, 2)}, "t3-example");
  return with_transverse_area(base, 1, 2);
}

Presymplectic t3_noninvolutive() {
  const int n = 3;
  auto y2 = unit(n, 2);
  y2[0] = TrigPoly::sin_axis(n, 1);
  auto base = std::make_shared<const FramedTorus>(n, 1, std::vector{unit(n, 0), unit(n, 1), y2}, "t3-noninvolutive");
  return with_transverse_area(base, 1, 2);
}

Presymplectic zambon_t4() {
  const int n = 4;
  auto base = std::make_shared<const FramedTorus>(n, 2, std::vector{unit(n, 2), unit(n, 3), unit(n, 0), unit(n, 1)},
                                                  "zambon-t4");
  return with_transverse_area(base, 2, 3);
}

Presymplectic zambon_t4_twisted() {
  const int n = 4;
  auto y1 = unit(n, 0);
  y1[2] = TrigPoly::sin_axis(n, 1);
  auto base = std::make_shared<const FramedTorus>(n, 2, std::vector{unit(n, 2), unit(n, 3), y1, unit(n, 1)},
                                                  "zambon-t4-twisted");
  return with_transverse_area(base, 2, 3);
}

Presymplectic lagrangian_torus(int n) {
  std::vector<std::vector<TrigPoly>> cols;
  for (int a = 0; a < n; ++a) cols.push_back(unit(n, a));
  auto base = std::make_shared<const FramedTorus>(n, n, cols, "lagrangian-t" + std::to_string(n));
  return Presymplectic(base, BigradedForm(base));
}

Presymplectic contact_t3() {
  const int n = 3;
  TrigPoly c = TrigPoly::cos_axis(n, 2), s = TrigPoly::sin_axis(n, 2);
  std::vector<TrigPoly> reeb{c, s, zero(n)};
  std::vector<TrigPoly> y1{-s, c, zero(n)};
  auto base = std::make_shared<const FramedTorus>(n, 1, std::vector{reeb, y1, unit(n, 2)}, "contact-t3");
  BigradedForm alpha = BigradedForm::monomial(base, bit(0), one(n));
  return Presymplectic(base, foliated::exterior_d(alpha));
}

std::vector<std::string> names() {
  return {"t3-example", "t3-noninvolutive", "zambon-t4", "zambon-t4-twisted", "lagrangian-t2", "lagrangian-t3",
          "contact-t3"};
}

Presymplectic by_name(const std::string& name) {
  if (name == "t3-example") return t3_example();
  if (name == "t3-noninvolutive") return t3_noninvolutive();
  if (name == "zambon-t4") return zambon_t4();
  if (name == "zambon-t4-twisted") return zambon_t4_twisted();
  if (name == "contact-t3") return contact_t3();
  if (name.rfind("lagrangian-t", 0) == 0) {
    int n = std::stoi(name.substr(12));
    return lagrangian_torus(n);
  }
  fail(ErrorKind::InvalidArgument, "unknown geometry preset '" + name + "'");
}

}  // namespace folcalc::geometries
