#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "folcalc/foliated.hpp"
#include "folcalc/total_space.hpp"

namespace folcalc::gotay {

using foliated::BigradedForm;
using foliated::Presymplectic;
using total::Multivector;
using total::PolyMatrix;
using total::TotalForm;
using total::TotalSpace;
using trig::TrigPoly;

// Symplectic normal form on a neighbourhood of the zero section of T*F:
// Omega_G = p*omega_C - d(sum_i y_i p*e^i), y_i the fiber coordinates dual
// to the leaf coframe. Coefficients are affine in y.
struct GotayModel {
  Presymplectic presymplectic;
  TotalSpace space;
  TotalForm omega;
  PolyMatrix matrix;  // Omega_G(E_A, E_B)
};

GotayModel build_gotay(const Presymplectic& p);

// Section of T*F given by its leaf-coframe coefficients.
std::vector<TrigPoly> section_of(const BigradedForm& foliated_one_form);

struct SectionPullback {
  BigradedForm via_formula;       // omega_C - d(j alpha)
  BigradedForm via_substitution;  // alpha^* Omega_G by substitution
  bool agree = false;
};
SectionPullback section_pullback(const GotayModel& model, const std::vector<TrigPoly>& section);

// Uniform periodic grid, axis 0 varying fastest.
struct GridSpec {
  std::vector<int> points;  // per axis
  static GridSpec uniform(int dim, int pts);
  std::size_t size() const;
  std::vector<double> point(std::size_t idx) const;
};

struct GridRow {
  std::vector<double> theta;
  double margin = 0;
  int rank = 0;
};

struct Coisotropic {
  double margin = 0;  // min over the grid of the sup-norm of omega^r / r!
  int half_rank = 0;
  std::vector<GridRow> rows;
};
struct NotCoisotropic {
  std::string reason;
  Mask component = 0;
  std::vector<double> witness;
  double value = 0;
  std::vector<GridRow> rows;
};
using CoisotropicVerdict = std::variant<Coisotropic, NotCoisotropic>;

// Tests that omega (a closed 2-form on a base of dimension d inside a
// symplectic manifold of dimension 2 * ambient_half_dim) has omega^{r+1} = 0
// exactly and omega^r nowhere zero on the grid, r = d - ambient_half_dim.
CoisotropicVerdict coisotropic_check(const BigradedForm& omega, int ambient_half_dim, const GridSpec& grid,
                                     bool collect_rows = false, double margin_tol = 1e-9);
BigradedForm wedge_power(const BigradedForm& omega, int r);

// Truncated y-expansion of Pi_G = -Omega_G^{-1}.
struct PiJet {
  int order = 0;
  PolyMatrix pi;  // Pi(e^A, e^B)
};
PiJet pi_jet(const GotayModel& model, int order = 2);
PolyMatrix pi_times_omega(const PiJet& jet, const GotayModel& model);

// beta -> (wedge^k Pi-sharp)(p* j beta), a vertical fiberwise-constant multivector.
Multivector vert_field_from_form(const GotayModel& model, const PiJet& jet, const BigradedForm& beta);
// V -> (-1)^k r(i* (wedge^k Omega-flat) V).
BigradedForm form_from_vert_field(const GotayModel& model, const Multivector& v);

}  // namespace folcalc::gotay
