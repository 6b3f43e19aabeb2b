#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "folcalc/complex_rational.hpp"

namespace folcalc::mapping_torus {

using RationalMatrix = std::vector<std::vector<Rational>>;
using IntMatrix = std::vector<std::vector<mpz_class>>;
// Coefficients from the leading term down: {1, c_{n-1}, ..., c_0}.
using IntPoly = std::vector<mpz_class>;

IntMatrix to_integer_matrix(const RationalMatrix& a);  // NonIntegerMatrix on fractional entries
mpz_class determinant(const IntMatrix& a);
IntPoly characteristic_polynomial(const IntMatrix& a);  // Faddeev-LeVerrier, exact
bool annihilates(const IntPoly& p, const IntMatrix& a);
std::string poly_to_string(const IntPoly& p);

enum class IrreducibilityKind { IrreducibleModP, IrreducibleByFactorSearch, ReducibleWithFactor, Unknown };
std::string irreducibility_name(IrreducibilityKind k);

struct IrreducibilityCertificate {
  IrreducibilityKind kind = IrreducibilityKind::Unknown;
  int prime = 0;   // for IrreducibleModP
  IntPoly factor;  // for ReducibleWithFactor
};
// Monic integer polynomial of degree <= 6.
IrreducibilityCertificate irreducibility_certificate(const IntPoly& p);

struct Reciprocity {
  bool ok = false;
  std::optional<double> unmatched;
  std::vector<std::pair<double, double>> pairs;  // (xi, 1/xi), xi = 1 paired with itself
};
Reciprocity reciprocity_check(const std::vector<double>& values, double rel_tol = 1e-8);

struct MatrixReport {
  IntMatrix a;
  mpz_class det;
  IntPoly charpoly;
  std::vector<double> eigenvalues;  // real parts, descending
  std::vector<double> mu;           // leaf part
  std::vector<double> lambda;       // transverse part
  bool det_one = false;
  bool cayley_hamilton = false;
  bool eigen_product_ok = false;
  bool diagonalizable_positive = false;
  bool cond1 = false;
  IrreducibilityCertificate cond2;
  Reciprocity reciprocity;
};

// leaf_eigs are approximate values of the leaf eigenvalues; each claims the
// nearest unclaimed eigenvalue within 1% relative distance.
MatrixReport analyze_matrix(const RationalMatrix& a, const std::vector<double>& leaf_eigs);

RationalMatrix symplectic_from_symmetric(const RationalMatrix& x, const RationalMatrix& y);
bool is_symplectic(const RationalMatrix& s);
Rational rational_determinant(const RationalMatrix& a);

struct SuspensionForm {
  bool degenerate = false;           // empty transverse part, omega = 0
  Eigen::MatrixXd omega;             // constant coefficients on T^n x R, last coordinate t
  int rank = 0;
  int kernel_dim = 0;
  double kernel_defect = 0;          // max |omega v| over leaf eigenvectors and d/dt
  double invariance_defect = 0;      // max |A^T W A - W|
  std::vector<std::pair<double, double>> pairs;
};
SuspensionForm build_suspension_form(const Eigen::MatrixXd& a, const std::vector<double>& leaf_eigs);

struct SuspensionH1 {
  std::size_t dimension = 0;
  std::vector<std::string> generators;
};
// Assumes dense leaves (the Diophantine regime), which is not verified.
SuspensionH1 suspension_h1_report(const std::vector<double>& mu);

}  // namespace folcalc::mapping_torus
