#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "folcalc/trig_poly.hpp"

namespace folcalc::linsolve {

using trig::Mode;
using trig::RealCoord;
using trig::TrigPoly;

// Incremental row echelon form over Q for sparse systems.
class ExactEchelon {
 public:
  explicit ExactEchelon(std::size_t num_unknowns) : n_(num_unknowns) {}
  // Returns false when the row reduces to 0 = nonzero.
  bool add_row(std::map<std::size_t, Rational> row, Rational rhs);
  std::size_t rank() const { return pivots_.size(); }
  // Particular solution with free unknowns set to zero.
  std::vector<Rational> solve() const;

 private:
  struct PivotRow {
    std::map<std::size_t, Rational> row;
    Rational rhs;
  };
  std::size_t n_;
  std::map<std::size_t, PivotRow> pivots_;  // keyed by leading column
};

// A linear first-order differential operator with trig-polynomial coefficients
// acting on a tuple of functions ("slots").
struct SlotOperator {
  int dim = 0;
  int in_slots = 0;
  int out_slots = 0;
  // Image of f placed in slot `slot` (all other slots zero).
  std::function<std::vector<TrigPoly>(int slot, const TrigPoly& f)> apply;
  // Frequencies of the coefficient functions, closed under negation.
  std::set<Mode> shifts;
};

struct Box {
  std::vector<int> bound;  // max |k_i| per axis
  bool contains(const Mode& k) const;
  static Box uniform(int dim, int b);
};

struct SolveResult {
  bool solved = false;
  std::vector<TrigPoly> solution;
  std::size_t unknowns = 0;
  std::size_t equations = 0;
};

// Solves L h = rhs with h supported in the box, restricted to the mode
// components reachable from the support of rhs. Exact arithmetic.
SolveResult truncated_solve(const SlotOperator& op, const std::vector<TrigPoly>& rhs, const Box& box);

// Functional g -> average over `axes` of g[out_slot].
struct AveragingFunctional {
  int out_slot;
  std::vector<int> axes;
};

// All functionals of that form which annihilate the image of op (checked
// exactly through the formal adjoint), smallest axis sets first.
std::vector<AveragingFunctional> annihilating_averages(const SlotOperator& op);

std::size_t rank_of(const std::vector<TrigPoly>& functions);

}  // namespace folcalc::linsolve
