#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "folcalc/exterior.hpp"
#include "folcalc/trig_poly.hpp"

namespace folcalc::foliated {

using trig::Mode;
using trig::TrigPoly;

// Square matrix of trig polynomials, row-major.
struct TrigMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<TrigPoly> data;

  TrigMatrix() = default;
  TrigMatrix(int r, int c, int dim) : rows(r), cols(c), data(static_cast<std::size_t>(r * c), TrigPoly(dim)) {}
  TrigPoly& operator()(int i, int j) { return data[static_cast<std::size_t>(i * cols + j)]; }
  const TrigPoly& operator()(int i, int j) const { return data[static_cast<std::size_t>(i * cols + j)]; }
};

TrigPoly determinant(const TrigMatrix& m);
TrigMatrix adjugate(const TrigMatrix& m);
TrigMatrix matmul(const TrigMatrix& a, const TrigMatrix& b);
// Inverse over the trig-polynomial ring; requires a nonzero constant determinant.
TrigMatrix ring_inverse(const TrigMatrix& m);

// T^n with a unimodular global frame E_0..E_{n-1}; the first k fields span TF
// (leafwise, V_1..V_k) and the remaining n-k span the complement G (Y_1..).
// The dual coframe e^a is ordered the same way.
class FramedTorus {
 public:
  // columns[a][i] is the d/dtheta_i component of E_a.
  FramedTorus(int n, int k, const std::vector<std::vector<TrigPoly>>& columns, std::string name = {});

  int n() const { return n_; }
  int k() const { return k_; }
  int q() const { return n_ - k_; }
  const std::string& name() const { return name_; }

  const TrigPoly& frame(int i, int a) const { return frame_(i, a); }
  const TrigPoly& coframe(int a, int i) const { return coframe_(a, i); }
  const TrigMatrix& frame_matrix() const { return frame_; }
  const TrigMatrix& coframe_matrix() const { return coframe_; }
  // c^c_{ab} with [E_a, E_b] = sum_c c^c_{ab} E_c.
  const TrigPoly& structure(int c, int a, int b) const;
  // d e^c = -sum_{a<b} c^c_{ab} e^a ^ e^b.
  const std::map<Mask, TrigPoly>& d_coframe(int c) const { return dcoframe_[static_cast<std::size_t>(c)]; }

  TrigPoly apply_field(int a, const TrigPoly& f) const;
  bool is_leaf(int a) const { return a < k_; }
  Mask leaf_mask() const { return range_mask(0, k_); }
  Mask transverse_mask() const { return range_mask(k_, n_); }
  Mask all_mask() const { return range_mask(0, n_); }
  int transverse_index(int t) const { return k_ + t; }

  bool complement_involutive() const { return g_involutive_; }
  // Frequencies appearing in frame, coframe and structure functions (plus 0).
  const std::set<Mode>& coefficient_support() const { return support_; }
  int max_coefficient_freq() const;

 private:
  int n_;
  int k_;
  std::string name_;
  TrigMatrix frame_;
  TrigMatrix coframe_;
  std::vector<TrigPoly> structure_;  // index (c*n + a)*n + b
  std::vector<std::map<Mask, TrigPoly>> dcoframe_;
  bool g_involutive_ = true;
  std::set<Mode> support_;
};

using BasePtr = std::shared_ptr<const FramedTorus>;

}  // namespace folcalc::foliated
