#include "folcalc/framed_torus.hpp"

#include <algorithm>
#include <cstdlib>

#include "folcalc/errors.hpp"

namespace folcalc::foliated {

namespace {

TrigMatrix minor_of(const TrigMatrix& m, int row, int col) {
  int dim = m.data.empty() ? 0 : m.data[0].dim();
  TrigMatrix out(m.rows - 1, m.cols - 1, dim);
  for (int i = 0, r = 0; i < m.rows; ++i) {
    if (i == row) continue;
    for (int j = 0, c = 0; j < m.cols; ++j) {
      if (j == col) continue;
      out(r, c) = m(i, j);
      ++c;
    }
    ++r;
  }
  return out;
}

}  // namespace

TrigPoly determinant(const TrigMatrix& m) {
  require(m.rows == m.cols, ErrorKind::DimensionMismatch, "determinant of a non-square matrix");
  int dim = m.data.empty() ? 0 : m.data[0].dim();
  if (m.rows == 0) return TrigPoly::constant(dim, 1);
  if (m.rows == 1) return m(0, 0);
  TrigPoly det(dim);
  for (int j = 0; j < m.cols; ++j) {
    if (m(0, j).is_zero()) continue;
    TrigPoly term = m(0, j) * determinant(minor_of(m, 0, j));
    if (j % 2) det -= term;
    else det += term;
  }
  return det;
}

TrigMatrix adjugate(const TrigMatrix& m) {
  require(m.rows == m.cols, ErrorKind::DimensionMismatch, "adjugate of a non-square matrix");
  int dim = m.data.empty() ? 0 : m.data[0].dim();
  TrigMatrix adj(m.rows, m.cols, dim);
  if (m.rows == 1) {
    adj(0, 0) = TrigPoly::constant(dim, 1);
    return adj;
  }
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) {
      TrigPoly c = determinant(minor_of(m, i, j));
      adj(j, i) = ((i + j) % 2) ? -c : c;
    }
  return adj;
}

TrigMatrix matmul(const TrigMatrix& a, const TrigMatrix& b) {
  require(a.cols == b.rows, ErrorKind::DimensionMismatch, "matmul shape mismatch");
  int dim = a.data.empty() ? 0 : a.data[0].dim();
  TrigMatrix out(a.rows, b.cols, dim);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < b.cols; ++j)
      for (int l = 0; l < a.cols; ++l)
        if (!a(i, l).is_zero() && !b(l, j).is_zero()) out(i, j) += a(i, l) * b(l, j);
  return out;
}

TrigMatrix ring_inverse(const TrigMatrix& m) {
  TrigPoly det = determinant(m);
  require(det.is_constant() && !det.is_zero(), ErrorKind::FrameNotUnimodular,
          "determinant " + det.to_string() + " is not a nonzero constant");
  TrigMatrix inv = adjugate(m);
  Rational scale = Rational(1) / det.constant_term();
  for (auto& e : inv.data) e *= scale;
  return inv;
}

FramedTorus::FramedTorus(int n, int k, const std::vector<std::vector<TrigPoly>>& columns, std::string name)
    : n_(n), k_(k), name_(std::move(name)) {
  require(n >= 1 && n <= trig::kMaxDim, ErrorKind::InvalidArgument, "torus dimension out of range");
  require(k >= 0 && k <= n, ErrorKind::InvalidArgument, "leaf rank out of range");
  require(static_cast<int>(columns.size()) == n, ErrorKind::DimensionMismatch, "frame needs n vector fields");
  frame_ = TrigMatrix(n, n, n);
  for (int a = 0; a < n; ++a) {
    require(static_cast<int>(columns[static_cast<std::size_t>(a)].size()) == n, ErrorKind::DimensionMismatch,
            "frame field has the wrong number of components");
    for (int i = 0; i < n; ++i) {
      const TrigPoly& c = columns[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)];
      require(c.dim() == n, ErrorKind::DimensionMismatch, "frame component lives on another torus");
      frame_(i, a) = c;
    }
  }
  coframe_ = ring_inverse(frame_);

  structure_.assign(static_cast<std::size_t>(n * n * n), TrigPoly(n));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      std::vector<TrigPoly> bracket(static_cast<std::size_t>(n), TrigPoly(n));
      for (int i = 0; i < n; ++i) bracket[static_cast<std::size_t>(i)] = apply_field(a, frame_(i, b)) - apply_field(b, frame_(i, a));
      for (int c = 0; c < n; ++c) {
        TrigPoly s(n);
        for (int i = 0; i < n; ++i)
          if (!bracket[static_cast<std::size_t>(i)].is_zero()) s += coframe_(c, i) * bracket[static_cast<std::size_t>(i)];
        structure_[static_cast<std::size_t>((c * n + a) * n + b)] = s;
        structure_[static_cast<std::size_t>((c * n + b) * n + a)] = -s;
      }
    }

  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      for (int t = k; t < n; ++t)
        require(structure(t, a, b).is_zero(), ErrorKind::NotInvolutive,
                "leafwise fields " + std::to_string(a) + "," + std::to_string(b) + " do not close under the bracket");
  for (int s = k; s < n; ++s)
    for (int t = s + 1; t < n; ++t)
      for (int a = 0; a < k; ++a)
        if (!structure(a, s, t).is_zero()) g_involutive_ = false;

  dcoframe_.resize(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        const TrigPoly& s = structure(c, a, b);
        if (!s.is_zero()) dcoframe_[static_cast<std::size_t>(c)][mask_of({a, b})] = -s;
      }

  support_.insert(Mode{});
  auto collect = [this](const TrigPoly& p) {
    for (const auto& [m, c] : p.terms()) support_.insert(m);
  };
  for (const auto& p : frame_.data) collect(p);
  for (const auto& p : coframe_.data) collect(p);
  for (const auto& p : structure_) collect(p);
}

const TrigPoly& FramedTorus::structure(int c, int a, int b) const {
  return structure_[static_cast<std::size_t>((c * n_ + a) * n_ + b)];
}

TrigPoly FramedTorus::apply_field(int a, const TrigPoly& f) const {
  TrigPoly out(n_);
  for (int i = 0; i < n_; ++i) {
    const TrigPoly& comp = frame_(i, a);
    if (comp.is_zero()) continue;
    TrigPoly d = trig::tp_partial(f, i);
    if (!d.is_zero()) out += comp * d;
  }
  return out;
}

int FramedTorus::max_coefficient_freq() const {
  int m = 0;
  for (const auto& k : support_)
    for (int v : k) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace folcalc::foliated
