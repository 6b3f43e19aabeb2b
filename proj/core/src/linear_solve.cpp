#include "folcalc/linear_solve.hpp"

#include <cstdlib>
#include <deque>

#include "folcalc/exterior.hpp"

#include "folcalc/errors.hpp"

namespace folcalc::linsolve {

bool ExactEchelon::add_row(std::map<std::size_t, Rational> row, Rational rhs) {
  std::erase_if(row, [](const auto& kv) { return sgn(kv.second) == 0; });
  while (!row.empty()) {
    auto lead = row.begin();
    std::size_t col = lead->first;
    require(col < n_, ErrorKind::InvalidArgument, "row references an unknown out of range");
    auto piv = pivots_.find(col);
    if (piv == pivots_.end()) {
      Rational inv = Rational(1) / lead->second;
      for (auto& [c, v] : row) v *= inv;
      rhs *= inv;
      pivots_.emplace(col, PivotRow{std::move(row), std::move(rhs)});
      return true;
    }
    Rational factor = lead->second;
    for (const auto& [c, v] : piv->second.row) {
      auto [it, ins] = row.try_emplace(c, 0);
      it->second -= factor * v;
      if (sgn(it->second) == 0) row.erase(it);
    }
    rhs -= factor * piv->second.rhs;
  }
  return sgn(rhs) == 0;
}

std::vector<Rational> ExactEchelon::solve() const {
  std::vector<Rational> x(n_, Rational(0));
  for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
    Rational v = it->second.rhs;
    for (const auto& [c, a] : it->second.row)
      if (c != it->first) v -= a * x[c];
    x[it->first] = v;
  }
  return x;
}

bool Box::contains(const Mode& k) const {
  for (std::size_t i = 0; i < bound.size(); ++i)
    if (std::abs(k[i]) > bound[i]) return false;
  for (std::size_t i = bound.size(); i < static_cast<std::size_t>(trig::kMaxDim); ++i)
    if (k[i] != 0) return false;
  return true;
}

Box Box::uniform(int dim, int b) { return Box{std::vector<int>(static_cast<std::size_t>(dim), b)}; }

namespace {

struct Key {
  int slot;
  RealCoord coord;
  bool operator<(const Key& o) const { return slot != o.slot ? slot < o.slot : coord < o.coord; }
};

Mode canonical(const Mode& k) { return trig::is_positive_mode(trig::negate(k)) ? trig::negate(k) : k; }

Mode sub(const Mode& a, const Mode& b) {
  Mode r{};
  for (int i = 0; i < trig::kMaxDim; ++i) r[i] = a[i] - b[i];
  return r;
}

}  // namespace

SolveResult truncated_solve(const SlotOperator& op, const std::vector<TrigPoly>& rhs, const Box& box) {
  require(static_cast<int>(rhs.size()) == op.out_slots, ErrorKind::DimensionMismatch, "rhs has the wrong slot count");
  SolveResult result;
  result.solution.assign(static_cast<std::size_t>(op.in_slots), TrigPoly(op.dim));

  std::map<Key, Rational> b;
  std::deque<Key> queue;
  std::set<Key> seen_eq;
  for (int s = 0; s < op.out_slots; ++s)
    for (const auto& [c, v] : trig::real_coordinates(rhs[static_cast<std::size_t>(s)])) {
      Key key{s, c};
      b[key] = v;
      if (seen_eq.insert(key).second) queue.push_back(key);
    }
  if (b.empty()) {
    result.solved = true;
    return result;
  }

  std::map<Key, std::size_t> unknown_index;
  std::vector<Key> unknowns;
  // Column-wise images; transposed into rows below.
  std::vector<std::vector<std::pair<Key, Rational>>> columns;

  auto visit_unknown = [&](const Key& u) {
    if (unknown_index.count(u)) return;
    unknown_index[u] = unknowns.size();
    unknowns.push_back(u);
    auto image = op.apply(u.slot, trig::real_basis_function(op.dim, u.coord));
    std::vector<std::pair<Key, Rational>> col;
    for (int s = 0; s < op.out_slots; ++s)
      for (const auto& [c, v] : trig::real_coordinates(image[static_cast<std::size_t>(s)])) {
        Key eq{s, c};
        col.push_back({eq, v});
        if (seen_eq.insert(eq).second) queue.push_back(eq);
      }
    columns.push_back(std::move(col));
  };

  while (!queue.empty()) {
    Key eq = queue.front();
    queue.pop_front();
    for (const Mode& shift : op.shifts) {
      for (const Mode& base : {eq.coord.k, trig::negate(eq.coord.k)}) {
        Mode k = canonical(sub(base, shift));
        if (!box.contains(k)) continue;
        for (int slot = 0; slot < op.in_slots; ++slot) {
          visit_unknown(Key{slot, RealCoord{k, false}});
          if (!trig::is_zero_mode(k)) visit_unknown(Key{slot, RealCoord{k, true}});
        }
      }
    }
  }

  std::map<Key, std::map<std::size_t, Rational>> rows;
  for (const auto& key : seen_eq) rows[key];
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (const auto& [eq, v] : columns[j]) {
      auto& r = rows[eq];
      auto [it, ins] = r.try_emplace(j, 0);
      it->second += v;
    }
  result.unknowns = unknowns.size();
  result.equations = rows.size();

  ExactEchelon ech(unknowns.size());
  for (auto& [key, row] : rows) {
    auto it = b.find(key);
    Rational rhs_v = it == b.end() ? Rational(0) : it->second;
    if (!ech.add_row(std::move(row), rhs_v)) return result;
  }
  auto x = ech.solve();
  for (std::size_t j = 0; j < unknowns.size(); ++j) {
    if (sgn(x[j]) == 0) continue;
    const Key& u = unknowns[j];
    result.solution[static_cast<std::size_t>(u.slot)] += trig::real_basis_function(op.dim, u.coord) * x[j];
  }
  result.solved = true;
  return result;
}

std::vector<AveragingFunctional> annihilating_averages(const SlotOperator& op) {
  const int n = op.dim;
  // P[J][i] and Q[J] as vectors over output slots.
  std::vector<std::vector<std::vector<TrigPoly>>> P(static_cast<std::size_t>(op.in_slots));
  std::vector<std::vector<TrigPoly>> Q(static_cast<std::size_t>(op.in_slots));
  for (int j = 0; j < op.in_slots; ++j) {
    Q[static_cast<std::size_t>(j)] = op.apply(j, TrigPoly::constant(n, 1));
    for (int i = 0; i < n; ++i) {
      TrigPoly c = TrigPoly::cos_axis(n, i), s = TrigPoly::sin_axis(n, i);
      auto lc = op.apply(j, c);
      auto ls = op.apply(j, s);
      std::vector<TrigPoly> pi(static_cast<std::size_t>(op.out_slots), TrigPoly(n));
      for (int o = 0; o < op.out_slots; ++o)
        pi[static_cast<std::size_t>(o)] = c * ls[static_cast<std::size_t>(o)] - s * lc[static_cast<std::size_t>(o)];
      P[static_cast<std::size_t>(j)].push_back(std::move(pi));
    }
  }
  std::vector<AveragingFunctional> out;
  std::vector<std::vector<int>> axis_sets;
  for (int size = 1; size <= n; ++size)
    for (Mask m : subsets_of_size(range_mask(0, n), size)) axis_sets.push_back(mask_indices(m));
  for (int o = 0; o < op.out_slots; ++o)
    for (const auto& axes : axis_sets) {
      Mask am = mask_of(axes);
      bool ok = true;
      for (int j = 0; j < op.in_slots && ok; ++j) {
        TrigPoly r = Q[static_cast<std::size_t>(j)][static_cast<std::size_t>(o)];
        for (int i = 0; i < n && ok; ++i) {
          const TrigPoly& p = P[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)][static_cast<std::size_t>(o)];
          if (has_bit(am, i)) r -= trig::tp_partial(p, i);
          else if (!p.is_zero()) ok = false;
        }
        if (!r.is_zero()) ok = false;
      }
      if (ok) out.push_back(AveragingFunctional{o, axes});
    }
  return out;
}

std::size_t rank_of(const std::vector<TrigPoly>& functions) {
  std::map<RealCoord, std::size_t> col;
  std::vector<std::vector<std::pair<RealCoord, Rational>>> coords;
  for (const auto& f : functions) {
    coords.push_back(trig::real_coordinates(f));
    for (const auto& [c, v] : coords.back()) col.try_emplace(c, col.size());
  }
  ExactEchelon ech(col.size());
  for (const auto& cs : coords) {
    std::map<std::size_t, Rational> row;
    for (const auto& [c, v] : cs) row[col[c]] = v;
    ech.add_row(std::move(row), 0);
  }
  return ech.rank();
}

}  // namespace folcalc::linsolve
