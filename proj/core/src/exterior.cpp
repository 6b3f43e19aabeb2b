#include "folcalc/exterior.hpp"

#include <algorithm>

namespace folcalc {

Mask mask_of(std::initializer_list<int> idx) {
  Mask m = 0;
  for (int i : idx) m |= bit(i);
  return m;
}

Mask mask_of(const std::vector<int>& idx) {
  Mask m = 0;
  for (int i : idx) m |= bit(i);
  return m;
}

std::vector<int> mask_indices(Mask m) {
  std::vector<int> out;
  while (m) {
    int i = std::countr_zero(m);
    out.push_back(i);
    m &= m - 1;
  }
  return out;
}

Mask range_mask(int lo, int hi) {
  Mask m = 0;
  for (int i = lo; i < hi; ++i) m |= bit(i);
  return m;
}

int wedge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  // Count pairs (i in a, j in b) with i > j: each such pair is one transposition.
  int swaps = 0;
  for (Mask rest = b; rest; rest &= rest - 1) {
    int j = std::countr_zero(rest);
    swaps += std::popcount(a >> (j + 1));
  }
  return (swaps & 1) ? -1 : 1;
}

std::vector<Mask> subsets_of_size(Mask universe, int size) {
  std::vector<Mask> out;
  std::vector<int> idx = mask_indices(universe);
  int n = static_cast<int>(idx.size());
  if (size < 0 || size > n) return out;
  for (Mask sel = 0; sel < (Mask{1} << n); ++sel) {
    if (std::popcount(sel) != size) continue;
    Mask m = 0;
    for (int i = 0; i < n; ++i)
      if (has_bit(sel, i)) m |= bit(idx[i]);
    out.push_back(m);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace folcalc
