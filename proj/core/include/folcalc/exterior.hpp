#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace folcalc {

// Basis monomials e^{i1} ^ ... ^ e^{ip} with i1 < ... < ip, encoded as bit sets.
using Mask = std::uint32_t;

inline int popcount(Mask m) { return std::popcount(m); }
inline Mask bit(int i) { return Mask{1} << i; }
inline bool has_bit(Mask m, int i) { return (m >> i) & 1U; }

Mask mask_of(std::initializer_list<int> idx);
Mask mask_of(const std::vector<int>& idx);
std::vector<int> mask_indices(Mask m);
Mask range_mask(int lo, int hi);  // bits lo..hi-1

// Sign of e^a ^ e^b relative to e^{a|b}; 0 when a and b overlap.
int wedge_sign(Mask a, Mask b);

// Number of set bits of m strictly below index i.
inline int rank_below(Mask m, int i) { return std::popcount(m & (bit(i) - 1)); }

std::vector<Mask> subsets_of_size(Mask universe, int size);

}  // namespace folcalc
