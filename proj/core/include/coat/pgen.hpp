#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "coat/dataset.hpp"

namespace coat {

// Maximal infrequent itemsets of the dataset at level k: itemsets with
// support in (0, k) none of whose proper supersets is supported.
//
// Candidates are the distinct transactions sorted by decreasing size (ties
// by token order); a candidate contained in an earlier one is dropped, then
// candidates with support >= k are dropped. Quadratic in the number of
// distinct transactions. Output keeps the sorted candidate order.
std::vector<Itemset> pgen(const Dataset& dataset, const Vocabulary& vocab, std::size_t k);

inline constexpr std::uint64_t kDefaultPolicyCap = 1'000'000;

// C(n, m), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t m);

// Every m-subset of the vocabulary, in lexicographic token order. Throws
// Error(kPolicyTooLarge) when C(M, m) exceeds cap, Error(kParse) unless
// 1 <= m <= M.
std::vector<Itemset> km_constraints(const Vocabulary& vocab, std::size_t m,
                                    std::uint64_t cap = kDefaultPolicyCap);

}  // namespace coat
