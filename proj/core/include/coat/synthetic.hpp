#pragma once

#include <cstddef>
#include <cstdint>

#include "coat/dataset.hpp"

namespace coat {

// Seeded transaction corpora for benchmarks and trend experiments. Item
// popularity follows a Zipf law with exponent `skew`; transaction lengths
// are 1 + Poisson(mean_length - 1), capped at the vocabulary size. Tokens
// are "i000", "i001", ... so lexicographic order equals id order.
struct SyntheticSpec {
  std::size_t items = 50;
  std::size_t transactions = 500;
  double mean_length = 4.0;
  double skew = 1.0;
  std::uint64_t seed = 1;
};

Corpus make_synthetic_corpus(const SyntheticSpec& spec);

}  // namespace coat
