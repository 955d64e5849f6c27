#include "coat/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "coat/error.hpp"

namespace coat {

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t poisson(std::mt19937_64& rng, double mean) {
  const double limit = std::exp(-mean);
  std::size_t k = 0;
  double p = unit(rng);
  while (p > limit) {
    ++k;
    p *= unit(rng);
  }
  return k;
}

}  // namespace

Corpus make_synthetic_corpus(const SyntheticSpec& spec) {
  if (spec.items == 0 || spec.transactions == 0 || spec.mean_length < 1.0) {
    throw Error(ErrorCode::kParse, "synthetic corpus needs items, transactions and mean_length >= 1");
  }
  std::vector<std::string> tokens;
  const int width = std::max(3, static_cast<int>(std::to_string(spec.items - 1).size()));
  for (std::size_t i = 0; i < spec.items; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "i%0*zu", width, i);
    tokens.emplace_back(buf);
  }

  std::vector<double> cumulative(spec.items);
  double total = 0.0;
  for (std::size_t i = 0; i < spec.items; ++i) {
    total += 1.0 / std::pow(static_cast<double>(i + 1), spec.skew);
    cumulative[i] = total;
  }

  std::mt19937_64 rng(spec.seed);
  std::vector<Itemset> rows;
  rows.reserve(spec.transactions);
  for (std::size_t t = 0; t < spec.transactions; ++t) {
    std::size_t len = std::min(spec.items, 1 + poisson(rng, spec.mean_length - 1.0));
    Itemset row;
    while (row.size() < len) {
      double u = unit(rng) * total;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      auto item = static_cast<ItemId>(std::min<std::size_t>(it - cumulative.begin(), spec.items - 1));
      auto pos = std::lower_bound(row.begin(), row.end(), item);
      if (pos == row.end() || *pos != item) row.insert(pos, item);
    }
    rows.push_back(std::move(row));
  }

  // Drop items that never occur; renumber the rest densely in token order.
  std::vector<bool> used(spec.items, false);
  for (const auto& row : rows) {
    for (ItemId i : row) used[i] = true;
  }
  std::vector<ItemId> remap(spec.items, 0);
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < spec.items; ++i) {
    if (!used[i]) continue;
    remap[i] = static_cast<ItemId>(kept.size());
    kept.push_back(tokens[i]);
  }
  for (auto& row : rows) {
    for (auto& i : row) i = remap[i];
  }
  Corpus corpus;
  corpus.vocabulary = Vocabulary(std::move(kept));
  corpus.dataset = Dataset(corpus.vocabulary.size(), std::move(rows));
  return corpus;
}

}  // namespace coat
