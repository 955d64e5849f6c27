#include "coat/pgen.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "coat/error.hpp"

namespace coat {

namespace {

std::vector<std::string> sorted_tokens(const Itemset& items, const Vocabulary& vocab) {
  std::vector<std::string> tokens;
  tokens.reserve(items.size());
  for (ItemId item : items) tokens.push_back(vocab.token(item));
  std::sort(tokens.begin(), tokens.end());
  return tokens;
}

}  // namespace

std::vector<Itemset> pgen(const Dataset& dataset, const Vocabulary& vocab, std::size_t k) {
  if (k < 2) throw Error(ErrorCode::kParse, "k must be at least 2");

  std::vector<Itemset> distinct = dataset.transactions();
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::erase_if(distinct, [](const Itemset& t) { return t.empty(); });

  struct Candidate {
    Itemset items;
    std::vector<std::string> key;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(distinct.size());
  for (auto& t : distinct) {
    auto key = sorted_tokens(t, vocab);
    candidates.push_back({std::move(t), std::move(key)});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.items.size() != b.items.size()) return a.items.size() > b.items.size();
    return a.key < b.key;
  });

  std::vector<bool> removed(candidates.size(), false);
  std::vector<Itemset> out;
  for (std::size_t r = 0; r < candidates.size(); ++r) {
    if (removed[r]) continue;
    const Itemset& tr = candidates[r].items;
    for (std::size_t s = r + 1; s < candidates.size(); ++s) {
      if (removed[s]) continue;
      const Itemset& ts = candidates[s].items;
      if (std::includes(tr.begin(), tr.end(), ts.begin(), ts.end())) removed[s] = true;
    }
    if (dataset.support(tr) < k) out.push_back(tr);
  }
  return out;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t m) {
  if (m > n) return 0;
  m = std::min(m, n - m);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= m; ++i) {
    // result * (n - m + i) / i stays integral at every step.
    const std::uint64_t factor = n - m + i;
    const std::uint64_t g = std::gcd(result, i);
    const std::uint64_t reduced = result / g;
    const std::uint64_t f = factor / (i / g);
    if (reduced != 0 && f > kMax / reduced) return kMax;
    result = reduced * f;
  }
  return result;
}

std::vector<Itemset> km_constraints(const Vocabulary& vocab, std::size_t m, std::uint64_t cap) {
  const std::size_t total = vocab.size();
  if (m < 1 || m > total) {
    throw Error(ErrorCode::kParse, "m must be in [1, " + std::to_string(total) + "]");
  }
  const std::uint64_t count = binomial(total, m);
  if (count > cap) {
    throw Error(ErrorCode::kPolicyTooLarge, "C(" + std::to_string(total) + ", " +
                                                std::to_string(m) + ") = " +
                                                std::to_string(count) + " exceeds the cap of " +
                                                std::to_string(cap));
  }
  const auto order = vocab.lexicographic_order();
  std::vector<Itemset> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<std::size_t> pos(m);
  for (std::size_t i = 0; i < m; ++i) pos[i] = i;
  while (true) {
    Itemset items;
    items.reserve(m);
    for (std::size_t p : pos) items.push_back(order[p]);
    out.push_back(make_itemset(std::move(items)));
    // Advance the rightmost position that still has room.
    std::size_t i = m;
    while (i > 0 && pos[i - 1] == total - m + (i - 1)) --i;
    if (i == 0) break;
    ++pos[i - 1];
    for (std::size_t j = i; j < m; ++j) pos[j] = pos[j - 1] + 1;
  }
  return out;
}

}  // namespace coat
