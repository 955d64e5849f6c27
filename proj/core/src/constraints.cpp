#include "coat/constraints.hpp"

#include <algorithm>
#include <set>

#include "coat/error.hpp"

namespace coat {

std::vector<GroupId> map_itemset(std::span<const ItemId> items, const AnonymizationMap& map) {
  std::vector<GroupId> out;
  out.reserve(items.size());
  for (ItemId item : items) {
    GroupId g = map.lookup(item);
    if (g != kSuppressed) out.push_back(g);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PrivacyConstraintSet::PrivacyConstraintSet(std::vector<Itemset> itemsets, std::size_t k) : k_(k) {
  if (k < 2) throw Error(ErrorCode::kParse, "k must be at least 2");
  constraints_.reserve(itemsets.size());
  for (auto& items : itemsets) {
    Itemset normalized = make_itemset(std::move(items));
    if (normalized.empty()) throw Error(ErrorCode::kParse, "empty privacy constraint");
    constraints_.push_back({normalized, std::vector<GroupId>(normalized.begin(), normalized.end())});
  }
  for (std::size_t c = 0; c < constraints_.size(); ++c) index_constraint(c);
}

void PrivacyConstraintSet::index_constraint(std::size_t c) {
  for (GroupId g : constraints_[c].live_groups) {
    if (g >= occurrences_.size()) occurrences_.resize(g + std::size_t{1});
    occurrences_[g].push_back(c);
  }
}

void PrivacyConstraintSet::rebind(const AnonymizationMap& map) {
  occurrences_.clear();
  for (std::size_t c = 0; c < constraints_.size(); ++c) {
    constraints_[c].live_groups = map_itemset(constraints_[c].original_items, map);
    index_constraint(c);
  }
}

const std::vector<std::size_t>& PrivacyConstraintSet::referencing(GroupId gid) const {
  static const std::vector<std::size_t> kNone;
  return gid < occurrences_.size() ? occurrences_[gid] : kNone;
}

std::vector<std::size_t> PrivacyConstraintSet::on_merge(GroupId x, GroupId y, GroupId merged) {
  std::vector<std::size_t> touched;
  std::set_union(referencing(x).begin(), referencing(x).end(), referencing(y).begin(),
                 referencing(y).end(), std::back_inserter(touched));
  for (std::size_t c : touched) {
    auto& groups = constraints_[c].live_groups;
    std::erase_if(groups, [&](GroupId g) { return g == x || g == y; });
    // merged is the largest gid allocated so far.
    groups.push_back(merged);
  }
  if (merged >= occurrences_.size()) occurrences_.resize(merged + std::size_t{1});
  occurrences_[merged] = touched;
  if (x < occurrences_.size()) occurrences_[x].clear();
  if (y < occurrences_.size()) occurrences_[y].clear();
  return touched;
}

std::vector<std::size_t> PrivacyConstraintSet::on_suppress(GroupId x) {
  std::vector<std::size_t> touched = referencing(x);
  for (std::size_t c : touched) {
    auto& groups = constraints_[c].live_groups;
    groups.erase(std::lower_bound(groups.begin(), groups.end(), x));
  }
  if (x < occurrences_.size()) occurrences_[x].clear();
  return touched;
}

bool PrivacyConstraintSet::consistent_with(const AnonymizationMap& map) const {
  return std::all_of(constraints_.begin(), constraints_.end(), [&](const PrivacyConstraint& p) {
    return p.live_groups == map_itemset(p.original_items, map);
  });
}

std::vector<std::size_t> UtilityConstraintSet::block_index(std::size_t vocabulary_size) const {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(vocabulary_size, kUnset);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw Error(ErrorCode::kNotAPartition, "empty utility block");
    for (ItemId item : blocks[b]) {
      if (item >= vocabulary_size || index[item] != kUnset) {
        throw Error(ErrorCode::kNotAPartition, "utility blocks overlap or exceed the vocabulary");
      }
      index[item] = b;
    }
  }
  if (std::find(index.begin(), index.end(), kUnset) != index.end()) {
    throw Error(ErrorCode::kNotAPartition, "utility blocks do not cover the vocabulary");
  }
  return index;
}

UtilityConstraintSet UtilityConstraintSet::coarsest(std::size_t vocabulary_size, double s) {
  Itemset all(vocabulary_size);
  for (ItemId i = 0; i < vocabulary_size; ++i) all[i] = i;
  return {{std::move(all)}, s};
}

namespace {

// Condition (2): every non-empty proper subset of `groups` (whose own
// support is 0) is supported by >= k rows or by none.
bool proper_subsets_ok(const std::vector<GroupId>& groups, const Dataset& anon, std::size_t k,
                       std::set<std::vector<GroupId>>& visited) {
  if (groups.size() <= 1) return true;
  std::vector<GroupId> sub;
  sub.reserve(groups.size() - 1);
  for (std::size_t drop = 0; drop < groups.size(); ++drop) {
    sub.clear();
    for (std::size_t i = 0; i < groups.size(); ++i) {
      if (i != drop) sub.push_back(groups[i]);
    }
    if (!visited.insert(sub).second) continue;
    std::size_t sup = anon.support(sub);
    if (sup >= k) continue;  // all subsets of sub are supported at least as much
    if (sup > 0) return false;
    if (!proper_subsets_ok(sub, anon, k, visited)) return false;
  }
  return true;
}

}  // namespace

bool check_privacy_itemset(std::span<const GroupId> groups, const Dataset& anon, std::size_t k) {
  if (groups.empty()) return true;
  std::size_t sup = anon.support(groups);
  if (sup >= k) return true;
  if (sup > 0) return false;
  std::vector<GroupId> sorted(groups.begin(), groups.end());
  std::sort(sorted.begin(), sorted.end());
  std::set<std::vector<GroupId>> visited;
  return proper_subsets_ok(sorted, anon, k, visited);
}

bool check_privacy_constraint(const PrivacyConstraint& p, const AnonymizationMap& map,
                              const Dataset& anon, std::size_t k) {
  return check_privacy_itemset(map_itemset(p.original_items, map), anon, k);
}

bool check_privacy_set(const PrivacyConstraintSet& P, const AnonymizationMap& map,
                       const Dataset& anon) {
  return std::all_of(P.constraints().begin(), P.constraints().end(),
                     [&](const PrivacyConstraint& p) {
                       return check_privacy_constraint(p, map, anon, P.k());
                     });
}

bool check_utility_set(const UtilityConstraintSet& U, const AnonymizationMap& map) {
  std::vector<std::size_t> block;
  try {
    block = U.block_index(map.vocabulary_size());
  } catch (const Error&) {
    return false;
  }
  for (GroupId g : map.live_groups()) {
    const Itemset& members = map.members(g);
    std::size_t b = block[members.front()];
    for (ItemId item : members) {
      if (block[item] != b) return false;
    }
  }
  const double suppressed = static_cast<double>(map.suppressed().size());
  const double m = static_cast<double>(map.vocabulary_size());
  return 100.0 * suppressed <= U.s * m;
}

std::vector<Itemset> parse_constraints(std::string_view text, const Vocabulary& vocab) {
  std::vector<Itemset> out;
  for (const auto& tokens : tokenize_lines(text)) {
    std::vector<ItemId> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) ids.push_back(vocab.id(t));
    out.push_back(make_itemset(std::move(ids)));
  }
  return out;
}

UtilityConstraintSet parse_utility(std::string_view text, const Vocabulary& vocab, double s) {
  UtilityConstraintSet U;
  U.s = s;
  U.blocks = parse_constraints(text, vocab);
  std::vector<bool> listed(vocab.size(), false);
  for (const auto& block : U.blocks) {
    for (ItemId item : block) {
      if (listed[item]) {
        throw Error(ErrorCode::kNotAPartition,
                    "item '" + vocab.token(item) + "' appears in more than one utility block");
      }
      listed[item] = true;
    }
  }
  Itemset rest;
  for (ItemId i = 0; i < vocab.size(); ++i) {
    if (!listed[i]) rest.push_back(i);
  }
  if (!rest.empty()) U.blocks.push_back(std::move(rest));
  U.block_index(vocab.size());
  return U;
}

std::string format_constraints(const std::vector<Itemset>& itemsets, const Vocabulary& vocab) {
  std::string out;
  for (const auto& items : itemsets) {
    std::vector<std::string> tokens;
    for (ItemId item : items) tokens.push_back(vocab.token(item));
    std::sort(tokens.begin(), tokens.end());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out += ' ';
      out += tokens[i];
    }
    out += '\n';
  }
  return out;
}

}  // namespace coat
