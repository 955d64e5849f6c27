#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coat/anonmap.hpp"
#include "coat/dataset.hpp"

namespace coat {

// A potentially linkable itemset. original_items is fixed as authored;
// live_groups tracks its image under the current map (deduplicated, with
// suppressed items dropped).
struct PrivacyConstraint {
  Itemset original_items;
  std::vector<GroupId> live_groups;  // sorted
};

class PrivacyConstraintSet {
 public:
  PrivacyConstraintSet() = default;
  // Binds the constraints to the identity image. Throws Error(kParse) when
  // k < 2 or a constraint is empty.
  PrivacyConstraintSet(std::vector<Itemset> itemsets, std::size_t k);

  std::size_t k() const { return k_; }
  std::size_t size() const { return constraints_.size(); }
  bool empty() const { return constraints_.empty(); }
  const PrivacyConstraint& operator[](std::size_t i) const { return constraints_[i]; }
  const std::vector<PrivacyConstraint>& constraints() const { return constraints_; }

  // Recomputes every live_groups from original_items via the map.
  void rebind(const AnonymizationMap& map);

  // Incremental maintenance; each returns the indices of the constraints
  // whose live_groups changed.
  std::vector<std::size_t> on_merge(GroupId x, GroupId y, GroupId merged);
  std::vector<std::size_t> on_suppress(GroupId x);

  // Constraint indices currently referencing gid.
  const std::vector<std::size_t>& referencing(GroupId gid) const;

  // True iff every live_groups equals the image recomputed from the map.
  bool consistent_with(const AnonymizationMap& map) const;

 private:
  void index_constraint(std::size_t c);

  std::vector<PrivacyConstraint> constraints_;
  std::size_t k_ = 2;
  std::vector<std::vector<std::size_t>> occurrences_;  // gid -> constraints
};

struct UtilityConstraintSet {
  std::vector<Itemset> blocks;  // a partition of the vocabulary
  double s = 0.0;               // suppression budget, percent of M

  // Block index per original item. Throws Error(kNotAPartition) unless the
  // blocks partition [0, vocabulary_size).
  std::vector<std::size_t> block_index(std::size_t vocabulary_size) const;

  // The coarsest partition: one block holding every item.
  static UtilityConstraintSet coarsest(std::size_t vocabulary_size, double s);
};

// Image of an original itemset under the map: sorted distinct live gids.
std::vector<GroupId> map_itemset(std::span<const ItemId> items, const AnonymizationMap& map);

// Satisfaction of a gid itemset at level k on the anonymized data: support
// >= k, or support 0 with every non-empty proper subset at >= k or 0. The
// empty itemset is satisfied. The subset walk is exponential in the worst
// case; it prunes any subset with support >= k and memoizes visited ones.
bool check_privacy_itemset(std::span<const GroupId> groups, const Dataset& anon, std::size_t k);

bool check_privacy_constraint(const PrivacyConstraint& p, const AnonymizationMap& map,
                              const Dataset& anon, std::size_t k);

bool check_privacy_set(const PrivacyConstraintSet& P, const AnonymizationMap& map,
                       const Dataset& anon);

// Every live group inside one block, and 100*|S|/M <= s.
bool check_utility_set(const UtilityConstraintSet& U, const AnonymizationMap& map);

// One itemset per non-comment line; duplicate tokens within a line collapse.
// Throws Error(kInvalidItem) on unknown tokens.
std::vector<Itemset> parse_constraints(std::string_view text, const Vocabulary& vocab);

// Like parse_constraints, then gathers unlisted items into a final implicit
// block. Throws Error(kNotAPartition) when a token appears in two blocks.
UtilityConstraintSet parse_utility(std::string_view text, const Vocabulary& vocab, double s);

// Privacy-constraint file: one line per itemset, tokens sorted.
std::string format_constraints(const std::vector<Itemset>& itemsets, const Vocabulary& vocab);

}  // namespace coat
