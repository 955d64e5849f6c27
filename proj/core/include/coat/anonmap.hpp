#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coat/dataset.hpp"

namespace coat {

using GroupId = std::uint32_t;

inline constexpr GroupId kSuppressed = std::numeric_limits<GroupId>::max();

struct GeneralizedItem {
  GroupId gid = 0;
  Itemset members;  // original item ids, non-empty
};

// The anonymization function: a partition of the retained original items
// into generalized items, plus the suppressed set S.
//
// Group ids are never reused. The identity map assigns gid == item id; every
// merge allocates the next fresh gid. Dead groups keep their member list so
// that historical gids (e.g. in a trace) still render.
class AnonymizationMap {
 public:
  AnonymizationMap() = default;

  static AnonymizationMap identity(std::size_t vocabulary_size);

  // Builds a map from explicit groups (original item ids) and suppressed
  // items; gids are assigned in the order given. Throws Error(kInvalidMap)
  // unless groups and suppressed partition [0, vocabulary_size).
  static AnonymizationMap from_partition(std::size_t vocabulary_size,
                                         const std::vector<Itemset>& groups,
                                         const Itemset& suppressed);

  GroupId merge(GroupId x, GroupId y);

  // Moves every member of x into S and returns them.
  Itemset suppress_group(GroupId x);

  // Group of an original item, or kSuppressed.
  GroupId lookup(ItemId item) const { return lookup_.at(item); }

  bool is_live(GroupId gid) const { return gid < groups_.size() && live_[gid]; }
  const Itemset& members(GroupId gid) const { return groups_.at(gid); }

  // Live gids in ascending order.
  std::vector<GroupId> live_groups() const;
  std::size_t num_live_groups() const { return num_live_; }

  const Itemset& suppressed() const { return suppressed_; }
  std::size_t vocabulary_size() const { return lookup_.size(); }

  // Upper bound on every gid ever allocated; the universe of apply().
  std::size_t gid_capacity() const { return groups_.size(); }

  // Replaces each row's items by their groups; suppressed items vanish.
  // Throws Error(kInvalidMap) if the dataset universe differs from the
  // vocabulary size.
  Dataset apply(const Dataset& original) const;

  bool is_identity() const;

  // Groups disjoint, groups ∪ S = I, lookup consistent.
  bool partition_consistent() const;

  // Same partition and S, ignoring gid numbering.
  bool same_partition(const AnonymizationMap& other) const;

  bool operator==(const AnonymizationMap& other) const {
    return groups_ == other.groups_ && live_ == other.live_ &&
           suppressed_ == other.suppressed_ && lookup_ == other.lookup_;
  }

 private:
  std::vector<Itemset> groups_;
  std::vector<bool> live_;
  std::vector<GroupId> lookup_;
  Itemset suppressed_;
  std::size_t num_live_ = 0;
};

// Bare token for singletons, "(a,b)" for larger groups; members sorted by
// token.
std::string group_display(const AnonymizationMap& map, GroupId gid, const Vocabulary& vocab);

// Smallest member token; the canonical ordering key of a group.
const std::string& group_sort_key(const AnonymizationMap& map, GroupId gid,
                                  const Vocabulary& vocab);

// Sorts gids by smallest member token, then by display.
void sort_groups_canonically(std::vector<GroupId>& gids, const AnonymizationMap& map,
                             const Vocabulary& vocab);

// Map export: one "gid<TAB>tokens" line per live group in canonical order,
// then "SUPPRESSED<TAB>tokens".
std::string format_map(const AnonymizationMap& map, const Vocabulary& vocab);

// Inverse of format_map. gids in the file are labels only; groups are
// renumbered in file order.
AnonymizationMap parse_map(std::string_view text, const Vocabulary& vocab);

// One line per row in tid order: group displays in canonical order,
// space-separated; empty rows are empty lines.
std::string format_anonymized(const Dataset& anon, const AnonymizationMap& map,
                              const Vocabulary& vocab);

}  // namespace coat
