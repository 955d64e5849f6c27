#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coat/anonmap.hpp"
#include "coat/dataset.hpp"

namespace coat {

// Item hierarchy whose leaves are exactly the vocabulary items.
class Taxonomy {
 public:
  using NodeId = std::size_t;

  // Accepts either a `child<TAB>parent` edge list or an indentation tree
  // (one label per line, depth given by leading whitespace). Throws
  // Error(kTaxonomyMismatch) when the leaves differ from the vocabulary,
  // Error(kParse) on malformed trees.
  static Taxonomy parse(std::string_view text, const Vocabulary& vocab);

  NodeId root() const { return root_; }
  NodeId leaf(ItemId item) const { return leaf_of_item_.at(item); }
  std::size_t leaf_count(NodeId node) const { return leaf_count_.at(node); }
  NodeId parent(NodeId node) const { return parent_.at(node); }
  const std::string& label(NodeId node) const { return labels_.at(node); }
  std::size_t num_nodes() const { return labels_.size(); }
  bool is_ancestor(NodeId ancestor, NodeId node) const;

  NodeId lca(NodeId a, NodeId b) const;
  NodeId lca(std::span<const ItemId> items) const;

 private:
  static Taxonomy build(std::vector<std::string> labels, std::vector<NodeId> parent,
                        const Vocabulary& vocab);

  std::vector<std::string> labels_;
  std::vector<NodeId> parent_;  // root is its own parent
  std::vector<std::size_t> depth_;
  std::vector<std::size_t> leaf_count_;
  std::vector<NodeId> leaf_of_item_;
  NodeId root_ = 0;
};

// Semantic weight of a generalized item, in [0,1].
class WeightPolicy {
 public:
  static WeightPolicy uniform(double c = 1.0);
  static WeightPolicy taxonomy_lca(std::shared_ptr<const Taxonomy> taxonomy);

  bool uses_taxonomy() const { return taxonomy_ != nullptr; }
  const Taxonomy* taxonomy() const { return taxonomy_.get(); }

  // uniform: c. taxonomy: leaves under the members' LCA divided by M.
  double weight(std::span<const ItemId> members, std::size_t vocabulary_size) const;

 private:
  double constant_ = 1.0;
  std::shared_ptr<const Taxonomy> taxonomy_;
};

// Penalty charged per suppressed original item.
class PenaltyPolicy {
 public:
  enum class Kind { kNormalizedSupport, kSupport, kConstant };

  static PenaltyPolicy normalized_support() { return PenaltyPolicy(Kind::kNormalizedSupport, 0); }
  static PenaltyPolicy support() { return PenaltyPolicy(Kind::kSupport, 0); }
  static PenaltyPolicy constant(double c);

  Kind kind() const { return kind_; }
  double penalty(ItemId item, const Dataset& original) const;

 private:
  PenaltyPolicy(Kind kind, double c) : kind_(kind), constant_(c) {}
  Kind kind_;
  double constant_;
};

// (2^g - 1) / (2^M - 1), exact for M <= 62 and via exponent arithmetic
// beyond (underflows to 0 once M - g exceeds the double range).
double size_ratio(std::size_t group_size, std::size_t vocabulary_size);

// log of (2^g - 1) * w * sup, the candidate-dependent part of UL at fixed M
// and N. Ordering by this key equals ordering by UL without underflow.
// Returns -inf when w or sup is 0.
double ul_log_key(std::size_t group_size, double weight, std::size_t support);

// UL of a group with explicit support; 0 for singletons.
double ul_value(std::size_t group_size, double weight, std::size_t support, std::size_t n,
                std::size_t m);

// UL of a live group using its support in the anonymized data; singletons
// contribute 0.
double ul_item(const AnonymizationMap& map, GroupId gid, const Dataset& anon,
               const WeightPolicy& policy, std::size_t n, std::size_t m);

// Sum of ul_item over live groups plus penalties over S.
double ul_dataset(const AnonymizationMap& map, const Dataset& anon, const WeightPolicy& weights,
                  const PenaltyPolicy& penalties, const Dataset& original);

// 100 * |S| / M.
double suppressed_percent(const AnonymizationMap& map);

}  // namespace coat
