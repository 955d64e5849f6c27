#include "coat/metrics.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>

#include "coat/error.hpp"

namespace coat {

namespace {

constexpr Taxonomy::NodeId kNoParent = static_cast<Taxonomy::NodeId>(-1);

struct RawLine {
  std::size_t indent;
  std::string body;
};

std::vector<RawLine> raw_lines(std::string_view text) {
  std::vector<RawLine> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.remove_suffix(1);
    }
    std::size_t indent = 0;
    while (indent < line.size() && (line[indent] == ' ' || line[indent] == '\t')) ++indent;
    if (indent == line.size() || line[indent] == '#') continue;
    out.push_back({indent, std::string(line.substr(indent))});
  }
  return out;
}

}  // namespace

Taxonomy Taxonomy::parse(std::string_view text, const Vocabulary& vocab) {
  auto lines = raw_lines(text);
  if (lines.empty()) throw Error(ErrorCode::kParse, "taxonomy is empty");

  bool edge_list = false;
  for (const auto& l : lines) {
    if (l.body.find('\t') != std::string::npos) edge_list = true;
  }

  std::vector<std::string> labels;
  std::vector<NodeId> parent;
  std::unordered_map<std::string, NodeId> by_label;
  auto node = [&](const std::string& label) {
    auto [it, inserted] = by_label.emplace(label, labels.size());
    if (inserted) {
      labels.push_back(label);
      parent.push_back(kNoParent);
    }
    return it->second;
  };

  if (edge_list) {
    for (const auto& l : lines) {
      std::size_t tab = l.body.find('\t');
      if (tab == std::string::npos) {
        throw Error(ErrorCode::kParse, "taxonomy edge line without a tab: '" + l.body + "'");
      }
      std::string child = l.body.substr(0, tab);
      std::string par = l.body.substr(tab + 1);
      while (!par.empty() && (par.front() == '\t' || par.front() == ' ')) par.erase(0, 1);
      while (!child.empty() && child.back() == ' ') child.pop_back();
      if (child.empty() || par.empty() || par.find('\t') != std::string::npos) {
        throw Error(ErrorCode::kParse, "malformed taxonomy edge '" + l.body + "'");
      }
      NodeId c = node(child);
      NodeId p = node(par);
      if (parent[c] != kNoParent) {
        throw Error(ErrorCode::kParse, "taxonomy node '" + child + "' has two parents");
      }
      parent[c] = p;
    }
  } else {
    std::vector<std::pair<std::size_t, NodeId>> stack;
    bool have_root = false;
    for (const auto& l : lines) {
      if (by_label.count(l.body)) {
        throw Error(ErrorCode::kParse, "duplicate taxonomy label '" + l.body + "'");
      }
      while (!stack.empty() && stack.back().first >= l.indent) stack.pop_back();
      NodeId n = node(l.body);
      if (stack.empty()) {
        if (have_root) throw Error(ErrorCode::kParse, "taxonomy has more than one root");
        have_root = true;
      } else {
        parent[n] = stack.back().second;
      }
      stack.emplace_back(l.indent, n);
    }
  }
  return build(std::move(labels), std::move(parent), vocab);
}

Taxonomy Taxonomy::build(std::vector<std::string> labels, std::vector<NodeId> parent,
                         const Vocabulary& vocab) {
  Taxonomy t;
  const std::size_t n = labels.size();
  std::size_t roots = 0;
  for (NodeId i = 0; i < n; ++i) {
    if (parent[i] == kNoParent) {
      t.root_ = i;
      ++roots;
    }
  }
  if (roots != 1) throw Error(ErrorCode::kParse, "taxonomy must have exactly one root");
  parent[t.root_] = t.root_;

  // Depths by walking up; a walk longer than n means a cycle.
  t.depth_.assign(n, 0);
  for (NodeId i = 0; i < n; ++i) {
    std::size_t d = 0;
    for (NodeId cur = i; cur != t.root_; cur = parent[cur]) {
      if (++d > n) throw Error(ErrorCode::kParse, "taxonomy contains a cycle");
    }
    t.depth_[i] = d;
  }

  std::vector<std::size_t> children(n, 0);
  for (NodeId i = 0; i < n; ++i) {
    if (i != t.root_) ++children[parent[i]];
  }
  t.leaf_of_item_.assign(vocab.size(), kNoParent);
  t.leaf_count_.assign(n, 0);
  for (NodeId i = 0; i < n; ++i) {
    bool is_leaf = children[i] == 0;
    bool is_item = vocab.contains(labels[i]);
    if (is_leaf != is_item) {
      throw Error(ErrorCode::kTaxonomyMismatch,
                  is_leaf ? "taxonomy leaf '" + labels[i] + "' is not a dataset item"
                          : "dataset item '" + labels[i] + "' is an internal taxonomy node");
    }
    if (!is_leaf) continue;
    t.leaf_of_item_[vocab.id(labels[i])] = i;
    for (NodeId cur = i;; cur = parent[cur]) {
      ++t.leaf_count_[cur];
      if (cur == t.root_) break;
    }
  }
  for (ItemId item = 0; item < vocab.size(); ++item) {
    if (t.leaf_of_item_[item] == kNoParent) {
      throw Error(ErrorCode::kTaxonomyMismatch,
                  "dataset item '" + vocab.token(item) + "' missing from taxonomy");
    }
  }
  t.labels_ = std::move(labels);
  t.parent_ = std::move(parent);
  return t;
}

bool Taxonomy::is_ancestor(NodeId ancestor, NodeId node) const {
  while (depth_[node] > depth_[ancestor]) node = parent_[node];
  return node == ancestor;
}

Taxonomy::NodeId Taxonomy::lca(NodeId a, NodeId b) const {
  while (depth_[a] > depth_[b]) a = parent_[a];
  while (depth_[b] > depth_[a]) b = parent_[b];
  while (a != b) {
    a = parent_[a];
    b = parent_[b];
  }
  return a;
}

Taxonomy::NodeId Taxonomy::lca(std::span<const ItemId> items) const {
  if (items.empty()) return root_;
  for (ItemId item : items) {
    if (item >= leaf_of_item_.size()) {
      throw Error(ErrorCode::kTaxonomyMismatch, "item id outside the taxonomy");
    }
  }
  NodeId acc = leaf_of_item_[items.front()];
  for (std::size_t i = 1; i < items.size(); ++i) acc = lca(acc, leaf_of_item_[items[i]]);
  return acc;
}

WeightPolicy WeightPolicy::uniform(double c) {
  if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorCode::kParse, "uniform weight must be in [0,1]");
  WeightPolicy p;
  p.constant_ = c;
  return p;
}

WeightPolicy WeightPolicy::taxonomy_lca(std::shared_ptr<const Taxonomy> taxonomy) {
  WeightPolicy p;
  p.taxonomy_ = std::move(taxonomy);
  return p;
}

double WeightPolicy::weight(std::span<const ItemId> members, std::size_t vocabulary_size) const {
  if (!taxonomy_) return constant_;
  auto node = taxonomy_->lca(members);
  return static_cast<double>(taxonomy_->leaf_count(node)) / static_cast<double>(vocabulary_size);
}

PenaltyPolicy PenaltyPolicy::constant(double c) {
  if (!(c >= 0.0)) throw Error(ErrorCode::kParse, "penalty constant must be non-negative");
  return PenaltyPolicy(Kind::kConstant, c);
}

double PenaltyPolicy::penalty(ItemId item, const Dataset& original) const {
  switch (kind_) {
    case Kind::kNormalizedSupport:
      return static_cast<double>(original.tids(item).size()) /
             static_cast<double>(original.num_transactions());
    case Kind::kSupport:
      return static_cast<double>(original.tids(item).size());
    case Kind::kConstant:
      return constant_;
  }
  return 0.0;
}

double size_ratio(std::size_t group_size, std::size_t vocabulary_size) {
  if (vocabulary_size <= 62) {
    auto num = (std::uint64_t{1} << group_size) - 1;
    auto den = (std::uint64_t{1} << vocabulary_size) - 1;
    return static_cast<double>(num) / static_cast<double>(den);
  }
  // 2^(g-M) * (1 - 2^-g) / (1 - 2^-M)
  const double g = static_cast<double>(group_size);
  const double m = static_cast<double>(vocabulary_size);
  return std::exp2(g - m) * (-std::expm1(-g * std::log(2.0))) /
         (-std::expm1(-m * std::log(2.0)));
}

double ul_log_key(std::size_t group_size, double weight, std::size_t support) {
  if (weight <= 0.0 || support == 0) return -std::numeric_limits<double>::infinity();
  const double g = static_cast<double>(group_size);
  double log_size = group_size <= 62
                        ? std::log(static_cast<double>((std::uint64_t{1} << group_size) - 1))
                        : g * std::log(2.0) + std::log1p(-std::exp2(-g));
  return log_size + std::log(weight) + std::log(static_cast<double>(support));
}

double ul_value(std::size_t group_size, double weight, std::size_t support, std::size_t n,
                std::size_t m) {
  if (group_size <= 1) return 0.0;
  return size_ratio(group_size, m) * weight *
         (static_cast<double>(support) / static_cast<double>(n));
}

double ul_item(const AnonymizationMap& map, GroupId gid, const Dataset& anon,
               const WeightPolicy& policy, std::size_t n, std::size_t m) {
  const Itemset& members = map.members(gid);
  if (members.size() <= 1) return 0.0;
  return ul_value(members.size(), policy.weight(members, m), anon.tids(gid).size(), n, m);
}

double ul_dataset(const AnonymizationMap& map, const Dataset& anon, const WeightPolicy& weights,
                  const PenaltyPolicy& penalties, const Dataset& original) {
  const std::size_t n = original.num_transactions();
  const std::size_t m = map.vocabulary_size();
  double total = 0.0;
  for (GroupId g : map.live_groups()) total += ul_item(map, g, anon, weights, n, m);
  for (ItemId item : map.suppressed()) total += penalties.penalty(item, original);
  return total;
}

double suppressed_percent(const AnonymizationMap& map) {
  return 100.0 * static_cast<double>(map.suppressed().size()) /
         static_cast<double>(map.vocabulary_size());
}

}  // namespace coat
