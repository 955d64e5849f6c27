#include "coat/anonmap.hpp"

#include <algorithm>
#include <charconv>

#include "coat/error.hpp"

namespace coat {

AnonymizationMap AnonymizationMap::identity(std::size_t vocabulary_size) {
  AnonymizationMap map;
  map.groups_.reserve(vocabulary_size);
  map.lookup_.resize(vocabulary_size);
  for (ItemId i = 0; i < vocabulary_size; ++i) {
    map.groups_.push_back({i});
    map.lookup_[i] = i;
  }
  map.live_.assign(vocabulary_size, true);
  map.num_live_ = vocabulary_size;
  return map;
}

AnonymizationMap AnonymizationMap::from_partition(std::size_t vocabulary_size,
                                                  const std::vector<Itemset>& groups,
                                                  const Itemset& suppressed) {
  AnonymizationMap map;
  map.lookup_.assign(vocabulary_size, kSuppressed);
  std::vector<bool> seen(vocabulary_size, false);
  auto claim = [&](ItemId item) {
    if (item >= vocabulary_size || seen[item]) {
      throw Error(ErrorCode::kInvalidMap, "map does not partition the vocabulary");
    }
    seen[item] = true;
  };
  for (const auto& g : groups) {
    Itemset members = make_itemset(g);
    if (members.empty()) throw Error(ErrorCode::kInvalidMap, "empty group in map");
    auto gid = static_cast<GroupId>(map.groups_.size());
    for (ItemId item : members) {
      claim(item);
      map.lookup_[item] = gid;
    }
    map.groups_.push_back(std::move(members));
    map.live_.push_back(true);
  }
  map.suppressed_ = make_itemset(suppressed);
  for (ItemId item : map.suppressed_) claim(item);
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw Error(ErrorCode::kInvalidMap, "map does not cover the vocabulary");
  }
  map.num_live_ = map.groups_.size();
  return map;
}

GroupId AnonymizationMap::merge(GroupId x, GroupId y) {
  if (x == y || !is_live(x) || !is_live(y)) {
    throw Error(ErrorCode::kInvalidMerge,
                "cannot merge groups " + std::to_string(x) + " and " + std::to_string(y));
  }
  auto merged = static_cast<GroupId>(groups_.size());
  Itemset members;
  std::set_union(groups_[x].begin(), groups_[x].end(), groups_[y].begin(), groups_[y].end(),
                 std::back_inserter(members));
  for (ItemId item : members) lookup_[item] = merged;
  groups_.push_back(std::move(members));
  live_.push_back(true);
  live_[x] = false;
  live_[y] = false;
  --num_live_;
  return merged;
}

Itemset AnonymizationMap::suppress_group(GroupId x) {
  if (!is_live(x)) {
    throw Error(ErrorCode::kInvalidSuppress, "group " + std::to_string(x) + " is not live");
  }
  const Itemset& members = groups_[x];
  for (ItemId item : members) lookup_[item] = kSuppressed;
  Itemset merged;
  std::set_union(suppressed_.begin(), suppressed_.end(), members.begin(), members.end(),
                 std::back_inserter(merged));
  suppressed_ = std::move(merged);
  live_[x] = false;
  --num_live_;
  return members;
}

std::vector<GroupId> AnonymizationMap::live_groups() const {
  std::vector<GroupId> out;
  out.reserve(num_live_);
  for (GroupId g = 0; g < groups_.size(); ++g) {
    if (live_[g]) out.push_back(g);
  }
  return out;
}

Dataset AnonymizationMap::apply(const Dataset& original) const {
  if (original.universe_size() != lookup_.size()) {
    throw Error(ErrorCode::kInvalidMap, "map covers " + std::to_string(lookup_.size()) +
                                            " items but dataset has " +
                                            std::to_string(original.universe_size()));
  }
  std::vector<Itemset> rows;
  rows.reserve(original.num_transactions());
  for (const auto& row : original.transactions()) {
    std::vector<ItemId> mapped;
    mapped.reserve(row.size());
    for (ItemId item : row) {
      if (lookup_[item] != kSuppressed) mapped.push_back(lookup_[item]);
    }
    rows.push_back(make_itemset(std::move(mapped)));
  }
  return Dataset(groups_.size(), std::move(rows));
}

bool AnonymizationMap::is_identity() const {
  if (!suppressed_.empty()) return false;
  for (GroupId g = 0; g < groups_.size(); ++g) {
    if (live_[g] && groups_[g].size() != 1) return false;
  }
  return true;
}

bool AnonymizationMap::partition_consistent() const {
  std::vector<int> owner_count(lookup_.size(), 0);
  std::size_t live = 0;
  for (GroupId g = 0; g < groups_.size(); ++g) {
    if (!live_[g]) continue;
    ++live;
    if (groups_[g].empty()) return false;
    for (ItemId item : groups_[g]) {
      if (item >= lookup_.size() || lookup_[item] != g) return false;
      ++owner_count[item];
    }
  }
  for (ItemId item : suppressed_) {
    if (item >= lookup_.size() || lookup_[item] != kSuppressed) return false;
    ++owner_count[item];
  }
  return live == num_live_ &&
         std::all_of(owner_count.begin(), owner_count.end(), [](int c) { return c == 1; });
}

bool AnonymizationMap::same_partition(const AnonymizationMap& other) const {
  if (vocabulary_size() != other.vocabulary_size() || suppressed_ != other.suppressed_) {
    return false;
  }
  auto collect = [](const AnonymizationMap& m) {
    std::vector<Itemset> out;
    for (GroupId g : m.live_groups()) out.push_back(m.members(g));
    std::sort(out.begin(), out.end());
    return out;
  };
  return collect(*this) == collect(other);
}

namespace {

std::vector<std::string> member_tokens(const AnonymizationMap& map, GroupId gid,
                                       const Vocabulary& vocab) {
  std::vector<std::string> tokens;
  for (ItemId item : map.members(gid)) tokens.push_back(vocab.token(item));
  std::sort(tokens.begin(), tokens.end());
  return tokens;
}

}  // namespace

std::string group_display(const AnonymizationMap& map, GroupId gid, const Vocabulary& vocab) {
  auto tokens = member_tokens(map, gid, vocab);
  if (tokens.size() == 1) return tokens.front();
  std::string out = "(";
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ',';
    out += tokens[i];
  }
  out += ')';
  return out;
}

const std::string& group_sort_key(const AnonymizationMap& map, GroupId gid,
                                  const Vocabulary& vocab) {
  const Itemset& members = map.members(gid);
  ItemId best = members.front();
  for (ItemId item : members) {
    if (vocab.token(item) < vocab.token(best)) best = item;
  }
  return vocab.token(best);
}

void sort_groups_canonically(std::vector<GroupId>& gids, const AnonymizationMap& map,
                             const Vocabulary& vocab) {
  std::vector<std::pair<std::pair<std::string, std::string>, GroupId>> keyed;
  keyed.reserve(gids.size());
  for (GroupId g : gids) {
    keyed.push_back({{group_sort_key(map, g, vocab), group_display(map, g, vocab)}, g});
  }
  std::sort(keyed.begin(), keyed.end());
  for (std::size_t i = 0; i < gids.size(); ++i) gids[i] = keyed[i].second;
}

std::string format_map(const AnonymizationMap& map, const Vocabulary& vocab) {
  auto gids = map.live_groups();
  sort_groups_canonically(gids, map, vocab);
  std::string out;
  for (GroupId g : gids) {
    out += std::to_string(g);
    out += '\t';
    auto tokens = member_tokens(map, g, vocab);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out += ' ';
      out += tokens[i];
    }
    out += '\n';
  }
  std::vector<std::string> suppressed;
  for (ItemId item : map.suppressed()) suppressed.push_back(vocab.token(item));
  std::sort(suppressed.begin(), suppressed.end());
  out += "SUPPRESSED\t";
  for (std::size_t i = 0; i < suppressed.size(); ++i) {
    if (i) out += ' ';
    out += suppressed[i];
  }
  out += '\n';
  return out;
}

AnonymizationMap parse_map(std::string_view text, const Vocabulary& vocab) {
  std::vector<Itemset> groups;
  Itemset suppressed;
  bool saw_suppressed = false;
  for (const auto& tokens : tokenize_lines(text)) {
    std::vector<ItemId> ids;
    try {
      for (std::size_t i = 1; i < tokens.size(); ++i) ids.push_back(vocab.id(tokens[i]));
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidMap, std::string("map references ") + e.what());
    }
    if (tokens.front() == "SUPPRESSED") {
      if (saw_suppressed) throw Error(ErrorCode::kParse, "duplicate SUPPRESSED line in map");
      saw_suppressed = true;
      suppressed = make_itemset(std::move(ids));
      continue;
    }
    const auto& label = tokens.front();
    unsigned long long value = 0;
    auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), value);
    if (ec != std::errc() || ptr != label.data() + label.size()) {
      throw Error(ErrorCode::kParse, "bad group id '" + label + "' in map");
    }
    if (ids.empty()) throw Error(ErrorCode::kParse, "group " + label + " has no members");
    groups.push_back(make_itemset(std::move(ids)));
  }
  return AnonymizationMap::from_partition(vocab.size(), groups, suppressed);
}

std::string format_anonymized(const Dataset& anon, const AnonymizationMap& map,
                              const Vocabulary& vocab) {
  auto gids = map.live_groups();
  sort_groups_canonically(gids, map, vocab);
  std::vector<std::size_t> rank(map.gid_capacity(), 0);
  std::vector<std::string> display(map.gid_capacity());
  for (std::size_t r = 0; r < gids.size(); ++r) {
    rank[gids[r]] = r;
    display[gids[r]] = group_display(map, gids[r], vocab);
  }
  std::string out;
  for (const auto& row : anon.transactions()) {
    std::vector<GroupId> cells(row.begin(), row.end());
    for (GroupId g : cells) {
      if (!map.is_live(g)) throw Error(ErrorCode::kInvalidMap, "row references a dead group");
    }
    std::sort(cells.begin(), cells.end(),
              [&](GroupId a, GroupId b) { return rank[a] < rank[b]; });
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ' ';
      out += display[cells[i]];
    }
    out += '\n';
  }
  return out;
}

}  // namespace coat
