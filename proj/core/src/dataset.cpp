#include "coat/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "coat/error.hpp"

namespace coat {

Vocabulary::Vocabulary(std::vector<std::string> tokens) {
  for (auto& t : tokens) {
    if (contains(t)) {
      throw Error(ErrorCode::kParse, "duplicate vocabulary token '" + t + "'");
    }
    intern(t);
  }
}

ItemId Vocabulary::intern(std::string_view token) {
  auto it = ids_.find(std::string(token));
  if (it != ids_.end()) return it->second;
  auto id = static_cast<ItemId>(tokens_.size());
  tokens_.emplace_back(token);
  ids_.emplace(tokens_.back(), id);
  return id;
}

ItemId Vocabulary::id(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) {
    throw Error(ErrorCode::kInvalidItem, "unknown item '" + std::string(token) + "'");
  }
  return it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return ids_.count(std::string(token)) != 0;
}

std::vector<ItemId> Vocabulary::lexicographic_order() const {
  std::vector<ItemId> order(tokens_.size());
  std::iota(order.begin(), order.end(), ItemId{0});
  std::sort(order.begin(), order.end(),
            [this](ItemId a, ItemId b) { return tokens_[a] < tokens_[b]; });
  return order;
}

Itemset make_itemset(std::vector<ItemId> items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return items;
}

TidSet intersect(const TidSet& a, const TidSet& b) {
  TidSet out;
  out.reserve(std::min(a.size(), b.size()));
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

TidSet unite(const TidSet& a, const TidSet& b) {
  TidSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Dataset::Dataset(std::size_t universe_size, std::vector<Itemset> rows)
    : rows_(std::move(rows)), index_(universe_size) {
  for (auto& row : rows_) {
    row = make_itemset(std::move(row));
  }
  for (Tid tid = 0; tid < rows_.size(); ++tid) {
    for (ItemId item : rows_[tid]) {
      check_item(item);
      index_[item].push_back(tid);
    }
  }
}

void Dataset::check_item(ItemId item) const {
  if (item >= index_.size()) {
    throw Error(ErrorCode::kInvalidItem, "item id " + std::to_string(item) +
                                             " outside universe of size " +
                                             std::to_string(index_.size()));
  }
}

const TidSet& Dataset::tids(ItemId item) const {
  check_item(item);
  return index_[item];
}

TidSet Dataset::supporting_tids(std::span<const ItemId> itemset) const {
  if (itemset.empty()) {
    TidSet all(rows_.size());
    std::iota(all.begin(), all.end(), Tid{0});
    return all;
  }
  for (ItemId item : itemset) check_item(item);

  // Intersect starting from the rarest item so the running set stays small.
  std::vector<ItemId> order(itemset.begin(), itemset.end());
  std::sort(order.begin(), order.end(), [this](ItemId a, ItemId b) {
    return index_[a].size() < index_[b].size();
  });
  TidSet acc = index_[order.front()];
  for (std::size_t i = 1; i < order.size() && !acc.empty(); ++i) {
    acc = intersect(acc, index_[order[i]]);
  }
  return acc;
}

std::size_t Dataset::support(std::span<const ItemId> itemset) const {
  if (itemset.empty()) return rows_.size();
  if (itemset.size() == 1) return tids(itemset.front()).size();
  return supporting_tids(itemset).size();
}

std::size_t Dataset::union_support(std::span<const ItemId> items) const {
  TidSet acc;
  for (ItemId item : items) acc = unite(acc, tids(item));
  return acc.size();
}

void Dataset::merge_items(ItemId a, ItemId b, ItemId target) {
  check_item(a);
  check_item(b);
  if (a == b || target < index_.size()) {
    throw Error(ErrorCode::kInvalidMerge, "merge target must be a fresh id");
  }
  index_.resize(target + std::size_t{1});
  TidSet merged = unite(index_[a], index_[b]);
  for (Tid tid : merged) {
    auto& row = rows_[tid];
    std::erase_if(row, [&](ItemId x) { return x == a || x == b; });
    // target is the largest id in the universe, so appending keeps rows sorted.
    row.push_back(target);
  }
  index_[target] = std::move(merged);
  index_[a].clear();
  index_[b].clear();
}

void Dataset::remove_item(ItemId item) {
  check_item(item);
  for (Tid tid : index_[item]) {
    auto& row = rows_[tid];
    row.erase(std::lower_bound(row.begin(), row.end(), item));
  }
  index_[item].clear();
}

bool Dataset::index_consistent() const {
  std::vector<TidSet> rebuilt(index_.size());
  for (Tid tid = 0; tid < rows_.size(); ++tid) {
    for (ItemId item : rows_[tid]) {
      if (item >= rebuilt.size()) return false;
      rebuilt[item].push_back(tid);
    }
  }
  return rebuilt == index_;
}

std::vector<std::vector<std::string>> tokenize_lines(std::string_view text) {
  std::vector<std::vector<std::string>> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;

    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
      if (i > start) tokens.emplace_back(line.substr(start, i - start));
    }
    if (tokens.empty() || tokens.front().front() == '#') continue;
    lines.push_back(std::move(tokens));
  }
  return lines;
}

Corpus parse_dataset(std::string_view text) {
  Corpus corpus;
  std::vector<Itemset> rows;
  for (const auto& tokens : tokenize_lines(text)) {
    std::vector<ItemId> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) ids.push_back(corpus.vocabulary.intern(t));
    rows.push_back(make_itemset(std::move(ids)));
  }
  if (rows.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "dataset contains no transactions");
  }
  corpus.dataset = Dataset(corpus.vocabulary.size(), std::move(rows));
  return corpus;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

}  // namespace coat
