#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace coat {

using ItemId = std::uint32_t;
using Tid = std::uint32_t;

// Sorted, duplicate-free.
using Itemset = std::vector<ItemId>;
using TidSet = std::vector<Tid>;

// Bijection between item tokens and dense ids [0, M), ids in first-seen order.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> tokens);

  // Returns the existing id if the token is already known.
  ItemId intern(std::string_view token);

  // Throws Error(kInvalidItem) for unknown tokens.
  ItemId id(std::string_view token) const;
  bool contains(std::string_view token) const;
  const std::string& token(ItemId id) const { return tokens_.at(id); }

  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // Ids ordered by token, the tie-break order used throughout.
  std::vector<ItemId> lexicographic_order() const;

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, ItemId> ids_;
};

// Transactions over an id universe [0, universe_size()) with an inverted
// index item -> sorted tids. Original datasets use item ids as the universe;
// anonymized datasets use group ids. tid == row position, and rows are never
// dropped, so N is fixed at construction.
class Dataset {
 public:
  Dataset() = default;
  // Rows are normalized (sorted, deduplicated). Throws Error(kInvalidItem)
  // for ids outside the universe.
  Dataset(std::size_t universe_size, std::vector<Itemset> rows);

  std::size_t num_transactions() const { return rows_.size(); }
  std::size_t universe_size() const { return index_.size(); }

  const std::vector<Itemset>& transactions() const { return rows_; }
  const Itemset& transaction(Tid tid) const { return rows_.at(tid); }

  const TidSet& tids(ItemId item) const;

  // |intersection of tids(i) over the itemset|; support({}) == N.
  std::size_t support(std::span<const ItemId> itemset) const;
  TidSet supporting_tids(std::span<const ItemId> itemset) const;

  // Size of the union of the items' tid sets.
  std::size_t union_support(std::span<const ItemId> items) const;

  // Replaces items a and b with target in every row that holds either.
  // target must be a fresh id (>= universe_size()); the universe grows to
  // include it.
  void merge_items(ItemId a, ItemId b, ItemId target);

  // Removes the item from every row; its tid set becomes empty.
  void remove_item(ItemId item);

  // True iff the stored index equals one rebuilt from the rows.
  bool index_consistent() const;

  bool operator==(const Dataset& other) const {
    return rows_ == other.rows_ && index_ == other.index_;
  }

 private:
  void check_item(ItemId item) const;

  std::vector<Itemset> rows_;
  std::vector<TidSet> index_;
};

// A parsed corpus: the original dataset plus the token vocabulary.
struct Corpus {
  Vocabulary vocabulary;
  Dataset dataset;
};

// Non-blank, non-comment lines split on runs of spaces/tabs.
std::vector<std::vector<std::string>> tokenize_lines(std::string_view text);

// One transaction per line; duplicates within a line collapse. Throws
// Error(kEmptyDataset) when no transactions are present.
Corpus parse_dataset(std::string_view text);

// Reads a whole file; throws Error(kIo) on failure.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

// Sorted intersection / union helpers shared by the index and the oracles.
TidSet intersect(const TidSet& a, const TidSet& b);
TidSet unite(const TidSet& a, const TidSet& b);

// Minimal normalization: sort + unique.
Itemset make_itemset(std::vector<ItemId> items);

}  // namespace coat
