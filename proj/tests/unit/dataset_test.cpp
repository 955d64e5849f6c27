#include <gtest/gtest.h>

#include <filesystem>

#include "coat/dataset.hpp"
#include "coat/error.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

namespace coat {
namespace {

using testing::Clinic;

using testing::error_code_of;

TEST(Vocabulary, InternsInFirstSeenOrder) {
  Vocabulary v;
  EXPECT_EQ(v.intern("z"), 0u);
  EXPECT_EQ(v.intern("y"), 1u);
  EXPECT_EQ(v.intern("z"), 0u);
  EXPECT_EQ(v.size(), 2u);
  EXPECT_EQ(v.token(1), "y");
  EXPECT_EQ(v.lexicographic_order(), (std::vector<ItemId>{1, 0}));
  EXPECT_EQ(error_code_of([&] { v.id("q"); }), ErrorCode::kInvalidItem);
  EXPECT_EQ(error_code_of([] { Vocabulary({"a", "a"}); }), ErrorCode::kParse);
}

TEST(Dataset, ClinicSupports) {
  Clinic f;
  EXPECT_EQ(f.data.num_transactions(), 10u);
  EXPECT_EQ(f.vocab.size(), 8u);
  EXPECT_EQ(f.data.support(f.items({"a"})), 6u);
  EXPECT_EQ(f.data.support(f.items({"a", "b"})), 2u);
  EXPECT_EQ(f.data.support(Itemset{}), 10u);
  EXPECT_EQ(f.data.support(f.items({"a", "b", "c"})), 1u);
}

TEST(Dataset, SupportingTids) {
  Clinic f;
  // Alice, Jim and Ellen are rows 0, 6 and 9.
  EXPECT_EQ(f.data.supporting_tids(f.items({"b"})), (TidSet{0, 6, 9}));
  EXPECT_EQ(f.data.supporting_tids(f.items({"a", "b", "c"})), (TidSet{0}));
  Dataset one(1, {{0}});
  EXPECT_EQ(one.supporting_tids(Itemset{0}), (TidSet{0}));
}

TEST(Dataset, UnknownItemThrows) {
  Clinic f;
  EXPECT_EQ(error_code_of([&] { f.data.support(Itemset{99}); }), ErrorCode::kInvalidItem);
  EXPECT_EQ(error_code_of([] { Dataset(2, {{0, 5}}); }), ErrorCode::kInvalidItem);
}

TEST(ParseDataset, Basics) {
  Corpus c = parse_dataset("a b c\na c\n");
  EXPECT_EQ(c.dataset.num_transactions(), 2u);
  EXPECT_EQ(c.vocabulary.size(), 3u);

  Corpus dup = parse_dataset("x x y\n");
  EXPECT_EQ(dup.dataset.transaction(0), (Itemset{0, 1}));

  Corpus spaced = parse_dataset("# header\n\n  p\tq \r\n\nq\n");
  EXPECT_EQ(spaced.dataset.num_transactions(), 2u);
  EXPECT_EQ(spaced.vocabulary.tokens(), (std::vector<std::string>{"p", "q"}));

  EXPECT_EQ(error_code_of([] { parse_dataset(""); }), ErrorCode::kEmptyDataset);
  EXPECT_EQ(error_code_of([] { parse_dataset("# only a comment\n\n"); }), ErrorCode::kEmptyDataset);
}

TEST(Dataset, MergeAndRemoveKeepIndex) {
  Clinic f;
  Dataset d = f.data;
  d.merge_items(f.id("a"), f.id("b"), 8);
  EXPECT_TRUE(d.index_consistent());
  EXPECT_EQ(d.universe_size(), 9u);
  EXPECT_EQ(d.tids(8).size(), 7u);
  EXPECT_TRUE(d.tids(f.id("a")).empty());
  d.remove_item(f.id("d"));
  EXPECT_TRUE(d.index_consistent());
  EXPECT_TRUE(d.tids(f.id("d")).empty());
  EXPECT_EQ(d.num_transactions(), 10u);
  EXPECT_THROW(d.merge_items(8, f.id("c"), 3), Error);
}

TEST(Dataset, SupportMatchesRowScan) {
  testing::Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t m = rng.between(1, 12);
    Corpus c = testing::random_corpus(rng, m, rng.between(1, 30), 0.3);
    auto rows = oracle::rows_of(c.dataset);
    for (int q = 0; q < 10; ++q) {
      Itemset s = testing::random_itemset(rng, m, 4);
      ASSERT_EQ(c.dataset.support(s), oracle::support(rows, {s.begin(), s.end()}));
      ASSERT_EQ(c.dataset.union_support(s), oracle::any_support(rows, {s.begin(), s.end()}));
    }
  }
}

TEST(TidSets, IntersectUnite) {
  EXPECT_EQ(intersect({1, 3, 5}, {3, 4, 5}), (TidSet{3, 5}));
  EXPECT_EQ(unite({1, 3}, {2, 3}), (TidSet{1, 2, 3}));
  EXPECT_EQ(make_itemset({3, 1, 3}), (Itemset{1, 3}));
}

TEST(TextFiles, RoundTripAndMissing) {
  auto p = std::filesystem::temp_directory_path() / "coat_dataset_test.txt";
  write_text_file(p, "a b\n");
  EXPECT_EQ(read_text_file(p), "a b\n");
  std::filesystem::remove(p);
  EXPECT_EQ(error_code_of([&] { read_text_file(p); }), ErrorCode::kIo);
}

}  // namespace
}  // namespace coat
