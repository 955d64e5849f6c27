#include <gtest/gtest.h>

#include <cmath>

#include "coat/metrics.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

namespace coat {
namespace {

using testing::error_code_of;
using testing::Clinic;

TEST(Taxonomy, IndentedTreeWeights) {
  Clinic f;
  auto tax = f.taxonomy();
  auto w = WeightPolicy::taxonomy_lca(tax);
  EXPECT_EQ(w.weight(f.items({"a", "b"}), 8), 0.375);
  EXPECT_EQ(w.weight(f.items({"g", "h"}), 8), 5.0 / 8.0);
  EXPECT_EQ(w.weight(f.items({"c", "d"}), 8), 1.0);
  EXPECT_EQ(tax->label(tax->lca(f.items({"a", "c"}))), "(a,b,c)");
  EXPECT_TRUE(tax->is_ancestor(tax->root(), tax->leaf(f.id("e"))));
  EXPECT_EQ(tax->leaf_count(tax->root()), 8u);
}

TEST(Taxonomy, EdgeListMatchesTree) {
  Clinic f;
  auto edges = Taxonomy::parse(
      "a\tab\nb\tab\nab\tabc\nc\tabc\nabc\troot\nd\trest\ne\trest\nf\trest\ng\trest\nh\trest\n"
      "rest\troot\n",
      f.vocab);
  EXPECT_EQ(edges.leaf_count(edges.lca(f.items({"a", "b"}))), 2u);
  EXPECT_EQ(edges.leaf_count(edges.lca(f.items({"a", "c"}))), 3u);
  EXPECT_EQ(edges.leaf_count(edges.lca(f.items({"g", "h"}))), 5u);
}

TEST(Taxonomy, RejectsMalformed) {
  Clinic f;
  // Leaf x is not an item; e..h missing.
  EXPECT_EQ(error_code_of([&] { Taxonomy::parse("r\n a\n b\n x\n", f.vocab); }),
            ErrorCode::kTaxonomyMismatch);
  Vocabulary ab({"a", "b"});
  EXPECT_EQ(error_code_of([&] { Taxonomy::parse("a\tr\nb\ts\n", ab); }), ErrorCode::kParse);
  EXPECT_EQ(error_code_of([&] { Taxonomy::parse("a\tb\nb\ta\n", ab); }), ErrorCode::kParse);
  EXPECT_EQ(error_code_of([&] { Taxonomy::parse("r\n a\n b\nq\n", ab); }), ErrorCode::kParse);
  // An item may not have children.
  EXPECT_EQ(error_code_of([&] { Taxonomy::parse("r\n a\n  b\n", ab); }),
            ErrorCode::kTaxonomyMismatch);
}

TEST(Weights, UniformAndRange) {
  auto u = WeightPolicy::uniform(1.0);
  EXPECT_EQ(u.weight(Itemset{3}, 8), 1.0);
  EXPECT_EQ(WeightPolicy::uniform(0.25).weight(Itemset{1, 2}, 8), 0.25);
  EXPECT_THROW(WeightPolicy::uniform(1.5), Error);
}

TEST(UlItem, PublishedGroups) {
  Clinic f;
  auto map = f.published_map();
  Dataset anon = map.apply(f.data);
  auto w = WeightPolicy::taxonomy_lca(f.taxonomy());
  GroupId ab = map.lookup(f.id("a"));
  GroupId gh = map.lookup(f.id("g"));
  EXPECT_NEAR(ul_item(map, ab, anon, w, 8, 8), 0.004, 5e-4);
  EXPECT_EQ(ul_item(map, ab, anon, w, 8, 8), (3.0 / 255.0) * 0.375 * (7.0 / 8.0));
  EXPECT_EQ(ul_item(map, map.lookup(f.id("c")), anon, w, 10, 8), 0.0);

  auto rows = oracle::apply_map(oracle::rows_of(f.data), map);
  std::size_t gh_rows = oracle::support(rows, {gh});
  EXPECT_EQ(gh_rows, 6u);
  EXPECT_EQ(ul_item(map, gh, anon, w, 10, 8), (3.0 / 255.0) * (5.0 / 8.0) * (6.0 / 10.0));
}

TEST(UlDataset, PenaltiesAndAdditivity) {
  Clinic f;
  auto identity = AnonymizationMap::identity(8);
  auto w = WeightPolicy::uniform(1.0);
  auto normsup = PenaltyPolicy::normalized_support();
  EXPECT_EQ(ul_dataset(identity, f.data, w, normsup, f.data), 0.0);

  auto only_d = AnonymizationMap::identity(8);
  only_d.suppress_group(f.id("d"));
  EXPECT_EQ(ul_dataset(only_d, only_d.apply(f.data), w, normsup, f.data), 4.0 / 10.0);
  EXPECT_EQ(ul_dataset(only_d, only_d.apply(f.data), w, PenaltyPolicy::support(), f.data), 4.0);
  EXPECT_EQ(ul_dataset(only_d, only_d.apply(f.data), w, PenaltyPolicy::constant(0.5), f.data), 0.5);

  testing::Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t m = rng.between(1, 10);
    Corpus c = testing::random_corpus(rng, m, rng.between(1, 20), 0.4);
    auto map = testing::random_map(rng, m, testing::random_blocks(rng, m, 3), 0.6, 0.2);
    Dataset anon = map.apply(c.dataset);
    const std::size_t n = c.dataset.num_transactions();
    double sum = 0.0;
    for (GroupId g : map.live_groups()) sum += ul_item(map, g, anon, w, n, m);
    for (ItemId i : map.suppressed()) sum += normsup.penalty(i, c.dataset);
    ASSERT_DOUBLE_EQ(ul_dataset(map, anon, w, normsup, c.dataset), sum);
  }
}

TEST(SizeRatio, ExactAndLargeVocabularies) {
  EXPECT_EQ(size_ratio(2, 8), 3.0 / 255.0);
  EXPECT_EQ(size_ratio(8, 8), 1.0);
  EXPECT_DOUBLE_EQ(size_ratio(62, 62), 1.0);
  EXPECT_DOUBLE_EQ(size_ratio(100, 100), 1.0);
  EXPECT_NEAR(size_ratio(99, 100) / 0.5, 1.0, 1e-12);
  EXPECT_EQ(size_ratio(2, 5000), 0.0);
}

TEST(UlLogKey, OrdersLikeUl) {
  testing::Rng rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t g1 = rng.between(2, 12), g2 = rng.between(2, 12);
    std::size_t s1 = rng.between(1, 50), s2 = rng.between(1, 50);
    double w1 = static_cast<double>(rng.between(1, 16)) / 16.0;
    double w2 = static_cast<double>(rng.between(1, 16)) / 16.0;
    double u1 = ul_value(g1, w1, s1, 50, 12), u2 = ul_value(g2, w2, s2, 50, 12);
    if (std::abs(u1 - u2) < 1e-12 * std::max(u1, u2)) continue;
    ASSERT_EQ(u1 < u2, ul_log_key(g1, w1, s1) < ul_log_key(g2, w2, s2));
  }
  EXPECT_EQ(ul_log_key(3, 0.0, 5), -INFINITY);
}

TEST(SuppressedPercent, Fraction) {
  Clinic f;
  EXPECT_EQ(suppressed_percent(f.published_map()), 12.5);
}

}  // namespace
}  // namespace coat
