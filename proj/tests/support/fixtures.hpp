#pragma once

#include <gtest/gtest.h>

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "coat/anonmap.hpp"
#include "coat/constraints.hpp"
#include "coat/dataset.hpp"
#include "coat/error.hpp"
#include "coat/metrics.hpp"

namespace coat::testing {

inline const std::filesystem::path kDataDir = COAT_TEST_DATA_DIR;

// Code of the coat::Error thrown by fn; records a failure if none is.
inline ErrorCode error_code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no coat::Error thrown";
  return ErrorCode::kIo;
}

inline std::string data_file(const std::string& rel) { return read_text_file(kDataDir / rel); }

// The ten-patient example: dataset, constraints and taxonomy from data/clinic.
struct Clinic {
  Corpus corpus = parse_dataset(data_file("clinic/dataset.txt"));
  const Vocabulary& vocab = corpus.vocabulary;
  const Dataset& data = corpus.dataset;

  ItemId id(const char* token) const { return vocab.id(token); }
  Itemset items(std::initializer_list<const char*> tokens) const {
    std::vector<ItemId> out;
    for (const char* t : tokens) out.push_back(id(t));
    return make_itemset(out);
  }
  std::vector<Itemset> privacy_itemsets() const {
    return parse_constraints(data_file("clinic/privacy.txt"), vocab);
  }
  UtilityConstraintSet utility(double s = 15.0) const {
    return parse_utility(data_file("clinic/utility.txt"), vocab, s);
  }
  std::shared_ptr<const Taxonomy> taxonomy() const {
    return std::make_shared<const Taxonomy>(Taxonomy::parse(data_file("clinic/taxonomy.txt"), vocab));
  }
  // (a,b), c, e, f, (g,h) with d suppressed.
  AnonymizationMap published_map() const {
    return AnonymizationMap::from_partition(
        vocab.size(), {items({"a", "b"}), items({"c"}), items({"e"}), items({"f"}), items({"g", "h"})},
        items({"d"}));
  }
};

}  // namespace coat::testing
