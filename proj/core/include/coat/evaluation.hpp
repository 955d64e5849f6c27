#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "coat/anonmap.hpp"
#include "coat/dataset.hpp"

namespace coat {

// COUNT query over original items: rows containing every item.
struct CountQuery {
  Itemset items;  // q >= 1 distinct original item ids
};

struct Workload {
  std::vector<CountQuery> queries;
  std::uint64_t seed = 0;
  std::size_t q = 0;
};

// Marginal probability that a group of g original items stands for a given
// member, assuming each of its 2^g - 1 non-empty subsets is equally likely:
// 2^(g-1) / (2^g - 1).
double member_probability(std::size_t group_size);

// a(Q): support in the original data. Throws Error(kInvalidItem) for ids
// outside the dataset or an empty query.
std::size_t exact_answer(const CountQuery& query, const Dataset& original);

// e(Q): rows of the anonymized data holding every query item's group,
// each contributing the product of the items' member probabilities
// (items are treated as independent even within one group). A suppressed
// query item makes the estimate 0.
double estimated_answer(const CountQuery& query, const AnonymizationMap& map, const Dataset& anon);

struct QueryError {
  std::size_t actual = 0;
  double estimate = 0.0;
  double re = 0.0;          // |a - e| / a, or |e| when a == 0
  bool zero_actual = false;  // flagged: re is an absolute error
};

QueryError relative_error(const CountQuery& query, const AnonymizationMap& map,
                          const Dataset& original, const Dataset& anon);

struct WorkloadReport {
  std::vector<QueryError> errors;
  double avg_re = 0.0;
  std::size_t averaged = 0;  // queries entering the mean
};

// Mean RE over the workload. Queries with a(Q) == 0 are reported but left
// out of the mean unless include_zero_actual. Throws Error(kEmptyWorkload)
// if the workload (or the averaged subset) is empty.
WorkloadReport evaluate_workload(const Workload& workload, const AnonymizationMap& map,
                                 const Dataset& original, const Dataset& anon,
                                 bool include_zero_actual = false);

double avg_re(const Workload& workload, const AnonymizationMap& map, const Dataset& original,
              const Dataset& anon, bool include_zero_actual = false);

// Seeded stream for workload generation. std::mt19937_64 output is fixed by
// the standard; bounded draws use rejection sampling rather than
// std::uniform_int_distribution, whose mapping varies across standard
// libraries.
class WorkloadRng {
 public:
  explicit WorkloadRng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  // Uniform in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

// n queries: each picks q distinct live groups uniformly (partial
// Fisher-Yates over the live gids in canonical order), then one member
// item per group uniformly. Throws Error(kInsufficientGroups) when fewer
// than q groups are live.
Workload gen_workload(const AnonymizationMap& map, const Vocabulary& vocab, std::size_t q,
                      std::size_t n, std::uint64_t seed);

// "# seed=<s> q=<q> n=<n>" header, then one query per line with tokens
// sorted.
std::string format_workload(const Workload& workload, const Vocabulary& vocab);
Workload parse_workload(std::string_view text, const Vocabulary& vocab);

}  // namespace coat
