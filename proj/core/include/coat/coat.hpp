#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "coat/anonmap.hpp"
#include "coat/constraints.hpp"
#include "coat/dataset.hpp"
#include "coat/error.hpp"
#include "coat/metrics.hpp"

namespace coat {

struct CoatConfig {
  std::size_t k = 2;
  double s = 0.0;  // percent of the vocabulary that may be suppressed
  WeightPolicy weights = WeightPolicy::uniform(1.0);
  PenaltyPolicy penalties = PenaltyPolicy::normalized_support();
};

struct TraceAction {
  enum class Kind { kMerge, kSuppress };
  Kind kind;
  GroupId first;
  GroupId second = 0;  // merge partner
  GroupId result = 0;  // merged gid
  bool operator==(const TraceAction&) const = default;
};

struct CoatOutcome {
  AnonymizationMap map;
  Dataset anon;
  double ul = 0.0;
  double suppressed_percent = 0.0;
  std::vector<TraceAction> trace;
};

// Raised when a suppression pushes |S| past s% of the vocabulary.
class BudgetViolation : public Error {
 public:
  BudgetViolation(std::string group, double percent, double budget);
  const std::string& group() const { return group_; }
  double percent() const { return percent_; }

 private:
  std::string group_;
  double percent_;
};

struct CandidateScore {
  GroupId partner;
  std::size_t merged_support;  // union support in the working data
  double weight;
  double log_key;              // ranking key, see ul_log_key
  double ul;                   // UL of the hypothetical merged group
};

// Mutable anonymization state: the map, the working anonymized dataset, the
// privacy constraints and per-utility-block live groups. coat_run drives it;
// the generalize/suppress steps are exposed for inspection and testing.
class CoatState {
 public:
  CoatState(const Corpus& corpus, PrivacyConstraintSet privacy, const UtilityConstraintSet& utility,
            CoatConfig config);

  const AnonymizationMap& map() const { return map_; }
  const Dataset& working() const { return working_; }
  const PrivacyConstraintSet& privacy() const { return privacy_; }
  const std::vector<TraceAction>& trace() const { return trace_; }
  const CoatConfig& config() const { return config_; }
  std::size_t suppressed_items() const { return map_.suppressed().size(); }

  std::size_t support(GroupId gid) const { return working_.tids(gid).size(); }
  const std::string& display(GroupId gid) const { return display_.at(gid); }

  // Live groups sharing gid's utility block, excluding gid.
  std::vector<GroupId> block_candidates(GroupId gid) const;

  // Every candidate partner with its hypothetical merged UL.
  std::vector<CandidateScore> score_candidates(GroupId gid) const;

  // Greedy partner minimizing UL; ties go to the lexicographically smaller
  // merged group.
  std::optional<GroupId> best_partner(GroupId gid) const;

  // Merges gid with best_partner(gid) and rewrites constraints, the block
  // and the working rows. Returns the merged gid.
  GroupId generalize(GroupId gid);

  // Suppresses the group; throws BudgetViolation once the budget is exceeded.
  void suppress(GroupId gid);

  bool constraint_satisfied(std::size_t c);

  // Unsatisfied constraint whose itemset has maximum support, ties by
  // canonical itemset string. nullopt when P is satisfied.
  std::optional<std::size_t> select_constraint();

  // Generalize/suppress until constraint c holds.
  void satisfy(std::size_t c);

  void run();

  // Canonical itemset string of a constraint's live groups.
  std::string canonical_itemset(std::size_t c) const;

 private:
  struct Status {
    bool dirty = true;
    bool satisfied = false;
    std::size_t support = 0;
  };

  void refresh(std::size_t c);
  void mark_dirty(const std::vector<std::size_t>& constraints);
  void register_group(GroupId gid);
  std::string merged_display(GroupId a, GroupId b) const;

  const Corpus* corpus_;
  CoatConfig config_;
  AnonymizationMap map_;
  Dataset working_;
  PrivacyConstraintSet privacy_;
  std::vector<std::size_t> block_of_item_;
  std::vector<std::vector<GroupId>> block_groups_;
  std::vector<std::string> display_;
  std::vector<Taxonomy::NodeId> lca_;
  std::vector<Status> status_;
  std::vector<TraceAction> trace_;
};

// Runs COAT. On success the privacy and utility sets hold on the returned
// data (checked before returning). Throws BudgetViolation when suppression
// exceeds config.s. privacy.k() must equal config.k.
CoatOutcome coat_run(const Corpus& corpus, const PrivacyConstraintSet& privacy,
                     const UtilityConstraintSet& utility, const CoatConfig& config);

// Replays a trace from the identity map; throws Error(kInvalidMerge) if a
// recorded result gid does not match.
AnonymizationMap replay_trace(const std::vector<TraceAction>& trace, std::size_t vocabulary_size);

// "MERGE <g> <g> -> <g>" / "SUPPRESS <g>" lines in canonical display form.
std::string format_trace(const std::vector<TraceAction>& trace, const AnonymizationMap& map,
                         const Vocabulary& vocab);

}  // namespace coat
