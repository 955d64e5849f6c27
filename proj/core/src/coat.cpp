#include "coat/coat.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace coat {

namespace {

std::size_t union_count(const TidSet& a, const TidSet& b) {
  std::size_t i = 0, j = 0, n = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++i;
      ++j;
    }
    ++n;
  }
  return n + (a.size() - i) + (b.size() - j);
}

std::string percent_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

BudgetViolation::BudgetViolation(std::string group, double percent, double budget)
    : Error(ErrorCode::kBudgetViolated,
            "suppressing " + group + " raises suppressed items to " + percent_text(percent) +
                "% of the vocabulary, above s=" + percent_text(budget) + "%"),
      group_(std::move(group)),
      percent_(percent) {}

CoatState::CoatState(const Corpus& corpus, PrivacyConstraintSet privacy,
                     const UtilityConstraintSet& utility, CoatConfig config)
    : corpus_(&corpus),
      config_(std::move(config)),
      map_(AnonymizationMap::identity(corpus.vocabulary.size())),
      working_(corpus.dataset),
      privacy_(std::move(privacy)) {
  const std::size_t m = corpus.vocabulary.size();
  if (config_.k < 2) throw Error(ErrorCode::kParse, "k must be at least 2");
  if (!(config_.s >= 0.0 && config_.s <= 100.0)) {
    throw Error(ErrorCode::kParse, "s must be a percentage in [0,100]");
  }
  if (privacy_.k() != config_.k) {
    throw Error(ErrorCode::kParse, "privacy constraint k differs from the run's k");
  }
  if (corpus.dataset.universe_size() != m) {
    throw Error(ErrorCode::kInvalidMap, "dataset and vocabulary sizes differ");
  }
  for (const auto& p : privacy_.constraints()) {
    for (ItemId item : p.original_items) {
      if (item >= m) throw Error(ErrorCode::kInvalidItem, "privacy constraint item outside vocabulary");
    }
  }
  privacy_.rebind(map_);

  block_of_item_ = utility.block_index(m);
  block_groups_.assign(utility.blocks.size(), {});
  for (ItemId i = 0; i < m; ++i) {
    block_groups_[block_of_item_[i]].push_back(i);
    register_group(i);
  }
  status_.assign(privacy_.size(), Status{});
}

void CoatState::register_group(GroupId gid) {
  if (display_.size() <= gid) display_.resize(gid + std::size_t{1});
  display_[gid] = group_display(map_, gid, corpus_->vocabulary);
  if (const Taxonomy* tax = config_.weights.taxonomy()) {
    if (lca_.size() <= gid) lca_.resize(gid + std::size_t{1});
    lca_[gid] = tax->lca(map_.members(gid));
  }
}

std::vector<GroupId> CoatState::block_candidates(GroupId gid) const {
  const auto& block = block_groups_[block_of_item_[map_.members(gid).front()]];
  std::vector<GroupId> out;
  out.reserve(block.size());
  for (GroupId g : block) {
    if (g != gid) out.push_back(g);
  }
  return out;
}

std::vector<CandidateScore> CoatState::score_candidates(GroupId gid) const {
  const std::size_t n = working_.num_transactions();
  const std::size_t m = map_.vocabulary_size();
  const Taxonomy* tax = config_.weights.taxonomy();
  std::vector<CandidateScore> out;
  for (GroupId r : block_candidates(gid)) {
    CandidateScore score;
    score.partner = r;
    score.merged_support = union_count(working_.tids(gid), working_.tids(r));
    const std::size_t size = map_.members(gid).size() + map_.members(r).size();
    if (tax) {
      score.weight = static_cast<double>(tax->leaf_count(tax->lca(lca_[gid], lca_[r]))) /
                     static_cast<double>(m);
    } else {
      score.weight = config_.weights.weight({}, m);
    }
    score.log_key = ul_log_key(size, score.weight, score.merged_support);
    score.ul = ul_value(size, score.weight, score.merged_support, n, m);
    out.push_back(score);
  }
  return out;
}

std::string CoatState::merged_display(GroupId a, GroupId b) const {
  std::vector<std::string> tokens;
  for (GroupId g : {a, b}) {
    for (ItemId item : map_.members(g)) tokens.push_back(corpus_->vocabulary.token(item));
  }
  std::sort(tokens.begin(), tokens.end());
  std::string out = "(";
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ',';
    out += tokens[i];
  }
  return out + ")";
}

std::optional<GroupId> CoatState::best_partner(GroupId gid) const {
  std::optional<CandidateScore> best;
  std::string best_display;
  for (const auto& score : score_candidates(gid)) {
    if (!best || score.log_key < best->log_key) {
      best = score;
      best_display.clear();
      continue;
    }
    if (score.log_key == best->log_key) {
      if (best_display.empty()) best_display = merged_display(gid, best->partner);
      std::string d = merged_display(gid, score.partner);
      if (d < best_display) {
        best = score;
        best_display = std::move(d);
      }
    }
  }
  if (!best) return std::nullopt;
  return best->partner;
}

void CoatState::mark_dirty(const std::vector<std::size_t>& constraints) {
  for (std::size_t c : constraints) status_[c].dirty = true;
}

GroupId CoatState::generalize(GroupId gid) {
  auto partner = best_partner(gid);
  if (!partner) {
    throw std::logic_error("generalize called without a candidate in the utility block");
  }
  const std::size_t block = block_of_item_[map_.members(gid).front()];
  GroupId merged = map_.merge(gid, *partner);
  working_.merge_items(gid, *partner, merged);
  mark_dirty(privacy_.on_merge(gid, *partner, merged));
  auto& groups = block_groups_[block];
  std::erase_if(groups, [&](GroupId g) { return g == gid || g == *partner; });
  groups.push_back(merged);
  register_group(merged);
  trace_.push_back({TraceAction::Kind::kMerge, gid, *partner, merged});
  return merged;
}

void CoatState::suppress(GroupId gid) {
  const std::size_t block = block_of_item_[map_.members(gid).front()];
  map_.suppress_group(gid);
  mark_dirty(privacy_.on_suppress(gid));
  working_.remove_item(gid);
  std::erase(block_groups_[block], gid);
  trace_.push_back({TraceAction::Kind::kSuppress, gid});

  const double suppressed = static_cast<double>(map_.suppressed().size());
  const double m = static_cast<double>(map_.vocabulary_size());
  if (100.0 * suppressed > config_.s * m) {
    throw BudgetViolation(display_[gid], 100.0 * suppressed / m, config_.s);
  }
}

void CoatState::refresh(std::size_t c) {
  Status& st = status_[c];
  if (!st.dirty) return;
  const auto& groups = privacy_[c].live_groups;
  st.support = working_.support(groups);
  st.satisfied = groups.empty() || st.support >= config_.k ||
                 (st.support == 0 && check_privacy_itemset(groups, working_, config_.k));
  st.dirty = false;
}

bool CoatState::constraint_satisfied(std::size_t c) {
  refresh(c);
  return status_[c].satisfied;
}

std::string CoatState::canonical_itemset(std::size_t c) const {
  std::vector<GroupId> groups = privacy_[c].live_groups;
  sort_groups_canonically(groups, map_, corpus_->vocabulary);
  std::string out;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (i) out += ' ';
    out += display_[groups[i]];
  }
  return out;
}

std::optional<std::size_t> CoatState::select_constraint() {
  std::optional<std::size_t> best;
  std::string best_key;
  for (std::size_t c = 0; c < privacy_.size(); ++c) {
    refresh(c);
    if (status_[c].satisfied) continue;
    if (!best || status_[c].support > status_[*best].support) {
      best = c;
      best_key.clear();
      continue;
    }
    if (status_[c].support == status_[*best].support) {
      if (best_key.empty()) best_key = canonical_itemset(*best);
      std::string key = canonical_itemset(c);
      if (key < best_key) {
        best = c;
        best_key = std::move(key);
      }
    }
  }
  return best;
}

void CoatState::satisfy(std::size_t c) {
  auto min_support_group = [&](const std::vector<GroupId>& skip) {
    std::optional<GroupId> pick;
    for (GroupId g : privacy_[c].live_groups) {
      if (std::find(skip.begin(), skip.end(), g) != skip.end()) continue;
      if (!pick || support(g) < support(*pick) ||
          (support(g) == support(*pick) && display_[g] < display_[*pick])) {
        pick = g;
      }
    }
    return pick;
  };

  // A group whose block offers no partner but whose support already reaches
  // k is never suppressed here; it is skipped for this constraint.
  std::vector<GroupId> ineligible;
  while (!constraint_satisfied(c) && privacy_[c].live_groups.size() > 1) {
    auto pick = min_support_group(ineligible);
    if (!pick) break;
    const std::size_t block = block_of_item_[map_.members(*pick).front()];
    if (block_groups_[block].size() > 1) {
      generalize(*pick);
    } else if (support(*pick) < config_.k) {
      suppress(*pick);
    } else {
      ineligible.push_back(*pick);
    }
  }
  while (!constraint_satisfied(c)) {
    suppress(*min_support_group({}));
  }
}

void CoatState::run() {
  while (auto c = select_constraint()) satisfy(*c);
}

CoatOutcome coat_run(const Corpus& corpus, const PrivacyConstraintSet& privacy,
                     const UtilityConstraintSet& utility, const CoatConfig& config) {
  CoatState state(corpus, privacy, utility, config);
  state.run();

  CoatOutcome out;
  out.map = state.map();
  out.anon = state.working();
  out.trace = state.trace();
  out.ul = ul_dataset(out.map, out.anon, config.weights, config.penalties, corpus.dataset);
  out.suppressed_percent = suppressed_percent(out.map);

  UtilityConstraintSet budgeted = utility;
  budgeted.s = config.s;
  if (!check_privacy_set(privacy, out.map, out.anon) || !check_utility_set(budgeted, out.map)) {
    throw std::logic_error("COAT finished without satisfying its constraints");
  }
  return out;
}

AnonymizationMap replay_trace(const std::vector<TraceAction>& trace, std::size_t vocabulary_size) {
  auto map = AnonymizationMap::identity(vocabulary_size);
  for (const auto& action : trace) {
    if (action.kind == TraceAction::Kind::kMerge) {
      if (map.merge(action.first, action.second) != action.result) {
        throw Error(ErrorCode::kInvalidMerge, "trace replay diverged from recorded gids");
      }
    } else {
      map.suppress_group(action.first);
    }
  }
  return map;
}

std::string format_trace(const std::vector<TraceAction>& trace, const AnonymizationMap& map,
                         const Vocabulary& vocab) {
  std::string out;
  for (const auto& action : trace) {
    if (action.kind == TraceAction::Kind::kMerge) {
      out += "MERGE " + group_display(map, action.first, vocab) + " " +
             group_display(map, action.second, vocab) + " -> " +
             group_display(map, action.result, vocab) + "\n";
    } else {
      out += "SUPPRESS " + group_display(map, action.first, vocab) + "\n";
    }
  }
  return out;
}

}  // namespace coat
