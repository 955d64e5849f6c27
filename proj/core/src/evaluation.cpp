#include "coat/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coat/constraints.hpp"
#include "coat/error.hpp"

namespace coat {

double member_probability(std::size_t group_size) {
  if (group_size == 0) return 0.0;
  if (group_size <= 62) {
    auto num = std::uint64_t{1} << (group_size - 1);
    auto den = (std::uint64_t{1} << group_size) - 1;
    return static_cast<double>(num) / static_cast<double>(den);
  }
  return 0.5 / (-std::expm1(-static_cast<double>(group_size) * std::log(2.0)));
}

namespace {

void check_query(const CountQuery& query, std::size_t universe) {
  if (query.items.empty()) throw Error(ErrorCode::kInvalidItem, "empty COUNT query");
  for (ItemId item : query.items) {
    if (item >= universe) throw Error(ErrorCode::kInvalidItem, "query item outside vocabulary");
  }
}

}  // namespace

std::size_t exact_answer(const CountQuery& query, const Dataset& original) {
  check_query(query, original.universe_size());
  return original.support(query.items);
}

namespace {

// e(Q) = count * num / den, with num/den exact when every factor fits.
struct Estimate {
  std::size_t count = 0;
  std::uint64_t num = 1;
  std::uint64_t den = 1;
  bool exact = true;
  double product = 1.0;
  bool suppressed = false;

  double value() const {
    if (suppressed) return 0.0;
    std::uint64_t scaled;
    if (exact && !__builtin_mul_overflow(static_cast<std::uint64_t>(count), num, &scaled)) {
      return static_cast<double>(scaled) / static_cast<double>(den);
    }
    return static_cast<double>(count) * product;
  }
};

Estimate estimate(const CountQuery& query, const AnonymizationMap& map, const Dataset& anon) {
  check_query(query, map.vocabulary_size());
  Estimate e;
  std::vector<GroupId> groups;
  for (ItemId item : query.items) {
    GroupId g = map.lookup(item);
    if (g == kSuppressed) {
      e.suppressed = true;
      return e;
    }
    const std::size_t size = map.members(g).size();
    e.product *= member_probability(size);
    if (size > 62 || __builtin_mul_overflow(e.num, std::uint64_t{1} << (size - 1), &e.num) ||
        __builtin_mul_overflow(e.den, (std::uint64_t{1} << size) - 1, &e.den)) {
      e.exact = false;
    }
    groups.push_back(g);
  }
  std::sort(groups.begin(), groups.end());
  groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
  // Every supporting row contributes the same product.
  e.count = anon.support(groups);
  return e;
}

}  // namespace

double estimated_answer(const CountQuery& query, const AnonymizationMap& map, const Dataset& anon) {
  return estimate(query, map, anon).value();
}

QueryError relative_error(const CountQuery& query, const AnonymizationMap& map,
                          const Dataset& original, const Dataset& anon) {
  QueryError err;
  err.actual = exact_answer(query, original);
  const Estimate e = estimate(query, map, anon);
  err.estimate = e.value();
  if (err.actual == 0) {
    err.zero_actual = true;
    err.re = std::abs(err.estimate);
    return err;
  }
  // |a*den - count*num| / (a*den) rounds once when the integers fit.
  std::uint64_t lhs, rhs;
  if (!e.suppressed && e.exact &&
      !__builtin_mul_overflow(static_cast<std::uint64_t>(err.actual), e.den, &lhs) &&
      !__builtin_mul_overflow(static_cast<std::uint64_t>(e.count), e.num, &rhs) &&
      lhs < (std::uint64_t{1} << 53) && rhs < (std::uint64_t{1} << 53)) {
    const std::uint64_t diff = lhs > rhs ? lhs - rhs : rhs - lhs;
    err.re = static_cast<double>(diff) / static_cast<double>(lhs);
  } else {
    const double a = static_cast<double>(err.actual);
    err.re = std::abs(a - err.estimate) / a;
  }
  return err;
}

WorkloadReport evaluate_workload(const Workload& workload, const AnonymizationMap& map,
                                 const Dataset& original, const Dataset& anon,
                                 bool include_zero_actual) {
  if (workload.queries.empty()) throw Error(ErrorCode::kEmptyWorkload, "workload has no queries");
  WorkloadReport report;
  double sum = 0.0;
  for (const auto& q : workload.queries) {
    report.errors.push_back(relative_error(q, map, original, anon));
    const auto& e = report.errors.back();
    if (e.zero_actual && !include_zero_actual) continue;
    sum += e.re;
    ++report.averaged;
  }
  if (report.averaged == 0) {
    throw Error(ErrorCode::kEmptyWorkload, "every query has a zero exact answer");
  }
  report.avg_re = sum / static_cast<double>(report.averaged);
  return report;
}

double avg_re(const Workload& workload, const AnonymizationMap& map, const Dataset& original,
              const Dataset& anon, bool include_zero_actual) {
  return evaluate_workload(workload, map, original, anon, include_zero_actual).avg_re;
}

std::uint64_t WorkloadRng::below(std::uint64_t bound) {
  // Reject the top partial bucket so every residue is equally likely.
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

Workload gen_workload(const AnonymizationMap& map, const Vocabulary& vocab, std::size_t q,
                      std::size_t n, std::uint64_t seed) {
  if (q == 0) throw Error(ErrorCode::kInsufficientGroups, "queries need at least one item");
  auto live = map.live_groups();
  if (live.size() < q) {
    throw Error(ErrorCode::kInsufficientGroups,
                "workload needs " + std::to_string(q) + " live groups but only " +
                    std::to_string(live.size()) + " exist");
  }
  sort_groups_canonically(live, map, vocab);

  // Members of each group in token order.
  std::vector<std::vector<ItemId>> members;
  members.reserve(live.size());
  for (GroupId g : live) {
    std::vector<ItemId> m(map.members(g).begin(), map.members(g).end());
    std::sort(m.begin(), m.end(),
              [&](ItemId a, ItemId b) { return vocab.token(a) < vocab.token(b); });
    members.push_back(std::move(m));
  }

  WorkloadRng rng(seed);
  Workload w;
  w.seed = seed;
  w.q = q;
  w.queries.reserve(n);
  std::vector<std::size_t> slots(live.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < slots.size(); ++j) slots[j] = j;
    std::vector<ItemId> items;
    for (std::size_t j = 0; j < q; ++j) {
      std::size_t pick = j + rng.below(slots.size() - j);
      std::swap(slots[j], slots[pick]);
      const auto& group = members[slots[j]];
      items.push_back(group[rng.below(group.size())]);
    }
    w.queries.push_back({make_itemset(std::move(items))});
  }
  return w;
}

std::string format_workload(const Workload& workload, const Vocabulary& vocab) {
  std::ostringstream out;
  out << "# seed=" << workload.seed << " q=" << workload.q << " n=" << workload.queries.size()
      << '\n';
  for (const auto& query : workload.queries) {
    std::vector<std::string> tokens;
    for (ItemId item : query.items) tokens.push_back(vocab.token(item));
    std::sort(tokens.begin(), tokens.end());
    for (std::size_t i = 0; i < tokens.size(); ++i) out << (i ? " " : "") << tokens[i];
    out << '\n';
  }
  return out.str();
}

Workload parse_workload(std::string_view text, const Vocabulary& vocab) {
  Workload w;
  // Header fields are informational; queries come from the body.
  std::istringstream lines{std::string(text)};
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("#", 0) != 0) continue;
    std::istringstream fields(line.substr(1));
    std::string field;
    try {
      while (fields >> field) {
        if (field.rfind("seed=", 0) == 0) w.seed = std::stoull(field.substr(5));
        if (field.rfind("q=", 0) == 0) w.q = std::stoul(field.substr(2));
      }
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParse, "bad workload header field '" + field + "'");
    }
    break;
  }
  for (auto& items : parse_constraints(text, vocab)) w.queries.push_back({std::move(items)});
  if (w.q == 0 && !w.queries.empty()) w.q = w.queries.front().items.size();
  return w;
}

}  // namespace coat
