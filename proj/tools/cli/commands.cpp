#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "builtin_example.hpp"
#include "coat/anonmap.hpp"
#include "coat/coat.hpp"
#include "coat/constraints.hpp"
#include "coat/dataset.hpp"
#include "coat/evaluation.hpp"
#include "coat/metrics.hpp"
#include "coat/pgen.hpp"

namespace coat::cli {

namespace fs = std::filesystem;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBudgetViolated: return kExitBudget;
    case ErrorCode::kPolicyTooLarge: return kExitPolicyTooLarge;
    case ErrorCode::kInvalidMap: return kExitVocabularyMismatch;
    case ErrorCode::kEmptyWorkload:
    case ErrorCode::kInsufficientGroups: return kExitWorkload;
    case ErrorCode::kParse:
    case ErrorCode::kEmptyDataset:
    case ErrorCode::kInvalidItem:
    case ErrorCode::kNotAPartition:
    case ErrorCode::kInvalidMerge:
    case ErrorCode::kInvalidSuppress:
    case ErrorCode::kTaxonomyMismatch:
    case ErrorCode::kIo: return kExitParse;
  }
  return kExitParse;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct PolicyArgs {
  std::string taxonomy;
  std::string weights;  // "", "uniform", "lca"
  double uniform_weight = 1.0;
  std::string penalty = "normsup";
  double penalty_const = 1.0;
};

void add_policy_options(CLI::App& cmd, PolicyArgs& a) {
  cmd.add_option("--taxonomy", a.taxonomy, "Item hierarchy (indented tree or child<TAB>parent)");
  cmd.add_option("--weights", a.weights, "Generalization weights (default: lca with a taxonomy)")
      ->check(CLI::IsMember({"uniform", "lca"}));
  cmd.add_option("--uniform-weight", a.uniform_weight, "Constant weight for --weights uniform")
      ->check(CLI::Range(0.0, 1.0));
  cmd.add_option("--penalty", a.penalty, "Suppression penalty")
      ->check(CLI::IsMember({"normsup", "support", "const"}));
  cmd.add_option("--penalty-const", a.penalty_const, "Penalty per item for --penalty const")
      ->check(CLI::NonNegativeNumber);
}

struct Policies {
  WeightPolicy weights = WeightPolicy::uniform(1.0);
  PenaltyPolicy penalties = PenaltyPolicy::normalized_support();
  std::string weights_name;
  std::string penalty_name;
};

Policies load_policies(const PolicyArgs& a, const Vocabulary& vocab) {
  Policies p;
  std::string mode = a.weights.empty() ? (a.taxonomy.empty() ? "uniform" : "lca") : a.weights;
  if (mode == "lca") {
    if (a.taxonomy.empty()) throw Error(ErrorCode::kParse, "--weights lca needs --taxonomy");
    auto tax = std::make_shared<const Taxonomy>(Taxonomy::parse(read_text_file(a.taxonomy), vocab));
    p.weights = WeightPolicy::taxonomy_lca(std::move(tax));
  } else {
    if (!a.taxonomy.empty()) Taxonomy::parse(read_text_file(a.taxonomy), vocab);
    p.weights = WeightPolicy::uniform(a.uniform_weight);
  }
  p.weights_name = mode;
  if (a.penalty == "const") {
    p.penalties = PenaltyPolicy::constant(a.penalty_const);
  } else if (a.penalty == "support") {
    p.penalties = PenaltyPolicy::support();
  }
  p.penalty_name = a.penalty;
  return p;
}

struct WorkloadArgs {
  std::size_t q = 1;
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  bool include_zero = false;
};

void add_workload_options(CLI::App& cmd, WorkloadArgs& a) {
  cmd.add_option("--q", a.q, "Items per generated COUNT query")->check(CLI::PositiveNumber);
  cmd.add_option("--n", a.n, "Queries per generated workload")->check(CLI::PositiveNumber);
  cmd.add_option("--seed", a.seed, "Workload generator seed");
  cmd.add_flag("--include-zero", a.include_zero, "Average queries whose exact answer is 0");
}

// Key-value metrics report; per-query rows are tab-separated.
class MetricsReport {
 public:
  void add(const std::string& key, const std::string& value) {
    lines_ += key + "=" + value + "\n";
  }
  void add(const std::string& key, double value) { add(key, num(value)); }
  void add_count(const std::string& key, std::size_t value) { add(key, std::to_string(value)); }

  void add_workload(const Workload& w, const WorkloadReport& r, const Vocabulary& vocab) {
    add("workload_seed", std::to_string(w.seed));
    add_count("workload_q", w.q);
    add_count("workload_n", w.queries.size());
    add_count("averaged_queries", r.averaged);
    add("avg_re", r.avg_re);
    for (std::size_t i = 0; i < w.queries.size(); ++i) {
      std::vector<std::string> tokens;
      for (ItemId item : w.queries[i].items) tokens.push_back(vocab.token(item));
      std::sort(tokens.begin(), tokens.end());
      std::string items;
      for (std::size_t t = 0; t < tokens.size(); ++t) items += (t ? " " : "") + tokens[t];
      const auto& e = r.errors[i];
      queries_ += "query\t" + std::to_string(i) + "\t" + items + "\ta=" +
                  std::to_string(e.actual) + "\te=" + num(e.estimate) + "\tre=" + num(e.re) +
                  (e.zero_actual ? "\tzero_actual" : "") + "\n";
    }
  }

  std::string str() const { return "# coat metrics\n" + lines_ + queries_; }

 private:
  std::string lines_;
  std::string queries_;
};

fs::path output_path(const std::string& explicit_path, const std::string& dir,
                     const char* default_name) {
  if (!explicit_path.empty()) return explicit_path;
  if (dir.empty()) return {};
  return fs::path(dir) / default_name;
}

void write_if(const fs::path& path, std::string_view content) {
  if (!path.empty()) write_text_file(path, content);
}

void ensure_dir(const std::string& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create directory '" + dir + "': " + ec.message());
}

// --- anonymize -------------------------------------------------------------

struct AnonymizeArgs {
  std::string data;
  std::string privacy;
  std::string utility;
  std::size_t k = 0;
  double s = 0.0;
  std::size_t m = 0;
  std::uint64_t cap = kDefaultPolicyCap;
  PolicyArgs policy;
  WorkloadArgs workload;
  std::string out_dir, out_data, out_map, out_trace, out_metrics, out_privacy;
};

int cmd_anonymize(const AnonymizeArgs& a, std::ostream& out, std::ostream& err) {
  Corpus corpus = parse_dataset(read_text_file(a.data));
  const auto& vocab = corpus.vocabulary;

  std::vector<Itemset> itemsets;
  std::string privacy_source = a.privacy;
  bool generated = false;
  if (a.privacy == "pgen") {
    itemsets = pgen(corpus.dataset, vocab, a.k);
    generated = true;
  } else if (a.privacy == "km" || a.privacy.rfind("km:", 0) == 0) {
    std::size_t m = a.m;
    if (a.privacy.size() > 3) {
      try {
        m = std::stoul(a.privacy.substr(3));
      } catch (const std::exception&) {
        throw Error(ErrorCode::kParse, "bad km policy '" + a.privacy + "'");
      }
    }
    if (m == 0) throw Error(ErrorCode::kParse, "km policy needs --m or km:<m>");
    itemsets = km_constraints(vocab, m, a.cap);
    privacy_source = "km:" + std::to_string(m);
    generated = true;
  } else {
    itemsets = parse_constraints(read_text_file(a.privacy), vocab);
  }
  PrivacyConstraintSet privacy(itemsets, a.k);

  UtilityConstraintSet utility;
  if (a.utility.empty()) {
    err << "warning: no --utility given; using a single block holding every item\n";
    utility = UtilityConstraintSet::coarsest(vocab.size(), a.s);
  } else {
    utility = parse_utility(read_text_file(a.utility), vocab, a.s);
  }

  Policies policies = load_policies(a.policy, vocab);
  CoatConfig config{a.k, a.s, policies.weights, policies.penalties};

  ensure_dir(a.out_dir);
  if (generated) write_if(output_path(a.out_privacy, a.out_dir, "privacy.txt"),
                          format_constraints(itemsets, vocab));

  CoatOutcome outcome = coat_run(corpus, privacy, utility, config);

  write_if(output_path(a.out_data, a.out_dir, "anonymized.txt"),
           format_anonymized(outcome.anon, outcome.map, vocab));
  write_if(output_path(a.out_map, a.out_dir, "map.tsv"), format_map(outcome.map, vocab));
  write_if(output_path(a.out_trace, a.out_dir, "trace.txt"),
           format_trace(outcome.trace, outcome.map, vocab));

  MetricsReport report;
  report.add("command", "anonymize");
  report.add("privacy_source", privacy_source);
  report.add_count("privacy_constraints", privacy.size());
  report.add_count("utility_blocks", utility.blocks.size());
  report.add_count("k", a.k);
  report.add("s", a.s);
  report.add("weights", policies.weights_name);
  report.add("penalty", policies.penalty_name);
  report.add_count("n_transactions", corpus.dataset.num_transactions());
  report.add_count("n_items", vocab.size());
  report.add_count("live_groups", outcome.map.num_live_groups());
  report.add_count("suppressed_items", outcome.map.suppressed().size());
  report.add("suppressed_percent", outcome.suppressed_percent);
  report.add("ul", outcome.ul);
  report.add_count("trace_actions", outcome.trace.size());
  if (outcome.map.num_live_groups() >= a.workload.q) {
    Workload w = gen_workload(outcome.map, vocab, a.workload.q, a.workload.n, a.workload.seed);
    try {
      report.add_workload(w, evaluate_workload(w, outcome.map, corpus.dataset, outcome.anon,
                                               a.workload.include_zero),
                          vocab);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyWorkload) throw;
      report.add("avg_re", "skipped");
    }
  } else {
    err << "warning: fewer than q live groups; AvgRE not computed\n";
    report.add("avg_re", "skipped");
  }
  auto metrics_path = output_path(a.out_metrics, a.out_dir, "metrics.txt");
  if (metrics_path.empty()) {
    out << report.str();
  } else {
    write_text_file(metrics_path, report.str());
  }
  return kExitOk;
}

// --- pgen / km-policy ------------------------------------------------------

struct PolicyGenArgs {
  std::string data;
  std::size_t k = 0;
  std::size_t m = 0;
  std::uint64_t cap = kDefaultPolicyCap;
  std::string out;
};

int emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    write_text_file(path, content);
  }
  return kExitOk;
}

int cmd_pgen(const PolicyGenArgs& a, std::ostream& out) {
  Corpus corpus = parse_dataset(read_text_file(a.data));
  return emit(a.out, format_constraints(pgen(corpus.dataset, corpus.vocabulary, a.k),
                                        corpus.vocabulary),
              out);
}

int cmd_km(const PolicyGenArgs& a, std::ostream& out) {
  Corpus corpus = parse_dataset(read_text_file(a.data));
  return emit(a.out,
              format_constraints(km_constraints(corpus.vocabulary, a.m, a.cap), corpus.vocabulary),
              out);
}

// --- evaluate --------------------------------------------------------------

struct EvaluateArgs {
  std::string data;
  std::string map;
  std::string workload_file;
  std::string out_workload;
  std::string out;
  PolicyArgs policy;
  WorkloadArgs workload;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  Corpus corpus = parse_dataset(read_text_file(a.data));
  const auto& vocab = corpus.vocabulary;
  AnonymizationMap map = parse_map(read_text_file(a.map), vocab);
  Dataset anon = map.apply(corpus.dataset);
  Policies policies = load_policies(a.policy, vocab);

  Workload w = a.workload_file.empty()
                   ? gen_workload(map, vocab, a.workload.q, a.workload.n, a.workload.seed)
                   : parse_workload(read_text_file(a.workload_file), vocab);
  if (!a.out_workload.empty()) write_text_file(a.out_workload, format_workload(w, vocab));
  WorkloadReport r = evaluate_workload(w, map, corpus.dataset, anon, a.workload.include_zero);

  MetricsReport report;
  report.add("command", "evaluate");
  report.add("weights", policies.weights_name);
  report.add("penalty", policies.penalty_name);
  report.add_count("n_transactions", corpus.dataset.num_transactions());
  report.add_count("n_items", vocab.size());
  report.add_count("live_groups", map.num_live_groups());
  report.add_count("suppressed_items", map.suppressed().size());
  report.add("suppressed_percent", suppressed_percent(map));
  report.add("ul", ul_dataset(map, anon, policies.weights, policies.penalties, corpus.dataset));
  report.add_workload(w, r, vocab);
  return emit(a.out, report.str(), out);
}

// --- selftest --------------------------------------------------------------

int cmd_selftest(std::ostream& out) {
  auto checks = run_selftest(SelftestInputs::builtin());
  bool ok = true;
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << ": " << c.detail;
    out << '\n';
    ok = ok && c.passed;
  }
  out << (ok ? "selftest passed\n" : "selftest FAILED\n");
  return ok ? kExitOk : kExitSelftestFailed;
}

}  // namespace

SelftestInputs SelftestInputs::builtin() {
  return {std::string(builtin::kDataset),
          std::string(builtin::kPrivacy),
          std::string(builtin::kUtility),
          std::string(builtin::kTaxonomy),
          std::string(builtin::kExpectedAnonymized),
          std::string(builtin::kExpectedTrace),
          builtin::kK,
          builtin::kS,
          builtin::kExpectedWeightAB,
          builtin::kExpectedUlAB,
          builtin::kUlTolerance};
}

std::vector<SelftestCheck> run_selftest(const SelftestInputs& in) {
  std::vector<SelftestCheck> checks;
  auto check = [&](std::string name, bool passed, std::string detail = {}) {
    checks.push_back({std::move(name), passed, std::move(detail)});
  };

  Corpus corpus;
  std::shared_ptr<const Taxonomy> taxonomy;
  std::optional<CoatOutcome> outcome;
  try {
    corpus = parse_dataset(in.dataset);
    taxonomy = std::make_shared<const Taxonomy>(Taxonomy::parse(in.taxonomy, corpus.vocabulary));
    PrivacyConstraintSet privacy(parse_constraints(in.privacy, corpus.vocabulary), in.k);
    auto utility = parse_utility(in.utility, corpus.vocabulary, in.s);
    CoatConfig config{in.k, in.s, WeightPolicy::taxonomy_lca(taxonomy),
                      PenaltyPolicy::normalized_support()};
    outcome = coat_run(corpus, privacy, utility, config);
  } catch (const std::exception& e) {
    check("golden pipeline", false, e.what());
    return checks;
  }
  const auto& vocab = corpus.vocabulary;
  const auto& D = corpus.dataset;

  std::string table = format_anonymized(outcome->anon, outcome->map, vocab);
  check("golden anonymized table", table == in.expected_anonymized,
        table == in.expected_anonymized ? "" : "got:\n" + table);
  std::string trace = format_trace(outcome->trace, outcome->map, vocab);
  check("golden trace", trace == in.expected_trace,
        trace == in.expected_trace ? "" : "trace mismatch, got:\n" + trace);

  // Weight and UL of the (a,b) group when both items exist.
  if (vocab.contains("a") && vocab.contains("b")) {
    Itemset ab = make_itemset({vocab.id("a"), vocab.id("b")});
    double w = WeightPolicy::taxonomy_lca(taxonomy).weight(ab, vocab.size());
    check("weight of (a,b)", w == in.expected_weight_ab,
          "weight " + num(w) + ", expected " + num(in.expected_weight_ab));
    GroupId g = outcome->map.lookup(ab.front());
    if (g != kSuppressed && outcome->map.members(g) == ab) {
      double ul = ul_item(outcome->map, g, outcome->anon, WeightPolicy::taxonomy_lca(taxonomy), 8,
                          vocab.size());
      check("UL of (a,b) with denominator 8", std::abs(ul - in.expected_ul_ab) <= in.ul_tolerance,
            "UL " + num(ul) + ", expected " + num(in.expected_ul_ab));
    } else {
      check("UL of (a,b) with denominator 8", false, "(a,b) is not a group of the result");
    }
  }

  // Generalization principle for every pair merged from the identity map.
  bool inclusion_exclusion = true;
  for (ItemId r = 0; r < vocab.size(); ++r) {
    for (ItemId s = r + 1; s < vocab.size(); ++s) {
      auto map = AnonymizationMap::identity(vocab.size());
      GroupId g = map.merge(r, s);
      std::size_t lhs = map.apply(D).tids(g).size();
      const Itemset pair{r, s};
      std::size_t rhs = D.tids(r).size() + D.tids(s).size() - D.support(pair);
      inclusion_exclusion = inclusion_exclusion && lhs == rhs;
    }
  }
  check("merged support equals inclusion-exclusion", inclusion_exclusion);

  // Group support equals the union of member supports.
  bool unions = true;
  for (GroupId g : outcome->map.live_groups()) {
    TidSet acc;
    for (ItemId item : outcome->map.members(g)) acc = unite(acc, D.tids(item));
    unions = unions && acc.size() == outcome->anon.tids(g).size();
  }
  check("group support equals union of member supports", unions);

  // Satisfied constraints stay satisfied for all their subsets.
  bool monotone = true;
  for (const auto& itemset : parse_constraints(in.privacy, vocab)) {
    PrivacyConstraint p{itemset, {}};
    if (!check_privacy_constraint(p, outcome->map, outcome->anon, in.k)) continue;
    const std::size_t r = itemset.size();
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << r); ++mask) {
      Itemset sub;
      for (std::size_t i = 0; i < r; ++i) {
        if (mask >> i & 1) sub.push_back(itemset[i]);
      }
      PrivacyConstraint ps{sub, {}};
      monotone = monotone && check_privacy_constraint(ps, outcome->map, outcome->anon, in.k);
    }
  }
  check("satisfaction is monotone over subsets", monotone);
  return checks;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constraint-based anonymization of transaction data", "coat"};
  app.require_subcommand(1);

  AnonymizeArgs anon;
  auto* a = app.add_subcommand("anonymize", "Anonymize a dataset under privacy and utility constraints");
  a->add_option("--data", anon.data, "Transaction file, one transaction per line")->required();
  a->add_option("--privacy", anon.privacy, "Privacy constraint file, 'pgen', 'km' or 'km:<m>'")
      ->required();
  a->add_option("--utility", anon.utility, "Utility constraint file (default: one block)");
  a->add_option("--k", anon.k, "Protection level")->required()->check(CLI::Range(2, 1 << 30));
  a->add_option("--s", anon.s, "Suppression budget, percent of items")->check(CLI::Range(0.0, 100.0));
  a->add_option("--m", anon.m, "Itemset size for the km policy")->check(CLI::PositiveNumber);
  a->add_option("--km-cap", anon.cap, "Largest km policy accepted");
  add_policy_options(*a, anon.policy);
  add_workload_options(*a, anon.workload);
  a->add_option("--out-dir", anon.out_dir, "Directory for anonymized.txt, map.tsv, trace.txt, metrics.txt");
  a->add_option("--out-data", anon.out_data, "Anonymized dataset path");
  a->add_option("--out-map", anon.out_map, "Map export path");
  a->add_option("--out-trace", anon.out_trace, "Trace export path");
  a->add_option("--out-metrics", anon.out_metrics, "Metrics report path (default: stdout)");
  a->add_option("--out-privacy", anon.out_privacy, "Where to write a generated privacy policy");

  PolicyGenArgs pg;
  auto* p = app.add_subcommand("pgen", "Emit the maximal infrequent itemsets as privacy constraints");
  p->add_option("--data", pg.data)->required();
  p->add_option("--k", pg.k)->required()->check(CLI::Range(2, 1 << 30));
  p->add_option("--out", pg.out, "Output file (default: stdout)");

  PolicyGenArgs km;
  auto* k = app.add_subcommand("km-policy", "Emit every m-itemset of the vocabulary as a constraint");
  k->add_option("--data", km.data)->required();
  k->add_option("--m", km.m)->required()->check(CLI::PositiveNumber);
  k->add_option("--cap", km.cap, "Largest policy accepted");
  k->add_option("--out", km.out, "Output file (default: stdout)");

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Query-accuracy and UL metrics for an anonymization map");
  e->add_option("--data", ev.data, "Original transaction file")->required();
  e->add_option("--map", ev.map, "Map file written by anonymize")->required();
  e->add_option("--workload", ev.workload_file, "Workload file (default: generate one)");
  e->add_option("--out-workload", ev.out_workload, "Write the workload used");
  e->add_option("--out", ev.out, "Metrics report path (default: stdout)");
  add_policy_options(*e, ev.policy);
  add_workload_options(*e, ev.workload);

  auto* st = app.add_subcommand("selftest", "Run the builtin golden example and property spot checks");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& pe) {
    int code = app.exit(pe, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (a->parsed()) return cmd_anonymize(anon, out, err);
    if (p->parsed()) return cmd_pgen(pg, out);
    if (k->parsed()) return cmd_km(km, out);
    if (e->parsed()) return cmd_evaluate(ev, out);
    if (st->parsed()) return cmd_selftest(out);
  } catch (const BudgetViolation& bv) {
    err << "error: reason=" << error_code_name(bv.code()) << " group=" << bv.group()
        << " suppressed_percent=" << num(bv.percent()) << " message=" << bv.what() << '\n';
    return kExitBudget;
  } catch (const Error& ex) {
    err << "error: reason=" << error_code_name(ex.code()) << " message=" << ex.what() << '\n';
    return exit_code_for(ex.code());
  }
  return kExitUsage;
}

}  // namespace coat::cli
