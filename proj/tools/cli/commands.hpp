#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "coat/error.hpp"

namespace coat::cli {

// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitParse = 2,
  kExitBudget = 3,
  kExitPolicyTooLarge = 4,
  kExitVocabularyMismatch = 5,
  kExitSelftestFailed = 6,
  kExitWorkload = 7,
};

int exit_code_for(ErrorCode code);

// Inputs and expectations of the golden pipeline; defaults are the builtin
// example. Tests tamper with fields to prove the checks can fail.
struct SelftestInputs {
  std::string dataset;
  std::string privacy;
  std::string utility;
  std::string taxonomy;
  std::string expected_anonymized;
  std::string expected_trace;
  unsigned k;
  double s;
  double expected_weight_ab;
  double expected_ul_ab;
  double ul_tolerance;

  static SelftestInputs builtin();
};

struct SelftestCheck {
  std::string name;
  bool passed;
  std::string detail;
};

std::vector<SelftestCheck> run_selftest(const SelftestInputs& inputs);

// Entry point shared by the executable and in-process tests. args excludes
// the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coat::cli
