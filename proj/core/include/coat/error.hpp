#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coat {

enum class ErrorCode {
  kParse,
  kEmptyDataset,
  kInvalidItem,
  kNotAPartition,
  kInvalidMerge,
  kInvalidSuppress,
  kInvalidMap,
  kTaxonomyMismatch,
  kBudgetViolated,
  kPolicyTooLarge,
  kEmptyWorkload,
  kInsufficientGroups,
  kIo,
};

// Stable kebab-case name, used in machine-readable CLI diagnostics.
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace coat
