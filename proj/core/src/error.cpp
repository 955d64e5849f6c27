#include "coat/error.hpp"

namespace coat {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "parse-error";
    case ErrorCode::kEmptyDataset: return "empty-dataset";
    case ErrorCode::kInvalidItem: return "invalid-item";
    case ErrorCode::kNotAPartition: return "not-a-partition";
    case ErrorCode::kInvalidMerge: return "invalid-merge";
    case ErrorCode::kInvalidSuppress: return "invalid-suppress";
    case ErrorCode::kInvalidMap: return "invalid-map";
    case ErrorCode::kTaxonomyMismatch: return "taxonomy-mismatch";
    case ErrorCode::kBudgetViolated: return "utility-budget-violated";
    case ErrorCode::kPolicyTooLarge: return "policy-too-large";
    case ErrorCode::kEmptyWorkload: return "empty-workload";
    case ErrorCode::kInsufficientGroups: return "insufficient-groups";
    case ErrorCode::kIo: return "io-error";
  }
  return "unknown";
}

}  // namespace coat
