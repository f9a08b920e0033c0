#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace netsig {

// Every failure the library can signal. Codes are part of the public
// contract: tests match on them and the CLI maps them to exit codes.
enum class ErrorCode {
  MissingFile,
  MalformedManifest,
  DuplicateSubject,
  UnknownClassLabel,
  MalformedMatrix,
  NonFiniteValue,
  LabelMismatch,
  ConstantColumn,
  TooFewTimepoints,
  InconsistentRoiSet,
  NonPositiveDiagonal,
  AllEigenvaluesDiscarded,
  EmptyGraph,
  PartitionMismatch,
  TooLarge,
  EmptyCohort,
  InvalidSpec,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace netsig
