#include "netsig/error.hpp"

namespace netsig {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::MalformedManifest: return "MalformedManifest";
    case ErrorCode::DuplicateSubject: return "DuplicateSubject";
    case ErrorCode::UnknownClassLabel: return "UnknownClassLabel";
    case ErrorCode::MalformedMatrix: return "MalformedMatrix";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::ConstantColumn: return "ConstantColumn";
    case ErrorCode::TooFewTimepoints: return "TooFewTimepoints";
    case ErrorCode::InconsistentRoiSet: return "InconsistentRoiSet";
    case ErrorCode::NonPositiveDiagonal: return "NonPositiveDiagonal";
    case ErrorCode::AllEigenvaluesDiscarded: return "AllEigenvaluesDiscarded";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::PartitionMismatch: return "PartitionMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::EmptyCohort: return "EmptyCohort";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
  }
  return "UnknownError";
}

}  // namespace netsig
