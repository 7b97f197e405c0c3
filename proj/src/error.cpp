#include "edgeveritas/error.hpp"

namespace edgeveritas {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnreadableImage: return "UnreadableImage";
    case ErrorCode::ZeroDimension: return "ZeroDimension";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::MissingClass: return "MissingClass";
    case ErrorCode::EvenKernel: return "EvenKernel";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyMap: return "EmptyMap";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::MissingTruth: return "MissingTruth";
    case ErrorCode::MissingImage: return "MissingImage";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::EmptyEvaluation: return "EmptyEvaluation";
    case ErrorCode::ZeroBaseline: return "ZeroBaseline";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

}  // namespace edgeveritas
