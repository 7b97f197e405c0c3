#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace edgeveritas {

enum class ErrorCode {
  UnreadableImage,
  ZeroDimension,
  EmptyDataset,
  MissingClass,
  EvenKernel,
  TooSmall,
  BadParams,
  DimensionMismatch,
  EmptyMap,
  EmptyClass,
  MissingTruth,
  MissingImage,
  SchemaError,
  EmptyEvaluation,
  ZeroBaseline,
  IoError,
  UsageError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to an exit status and a machine-readable message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace edgeveritas
