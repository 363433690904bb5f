#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cowrite {

enum class ErrorCode {
  kMalformedRecord,
  kUnknownEventKind,
  kNonMonotonicSeq,
  kNonMonotonicTimestamp,
  kDanglingSuggestionSelect,
  kPositionOutOfBounds,
  kDeleteMismatch,
  kFinalTextMismatch,
  kInconsistentDimension,
  kEmptyStore,
  kMalformedFloat,
  kDimensionMismatch,
  kTooFewSnapshots,
  kConfigInvalid,
  kThresholdInvalid,
  kModeMismatch,
  kIncompleteSuggestions,
  kEmptyResponse,
  kBackendUnavailable,
  kBackendTimeout,
  kInvalidPersonaParams,
  kSimulatorInconsistency,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library. `line` is 1-based within the input
// stream when the error comes from parsing; `seq` names the offending event.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message,
        std::optional<std::size_t> line = std::nullopt,
        std::optional<std::int64_t> seq = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }
  std::optional<std::int64_t> seq() const noexcept { return seq_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
  std::optional<std::int64_t> seq_;
};

}  // namespace cowrite
