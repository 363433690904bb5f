#include "cowrite/error.hpp"

namespace cowrite {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kUnknownEventKind: return "UnknownEventKind";
    case ErrorCode::kNonMonotonicSeq: return "NonMonotonicSeq";
    case ErrorCode::kNonMonotonicTimestamp: return "NonMonotonicTimestamp";
    case ErrorCode::kDanglingSuggestionSelect: return "DanglingSuggestionSelect";
    case ErrorCode::kPositionOutOfBounds: return "PositionOutOfBounds";
    case ErrorCode::kDeleteMismatch: return "DeleteMismatch";
    case ErrorCode::kFinalTextMismatch: return "FinalTextMismatch";
    case ErrorCode::kInconsistentDimension: return "InconsistentDimension";
    case ErrorCode::kEmptyStore: return "EmptyStore";
    case ErrorCode::kMalformedFloat: return "MalformedFloat";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kTooFewSnapshots: return "TooFewSnapshots";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kThresholdInvalid: return "ThresholdInvalid";
    case ErrorCode::kModeMismatch: return "ModeMismatch";
    case ErrorCode::kIncompleteSuggestions: return "IncompleteSuggestions";
    case ErrorCode::kEmptyResponse: return "EmptyResponse";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kBackendTimeout: return "BackendTimeout";
    case ErrorCode::kInvalidPersonaParams: return "InvalidPersonaParams";
    case ErrorCode::kSimulatorInconsistency: return "SimulatorInconsistency";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message,
                     std::optional<std::size_t> line,
                     std::optional<std::int64_t> seq) {
  std::string out(to_string(code));
  if (line) out += " at line " + std::to_string(*line);
  if (seq) out += " at seq " + std::to_string(*seq);
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, std::string message,
             std::optional<std::size_t> line, std::optional<std::int64_t> seq)
    : std::runtime_error(decorate(code, message, line, seq)),
      code_(code),
      line_(line),
      seq_(seq) {}

}  // namespace cowrite
