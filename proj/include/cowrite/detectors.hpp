#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cowrite/metrics.hpp"
#include "cowrite/session_log.hpp"

namespace cowrite {

// Thresholds for the three interaction patterns. What counts as "large" or
// "significant" depends on topic and task length, so every value is a
// starting point meant to be overridden. See docs/calibration.md.
struct DetectorConfig {
  std::size_t large_text_chars = 400;
  double significant_expansion = 0.3;
  std::size_t minimal_delta_chars = 150;
  std::size_t min_run_events = 15;
  std::int64_t min_run_duration_ms = 120000;
  double early_phase_fraction = 0.33;
  double substantial_expansion = 0.5;
  // 0 disables the provenance condition for echoing.
  double echo_ai_fraction = 0.0;
  bool topic_shift_requires_writer_source = true;

  // Throws ConfigInvalid.
  void validate() const;
};

enum class PatternKind {
  kMindlessEchoing,
  kPrematureProlongedCopyediting,
  kWriterInitiatedTopicShift,
};

std::string_view to_string(PatternKind kind);
std::optional<PatternKind> parse_pattern_kind(std::string_view name);

struct SpanEvidence {
  std::size_t chars_generated = 0;
  std::size_t delta_chars = 0;
  double expansion_sum = 0.0;
  double ai_char_fraction = 0.0;
  bool starts_at_boundary = false;
  bool premature = false;
};

struct InteractionSpan {
  PatternKind kind = PatternKind::kMindlessEchoing;
  // Indices into SessionLog::events, first text edit through last.
  EventRange events;
  std::int64_t first_seq = 0;
  std::int64_t last_seq = 0;
  std::int64_t t_start_ms = 0;
  std::int64_t t_end_ms = 0;
  SpanEvidence evidence;
};

// The text edits of one snapshot transition. Runs are built from whole
// units: expansion is only defined per transition, so splitting one would
// count its expansion twice.
struct EditUnit {
  std::size_t point = 0;  // index into ExpansionSeries::points
  EventRange events;      // first through last text edit
  std::size_t edit_count = 0;
  std::size_t chars_inserted = 0;
  std::size_t chars_deleted = 0;
  std::size_t ai_chars_inserted = 0;
  double expansion = 0.0;
  std::int64_t t_first_ms = 0;
  std::int64_t t_last_ms = 0;
  // Boundary status of the unit's first insert; empty for delete-only units.
  std::optional<bool> first_insert_at_boundary;
  // False when two or more cursor moves separate this unit from the
  // previous one.
  bool continues_previous = false;
};

// Precomputed per-session inputs shared by the detectors.
struct DetectionInput {
  const SessionLog* log = nullptr;
  std::vector<EditUnit> units;
};

DetectionInput prepare_detection(const SessionLog& log, std::span<const Snapshot> snapshots,
                                 const ExpansionSeries& series);

std::vector<InteractionSpan> detect_mindless_echoing(const DetectionInput& input,
                                                     const DetectorConfig& cfg);
std::vector<InteractionSpan> detect_copyediting(const DetectionInput& input,
                                                const DetectorConfig& cfg);
std::vector<InteractionSpan> detect_topic_shift(const DetectionInput& input,
                                                const DetectorConfig& cfg);

std::vector<InteractionSpan> detect_mindless_echoing(const SessionLog& log,
                                                     std::span<const Snapshot> snapshots,
                                                     const ExpansionSeries& series,
                                                     const DetectorConfig& cfg);
std::vector<InteractionSpan> detect_copyediting(const SessionLog& log,
                                                std::span<const Snapshot> snapshots,
                                                const ExpansionSeries& series,
                                                const DetectorConfig& cfg);
std::vector<InteractionSpan> detect_topic_shift(const SessionLog& log,
                                                std::span<const Snapshot> snapshots,
                                                const ExpansionSeries& series,
                                                const DetectorConfig& cfg);

// All three kinds, ordered by kind then position.
std::vector<InteractionSpan> detect_all(const DetectionInput& input, const DetectorConfig& cfg);

// Aggregates over units [first, last] (inclusive), as the detectors see them.
SpanEvidence run_evidence(const DetectionInput& input, std::size_t first, std::size_t last,
                          const DetectorConfig& cfg);

// Pattern predicates over units [first, last], exposed so simulated ground
// truth can be checked against exactly what the detectors test.
bool echoing_holds(const DetectionInput& input, std::size_t first, std::size_t last,
                   const DetectorConfig& cfg);
bool copyediting_holds(const DetectionInput& input, std::size_t first, std::size_t last,
                       const DetectorConfig& cfg);
bool topic_shift_holds(const DetectionInput& input, std::size_t first, std::size_t last,
                       const DetectorConfig& cfg);

}  // namespace cowrite
