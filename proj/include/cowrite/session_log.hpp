#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cowrite/sentences.hpp"

namespace cowrite {

using Json = nlohmann::ordered_json;

enum class EventKind {
  kInsert,
  kDelete,
  kCursorMove,
  kSuggestionOpen,
  kSuggestionSelect,
  kSuggestionDismiss,
};

enum class AssistantMode { kSocratic, kAutocomplete, kNone };

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view name);
std::string_view to_string(AssistantMode mode);
std::optional<AssistantMode> parse_assistant_mode(std::string_view name);

// One keystroke-level record. Positions are byte offsets into the UTF-8
// document. Unrecognized JSON fields ride along in `extras`.
struct SessionEvent {
  std::int64_t seq = 0;
  std::int64_t timestamp_ms = 0;
  EventKind kind = EventKind::kCursorMove;
  std::size_t position = 0;
  std::string text;
  std::vector<std::string> suggestions;
  std::size_t selected_index = 0;
  Json extras = Json::object();

  bool is_text_edit() const {
    return kind == EventKind::kInsert || kind == EventKind::kDelete;
  }

  friend bool operator==(const SessionEvent&, const SessionEvent&) = default;
};

struct SessionLog {
  std::string session_id;
  std::string participant_id;
  std::string topic;
  AssistantMode assistant_mode = AssistantMode::kNone;
  std::vector<SessionEvent> events;
  std::optional<std::string> final_text;
  Json header_extras = Json::object();

  std::int64_t max_seq() const { return events.empty() ? 0 : events.back().seq; }
  std::int64_t duration_ms() const {
    return events.empty() ? 0 : events.back().timestamp_ms;
  }

  friend bool operator==(const SessionLog&, const SessionLog&) = default;
};

// Parses the JSONL session format: a header object on the first non-blank
// line, then one event object per line. Structural invariants (ordering,
// suggestion pairing, field types) are enforced here; text positions are
// checked on replay.
SessionLog parse_session_log(std::istream& in);
SessionLog parse_session_log(std::string_view text);
SessionLog load_session_log(const std::string& path);

void write_session_log(std::ostream& out, const SessionLog& log);
std::string serialize_session_log(const SessionLog& log);

// Applies text edits one at a time with bounds and content checks.
class Replayer {
 public:
  void apply(const SessionEvent& event);
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

std::string replay(const SessionLog& log, std::int64_t upto_seq);
std::string replay(const SessionLog& log);

// Replays the log and checks it against `final_text` when present.
void verify_log(const SessionLog& log);

// Half-open range of indices into SessionLog::events.
struct EventRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool empty() const { return begin >= end; }
  std::size_t size() const { return empty() ? 0 : end - begin; }
  bool contains(std::size_t index) const { return index >= begin && index < end; }
  friend bool operator==(const EventRange&, const EventRange&) = default;
};

enum class SnapshotTrigger { kInitial, kCursorAfterInsert, kSuggestionRequest, kSessionEnd };

std::string_view to_string(SnapshotTrigger trigger);

struct Snapshot {
  std::size_t index = 0;
  std::int64_t timestamp_ms = 0;
  std::string text;
  std::vector<TextSpan> sentence_spans;
  SnapshotTrigger trigger = SnapshotTrigger::kInitial;
  // Events folded into this snapshot since the previous one.
  EventRange events;

  std::size_t sentence_count() const { return sentence_spans.size(); }
  std::vector<std::string> sentences() const;
};

// Captures the document at the initial state, at every cursor move that
// follows text edits, at every suggestion request, and at session end.
std::vector<Snapshot> reconstruct_snapshots(const SessionLog& log);

enum class Origin { kWriter, kAiAccepted, kAiModified };

std::string_view to_string(Origin origin);

struct AuthorshipSpan {
  std::size_t begin = 0;
  std::size_t length = 0;
  Origin origin = Origin::kWriter;
  friend bool operator==(const AuthorshipSpan&, const AuthorshipSpan&) = default;
};

// Provenance spans that partition the document with no gaps.
struct AuthorshipMap {
  std::vector<AuthorshipSpan> spans;

  std::size_t document_length() const;
  std::size_t count(Origin origin) const;
  // Fraction of characters with AI provenance (accepted or modified).
  double ai_share() const;
};

// An insert is AI-authored when it directly follows a suggestion_select and
// carries exactly the selected suggestion.
std::vector<bool> ai_insert_flags(const SessionLog& log);

struct AuthorshipOptions {
  // Fraction of an accepted suggestion's characters that must be removed
  // before the rest of it counts as modified.
  double modified_threshold = 0.5;
};

AuthorshipMap attribute_authorship(const SessionLog& log,
                                   AuthorshipOptions options = {});
// Provenance of the document as replayed through `upto_seq`.
AuthorshipMap attribute_authorship(const SessionLog& log, std::int64_t upto_seq,
                                   AuthorshipOptions options = {});

}  // namespace cowrite
