#include "cowrite/session_log.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cowrite/error.hpp"

namespace cowrite {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kInsert: return "insert";
    case EventKind::kDelete: return "delete";
    case EventKind::kCursorMove: return "cursor_move";
    case EventKind::kSuggestionOpen: return "suggestion_open";
    case EventKind::kSuggestionSelect: return "suggestion_select";
    case EventKind::kSuggestionDismiss: return "suggestion_dismiss";
  }
  return "unknown";
}

std::optional<EventKind> parse_event_kind(std::string_view name) {
  for (auto kind : {EventKind::kInsert, EventKind::kDelete, EventKind::kCursorMove,
                    EventKind::kSuggestionOpen, EventKind::kSuggestionSelect,
                    EventKind::kSuggestionDismiss}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string_view to_string(AssistantMode mode) {
  switch (mode) {
    case AssistantMode::kSocratic: return "socratic";
    case AssistantMode::kAutocomplete: return "autocomplete";
    case AssistantMode::kNone: return "none";
  }
  return "none";
}

std::optional<AssistantMode> parse_assistant_mode(std::string_view name) {
  for (auto mode : {AssistantMode::kSocratic, AssistantMode::kAutocomplete,
                    AssistantMode::kNone}) {
    if (to_string(mode) == name) return mode;
  }
  return std::nullopt;
}

std::string_view to_string(SnapshotTrigger trigger) {
  switch (trigger) {
    case SnapshotTrigger::kInitial: return "initial";
    case SnapshotTrigger::kCursorAfterInsert: return "cursor_after_insert";
    case SnapshotTrigger::kSuggestionRequest: return "suggestion_request";
    case SnapshotTrigger::kSessionEnd: return "session_end";
  }
  return "initial";
}

std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::kWriter: return "writer";
    case Origin::kAiAccepted: return "ai_accepted";
    case Origin::kAiModified: return "ai_modified";
  }
  return "writer";
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kMalformedRecord, what, line);
}

std::string take_string(Json& obj, const char* key, std::size_t line,
                        bool required = true) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) malformed(line, std::string("missing \"") + key + "\"");
    return {};
  }
  if (!it->is_string()) malformed(line, std::string("\"") + key + "\" must be a string");
  std::string value = it->get<std::string>();
  obj.erase(it);
  return value;
}

std::int64_t take_int(Json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) malformed(line, std::string("missing \"") + key + "\"");
  if (!it->is_number_integer()) {
    malformed(line, std::string("\"") + key + "\" must be an integer");
  }
  std::int64_t value = it->get<std::int64_t>();
  obj.erase(it);
  return value;
}

std::size_t take_index(Json& obj, const char* key, std::size_t line) {
  std::int64_t value = take_int(obj, key, line);
  if (value < 0) malformed(line, std::string("\"") + key + "\" must be non-negative");
  return static_cast<std::size_t>(value);
}

Json parse_line(const std::string& raw, std::size_t line) {
  Json obj;
  try {
    obj = Json::parse(raw);
  } catch (const Json::parse_error& e) {
    malformed(line, e.what());
  }
  if (!obj.is_object()) malformed(line, "record is not a JSON object");
  return obj;
}

SessionEvent parse_event(Json obj, std::size_t line) {
  SessionEvent ev;
  ev.seq = take_int(obj, "seq", line);
  ev.timestamp_ms = take_int(obj, "t_ms", line);
  if (ev.timestamp_ms < 0) malformed(line, "\"t_ms\" must be non-negative");
  const std::string kind_name = take_string(obj, "kind", line);
  auto kind = parse_event_kind(kind_name);
  if (!kind) {
    throw Error(ErrorCode::kUnknownEventKind, "\"" + kind_name + "\"", line, ev.seq);
  }
  ev.kind = *kind;
  switch (ev.kind) {
    case EventKind::kInsert:
    case EventKind::kDelete:
      ev.position = take_index(obj, "pos", line);
      ev.text = take_string(obj, "text", line);
      break;
    case EventKind::kCursorMove:
      ev.position = take_index(obj, "pos", line);
      break;
    case EventKind::kSuggestionOpen: {
      auto it = obj.find("suggestions");
      if (it == obj.end() || !it->is_array()) malformed(line, "missing \"suggestions\" array");
      if (it->empty() || it->size() > 4) malformed(line, "suggestion list must hold 1-4 items");
      for (const auto& item : *it) {
        if (!item.is_string()) malformed(line, "suggestions must be strings");
        ev.suggestions.push_back(item.get<std::string>());
      }
      obj.erase(it);
      break;
    }
    case EventKind::kSuggestionSelect:
      ev.selected_index = take_index(obj, "selected_index", line);
      break;
    case EventKind::kSuggestionDismiss:
      break;
  }
  ev.extras = std::move(obj);
  return ev;
}

// Ordering and suggestion pairing; `lines[i]` is the source line of event i
// or 0 when the log did not come from text.
void check_structure(const SessionLog& log, const std::vector<std::size_t>& lines) {
  const std::vector<std::string>* open = nullptr;
  for (std::size_t i = 0; i < log.events.size(); ++i) {
    const auto& ev = log.events[i];
    std::optional<std::size_t> line;
    if (i < lines.size()) line = lines[i];
    if (i > 0) {
      const auto& prev = log.events[i - 1];
      if (ev.seq <= prev.seq) {
        throw Error(ErrorCode::kNonMonotonicSeq,
                    "seq " + std::to_string(ev.seq) + " after " + std::to_string(prev.seq),
                    line, ev.seq);
      }
      if (ev.timestamp_ms < prev.timestamp_ms) {
        throw Error(ErrorCode::kNonMonotonicTimestamp, "timestamp went backwards", line,
                    ev.seq);
      }
    }
    switch (ev.kind) {
      case EventKind::kSuggestionOpen:
        open = &ev.suggestions;
        break;
      case EventKind::kSuggestionSelect:
        if (open == nullptr) {
          throw Error(ErrorCode::kDanglingSuggestionSelect, "select without open", line,
                      ev.seq);
        }
        if (ev.selected_index >= open->size()) {
          throw Error(ErrorCode::kMalformedRecord, "selected_index out of range", line,
                      ev.seq);
        }
        open = nullptr;
        break;
      case EventKind::kSuggestionDismiss:
        if (open == nullptr) {
          throw Error(ErrorCode::kDanglingSuggestionSelect, "dismiss without open", line,
                      ev.seq);
        }
        open = nullptr;
        break;
      default:
        break;
    }
  }
}

}  // namespace

SessionLog parse_session_log(std::istream& in) {
  SessionLog log;
  std::vector<std::size_t> lines;
  std::string raw;
  std::size_t line = 0;
  bool have_header = false;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.find_first_not_of(" \t") == std::string::npos) continue;
    Json obj = parse_line(raw, line);
    if (!have_header) {
      log.session_id = take_string(obj, "session_id", line);
      log.participant_id = take_string(obj, "participant_id", line);
      log.topic = take_string(obj, "topic", line);
      const std::string mode = take_string(obj, "assistant_mode", line);
      auto parsed = parse_assistant_mode(mode);
      if (!parsed) malformed(line, "unknown assistant_mode \"" + mode + "\"");
      log.assistant_mode = *parsed;
      if (auto it = obj.find("final_text"); it != obj.end() && !it->is_null()) {
        log.final_text = take_string(obj, "final_text", line);
      } else if (it != obj.end()) {
        obj.erase(it);
      }
      log.header_extras = std::move(obj);
      have_header = true;
      continue;
    }
    log.events.push_back(parse_event(std::move(obj), line));
    lines.push_back(line);
  }
  if (!have_header) malformed(line == 0 ? 1 : line, "missing header record");
  check_structure(log, lines);
  return log;
}

SessionLog parse_session_log(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_session_log(in);
}

SessionLog load_session_log(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return parse_session_log(in);
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

void append_extras(Json& out, const Json& extras) {
  if (!extras.is_object()) return;
  for (auto it = extras.begin(); it != extras.end(); ++it) {
    if (!out.contains(it.key())) out[it.key()] = it.value();
  }
}

}  // namespace

void write_session_log(std::ostream& out, const SessionLog& log) {
  Json header = Json::object();
  header["session_id"] = log.session_id;
  header["participant_id"] = log.participant_id;
  header["topic"] = log.topic;
  header["assistant_mode"] = to_string(log.assistant_mode);
  if (log.final_text) header["final_text"] = *log.final_text;
  append_extras(header, log.header_extras);
  out << header.dump() << '\n';
  for (const auto& ev : log.events) {
    Json rec = Json::object();
    rec["seq"] = ev.seq;
    rec["t_ms"] = ev.timestamp_ms;
    rec["kind"] = to_string(ev.kind);
    switch (ev.kind) {
      case EventKind::kInsert:
      case EventKind::kDelete:
        rec["pos"] = ev.position;
        rec["text"] = ev.text;
        break;
      case EventKind::kCursorMove:
        rec["pos"] = ev.position;
        break;
      case EventKind::kSuggestionOpen:
        rec["suggestions"] = ev.suggestions;
        break;
      case EventKind::kSuggestionSelect:
        rec["selected_index"] = ev.selected_index;
        break;
      case EventKind::kSuggestionDismiss:
        break;
    }
    append_extras(rec, ev.extras);
    out << rec.dump() << '\n';
  }
}

std::string serialize_session_log(const SessionLog& log) {
  std::ostringstream out;
  write_session_log(out, log);
  return out.str();
}

// ---------------------------------------------------------------------------
// Replay

void Replayer::apply(const SessionEvent& event) {
  if (event.kind == EventKind::kInsert) {
    if (event.position > text_.size()) {
      throw Error(ErrorCode::kPositionOutOfBounds,
                  "insert at " + std::to_string(event.position) + " beyond length " +
                      std::to_string(text_.size()),
                  std::nullopt, event.seq);
    }
    text_.insert(event.position, event.text);
  } else if (event.kind == EventKind::kDelete) {
    if (event.position > text_.size() ||
        event.text.size() > text_.size() - event.position) {
      throw Error(ErrorCode::kPositionOutOfBounds,
                  "delete of " + std::to_string(event.text.size()) + " at " +
                      std::to_string(event.position) + " beyond length " +
                      std::to_string(text_.size()),
                  std::nullopt, event.seq);
    }
    if (text_.compare(event.position, event.text.size(), event.text) != 0) {
      throw Error(ErrorCode::kDeleteMismatch,
                  "recorded \"" + event.text + "\" but document holds \"" +
                      text_.substr(event.position, event.text.size()) + "\"",
                  std::nullopt, event.seq);
    }
    text_.erase(event.position, event.text.size());
  }
}

std::string replay(const SessionLog& log, std::int64_t upto_seq) {
  Replayer replayer;
  for (const auto& ev : log.events) {
    if (ev.seq > upto_seq) break;
    replayer.apply(ev);
  }
  return replayer.text();
}

std::string replay(const SessionLog& log) {
  Replayer replayer;
  for (const auto& ev : log.events) replayer.apply(ev);
  return replayer.text();
}

void verify_log(const SessionLog& log) {
  check_structure(log, {});
  std::string text = replay(log);
  if (log.final_text && *log.final_text != text) {
    std::size_t at = 0;
    while (at < text.size() && at < log.final_text->size() && text[at] == (*log.final_text)[at]) {
      ++at;
    }
    throw Error(ErrorCode::kFinalTextMismatch,
                "replay diverges from recorded final_text at offset " + std::to_string(at));
  }
}

// ---------------------------------------------------------------------------
// Snapshots

std::vector<std::string> Snapshot::sentences() const {
  std::vector<std::string> out;
  out.reserve(sentence_spans.size());
  for (const auto& s : sentence_spans) out.push_back(text.substr(s.begin, s.size()));
  return out;
}

std::vector<Snapshot> reconstruct_snapshots(const SessionLog& log) {
  std::vector<Snapshot> out;
  Replayer replayer;
  auto emit = [&](std::int64_t t, SnapshotTrigger trigger, std::size_t end) {
    Snapshot snap;
    snap.index = out.size();
    snap.timestamp_ms = t;
    snap.text = replayer.text();
    snap.sentence_spans = sentence_spans(snap.text);
    snap.trigger = trigger;
    snap.events.begin = out.empty() ? 0 : out.back().events.end;
    snap.events.end = end;
    out.push_back(std::move(snap));
  };
  emit(0, SnapshotTrigger::kInitial, 0);
  bool edited = false;
  for (std::size_t i = 0; i < log.events.size(); ++i) {
    const auto& ev = log.events[i];
    replayer.apply(ev);
    if (ev.is_text_edit()) {
      edited = true;
    } else if (ev.kind == EventKind::kCursorMove && edited) {
      emit(ev.timestamp_ms, SnapshotTrigger::kCursorAfterInsert, i + 1);
      edited = false;
    } else if (ev.kind == EventKind::kSuggestionOpen) {
      emit(ev.timestamp_ms, SnapshotTrigger::kSuggestionRequest, i + 1);
      edited = false;
    }
  }
  emit(log.duration_ms(), SnapshotTrigger::kSessionEnd, log.events.size());
  return out;
}

// ---------------------------------------------------------------------------
// Authorship

std::vector<bool> ai_insert_flags(const SessionLog& log) {
  std::vector<bool> flags(log.events.size(), false);
  const std::vector<std::string>* open = nullptr;
  for (std::size_t i = 0; i < log.events.size(); ++i) {
    const auto& ev = log.events[i];
    if (ev.kind == EventKind::kSuggestionOpen) {
      open = &ev.suggestions;
    } else if (ev.kind == EventKind::kSuggestionSelect) {
      if (open != nullptr && i + 1 < log.events.size() && ev.selected_index < open->size()) {
        const auto& next = log.events[i + 1];
        flags[i + 1] = next.kind == EventKind::kInsert && next.text == (*open)[ev.selected_index];
      }
      open = nullptr;
    } else if (ev.kind == EventKind::kSuggestionDismiss) {
      open = nullptr;
    }
  }
  return flags;
}

namespace {

constexpr std::size_t kNoBlock = static_cast<std::size_t>(-1);

// Run-length provenance over the live document. Each accepted suggestion is
// a block; removing enough of a block's characters flips it to modified.
class AuthorshipTracker {
 public:
  explicit AuthorshipTracker(double threshold) : threshold_(threshold) {}

  void insert(std::size_t pos, std::size_t len, bool ai) {
    if (len == 0) return;
    std::size_t block = kNoBlock;
    if (ai) {
      block = blocks_.size();
      blocks_.push_back({len, 0, false});
    }
    std::size_t idx = split(pos);
    runs_.insert(runs_.begin() + static_cast<std::ptrdiff_t>(idx), Run{len, block});
    merge_around(idx);
  }

  void erase(std::size_t pos, std::size_t len) {
    if (len == 0) return;
    std::size_t first = split(pos);
    std::size_t last = split(pos + len);
    for (std::size_t i = first; i < last; ++i) {
      if (runs_[i].block != kNoBlock) {
        auto& b = blocks_[runs_[i].block];
        b.removed += runs_[i].length;
        if (!b.modified &&
            static_cast<double>(b.removed) >= threshold_ * static_cast<double>(b.original)) {
          b.modified = true;
        }
      }
    }
    runs_.erase(runs_.begin() + static_cast<std::ptrdiff_t>(first),
                runs_.begin() + static_cast<std::ptrdiff_t>(last));
    if (first > 0) merge_around(first - 1);
  }

  AuthorshipMap map() const {
    AuthorshipMap out;
    std::size_t offset = 0;
    for (const auto& r : runs_) {
      Origin origin = Origin::kWriter;
      if (r.block != kNoBlock) {
        origin = blocks_[r.block].modified ? Origin::kAiModified : Origin::kAiAccepted;
      }
      if (!out.spans.empty() && out.spans.back().origin == origin) {
        out.spans.back().length += r.length;
      } else {
        out.spans.push_back({offset, r.length, origin});
      }
      offset += r.length;
    }
    return out;
  }

 private:
  struct Run {
    std::size_t length;
    std::size_t block;
  };
  struct Block {
    std::size_t original;
    std::size_t removed;
    bool modified;
  };

  // Ensures a run boundary at `pos`; returns the index of the run starting
  // there (or runs_.size() at the end).
  std::size_t split(std::size_t pos) {
    std::size_t offset = 0;
    for (std::size_t i = 0; i < runs_.size(); ++i) {
      if (offset == pos) return i;
      if (pos < offset + runs_[i].length) {
        Run tail{offset + runs_[i].length - pos, runs_[i].block};
        runs_[i].length = pos - offset;
        runs_.insert(runs_.begin() + static_cast<std::ptrdiff_t>(i) + 1, tail);
        return i + 1;
      }
      offset += runs_[i].length;
    }
    return runs_.size();
  }

  void merge_around(std::size_t idx) {
    if (idx + 1 < runs_.size() && runs_[idx].block == runs_[idx + 1].block) {
      runs_[idx].length += runs_[idx + 1].length;
      runs_.erase(runs_.begin() + static_cast<std::ptrdiff_t>(idx) + 1);
    }
    if (idx > 0 && idx < runs_.size() && runs_[idx - 1].block == runs_[idx].block) {
      runs_[idx - 1].length += runs_[idx].length;
      runs_.erase(runs_.begin() + static_cast<std::ptrdiff_t>(idx));
    }
  }

  double threshold_;
  std::vector<Run> runs_;
  std::vector<Block> blocks_;
};

}  // namespace

std::size_t AuthorshipMap::document_length() const {
  std::size_t total = 0;
  for (const auto& s : spans) total += s.length;
  return total;
}

std::size_t AuthorshipMap::count(Origin origin) const {
  std::size_t total = 0;
  for (const auto& s : spans) {
    if (s.origin == origin) total += s.length;
  }
  return total;
}

double AuthorshipMap::ai_share() const {
  const std::size_t len = document_length();
  if (len == 0) return 0.0;
  return static_cast<double>(count(Origin::kAiAccepted) + count(Origin::kAiModified)) /
         static_cast<double>(len);
}

AuthorshipMap attribute_authorship(const SessionLog& log, std::int64_t upto_seq,
                                   AuthorshipOptions options) {
  const auto flags = ai_insert_flags(log);
  Replayer replayer;
  AuthorshipTracker tracker(options.modified_threshold);
  for (std::size_t i = 0; i < log.events.size(); ++i) {
    const auto& ev = log.events[i];
    if (ev.seq > upto_seq) break;
    replayer.apply(ev);
    if (ev.kind == EventKind::kInsert) {
      tracker.insert(ev.position, ev.text.size(), flags[i]);
    } else if (ev.kind == EventKind::kDelete) {
      tracker.erase(ev.position, ev.text.size());
    }
  }
  return tracker.map();
}

AuthorshipMap attribute_authorship(const SessionLog& log, AuthorshipOptions options) {
  return attribute_authorship(log, log.max_seq(), options);
}

}  // namespace cowrite
