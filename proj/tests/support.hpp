#pragma once

#include <string>
#include <vector>

#include "cowrite/session_log.hpp"

namespace testkit {

using cowrite::EventKind;
using cowrite::SessionEvent;
using cowrite::SessionLog;

// Appends events with consecutive seqs; each call advances the clock by `dt`.
class LogBuilder {
 public:
  explicit LogBuilder(std::string id = "t") { log_.session_id = std::move(id); }

  LogBuilder& insert(std::size_t pos, std::string text, std::int64_t dt = 1000) {
    SessionEvent e = base(EventKind::kInsert, dt);
    e.position = pos;
    e.text = std::move(text);
    return push(std::move(e));
  }
  LogBuilder& erase(std::size_t pos, std::string text, std::int64_t dt = 1000) {
    SessionEvent e = base(EventKind::kDelete, dt);
    e.position = pos;
    e.text = std::move(text);
    return push(std::move(e));
  }
  LogBuilder& cursor(std::size_t pos, std::int64_t dt = 1000) {
    SessionEvent e = base(EventKind::kCursorMove, dt);
    e.position = pos;
    return push(std::move(e));
  }
  LogBuilder& open(std::vector<std::string> items, std::int64_t dt = 1000) {
    SessionEvent e = base(EventKind::kSuggestionOpen, dt);
    e.suggestions = std::move(items);
    return push(std::move(e));
  }
  LogBuilder& select(std::size_t index, std::int64_t dt = 1000) {
    SessionEvent e = base(EventKind::kSuggestionSelect, dt);
    e.selected_index = index;
    return push(std::move(e));
  }
  LogBuilder& dismiss(std::int64_t dt = 1000) { return push(base(EventKind::kSuggestionDismiss, dt)); }

  // Accept: open, select, insert the chosen item at `pos`.
  LogBuilder& accept(std::size_t pos, std::string text, std::int64_t dt = 1000) {
    open({text, "other one.", "other two.", "other three."}, dt);
    select(0, dt);
    return insert(pos, text, dt);
  }

  LogBuilder& wait(std::int64_t dt) {
    t_ += dt;
    return *this;
  }

  std::int64_t now() const { return t_; }
  SessionLog& log() { return log_; }
  SessionLog build() const { return log_; }

 private:
  SessionEvent base(EventKind kind, std::int64_t dt) {
    t_ += dt;
    SessionEvent e;
    e.seq = ++seq_;
    e.timestamp_ms = t_;
    e.kind = kind;
    return e;
  }
  LogBuilder& push(SessionEvent e) {
    log_.events.push_back(std::move(e));
    return *this;
  }

  SessionLog log_;
  std::int64_t seq_ = 0;
  std::int64_t t_ = 0;
};

}  // namespace testkit
