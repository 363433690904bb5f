#include "cowrite/detectors.hpp"

#include "cowrite/error.hpp"

namespace cowrite {

std::string_view to_string(PatternKind kind) {
  switch (kind) {
    case PatternKind::kMindlessEchoing: return "mindless_echoing";
    case PatternKind::kPrematureProlongedCopyediting: return "premature_prolonged_copyediting";
    case PatternKind::kWriterInitiatedTopicShift: return "writer_initiated_topic_shift";
  }
  return "mindless_echoing";
}

std::optional<PatternKind> parse_pattern_kind(std::string_view name) {
  for (auto k : {PatternKind::kMindlessEchoing, PatternKind::kPrematureProlongedCopyediting,
                 PatternKind::kWriterInitiatedTopicShift}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

void DetectorConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kConfigInvalid, what); };
  if (significant_expansion < 0.0) fail("significant_expansion must be >= 0");
  if (substantial_expansion < 0.0) fail("substantial_expansion must be >= 0");
  if (significant_expansion > substantial_expansion) {
    fail("significant_expansion must not exceed substantial_expansion");
  }
  if (min_run_duration_ms < 0) fail("min_run_duration_ms must be >= 0");
  if (!(early_phase_fraction > 0.0 && early_phase_fraction <= 1.0)) {
    fail("early_phase_fraction must lie in (0, 1]");
  }
  if (echo_ai_fraction < 0.0 || echo_ai_fraction > 1.0) {
    fail("echo_ai_fraction must lie in [0, 1]");
  }
}

DetectionInput prepare_detection(const SessionLog& log, std::span<const Snapshot> snapshots,
                                 const ExpansionSeries& series) {
  (void)snapshots;  // transitions are carried by the series points
  DetectionInput input;
  input.log = &log;
  const auto ai = ai_insert_flags(log);
  Replayer replayer;
  std::size_t next_event = 0;
  std::size_t cursor_moves = 0;
  bool any_unit = false;
  auto advance_to = [&](std::size_t end) {
    for (; next_event < end; ++next_event) {
      const auto& ev = log.events[next_event];
      if (ev.kind == EventKind::kCursorMove) ++cursor_moves;
      replayer.apply(ev);
    }
  };
  for (std::size_t p = 0; p < series.points.size(); ++p) {
    const auto& point = series.points[p];
    EditUnit unit;
    unit.point = p;
    unit.expansion = point.expansion;
    bool started = false;
    for (std::size_t i = point.events.begin; i < point.events.end; ++i) {
      const auto& ev = log.events[i];
      if (!ev.is_text_edit()) continue;
      advance_to(i);
      if (!started) {
        started = true;
        unit.events.begin = i;
        unit.t_first_ms = ev.timestamp_ms;
        unit.continues_previous = any_unit && cursor_moves <= 1;
      }
      if (ev.kind == EventKind::kInsert) {
        if (!unit.first_insert_at_boundary) {
          unit.first_insert_at_boundary = is_boundary(replayer.text(), ev.position);
        }
        unit.chars_inserted += ev.text.size();
        if (ai[i]) unit.ai_chars_inserted += ev.text.size();
      } else {
        unit.chars_deleted += ev.text.size();
      }
      ++unit.edit_count;
      unit.events.end = i + 1;
      unit.t_last_ms = ev.timestamp_ms;
      advance_to(i + 1);
      cursor_moves = 0;
    }
    if (started) {
      input.units.push_back(unit);
      any_unit = true;
    }
  }
  return input;
}

namespace {

struct Accumulator {
  std::size_t inserted = 0;
  std::size_t deleted = 0;
  std::size_t ai_inserted = 0;
  std::size_t edits = 0;
  double expansion = 0.0;
  std::int64_t t_first = 0;
  std::int64_t t_last = 0;
  std::optional<bool> boundary;
  bool empty = true;

  void add(const EditUnit& u) {
    if (empty) t_first = u.t_first_ms;
    empty = false;
    inserted += u.chars_inserted;
    deleted += u.chars_deleted;
    ai_inserted += u.ai_chars_inserted;
    edits += u.edit_count;
    expansion += u.expansion;
    t_last = u.t_last_ms;
    if (!boundary && u.first_insert_at_boundary) boundary = u.first_insert_at_boundary;
  }
  std::size_t delta() const { return inserted + deleted; }
  double ai_fraction() const {
    return inserted == 0 ? 0.0
                         : static_cast<double>(ai_inserted) / static_cast<double>(inserted);
  }
};

bool echo_ok(const Accumulator& a, const DetectorConfig& cfg) {
  if (a.inserted < cfg.large_text_chars) return false;
  if (!(a.expansion < cfg.significant_expansion)) return false;
  return cfg.echo_ai_fraction <= 0.0 || a.ai_fraction() >= cfg.echo_ai_fraction;
}

bool echo_exhausted(const Accumulator& a, const DetectorConfig& cfg) {
  return a.expansion >= cfg.significant_expansion;
}

bool copyedit_ok(const Accumulator& a, const DetectorConfig& cfg) {
  const bool prolonged =
      a.edits >= cfg.min_run_events || (a.t_last - a.t_first) >= cfg.min_run_duration_ms;
  return prolonged && a.delta() < cfg.minimal_delta_chars &&
         a.expansion < cfg.significant_expansion;
}

bool copyedit_exhausted(const Accumulator& a, const DetectorConfig& cfg) {
  return a.delta() >= cfg.minimal_delta_chars || a.expansion >= cfg.significant_expansion;
}

bool topic_ok(const Accumulator& a, const DetectorConfig& cfg) {
  if (!a.boundary.value_or(false)) return false;
  if (a.delta() > cfg.minimal_delta_chars) return false;
  if (!(a.expansion >= cfg.substantial_expansion)) return false;
  return !cfg.topic_shift_requires_writer_source || a.ai_fraction() < 0.5;
}

bool topic_exhausted(const Accumulator& a, const DetectorConfig& cfg) {
  return a.delta() > cfg.minimal_delta_chars;
}

using Predicate = bool (*)(const Accumulator&, const DetectorConfig&);

bool contiguous(const DetectionInput& input, std::size_t first, std::size_t last) {
  for (std::size_t u = first + 1; u <= last; ++u) {
    if (!input.units[u].continues_previous) return false;
  }
  return true;
}

Accumulator accumulate(const DetectionInput& input, std::size_t first, std::size_t last) {
  Accumulator acc;
  for (std::size_t u = first; u <= last; ++u) acc.add(input.units[u]);
  return acc;
}

InteractionSpan make_span(const DetectionInput& input, PatternKind kind, std::size_t first,
                          std::size_t last, const DetectorConfig& cfg) {
  InteractionSpan span;
  span.kind = kind;
  span.events = {input.units[first].events.begin, input.units[last].events.end};
  span.first_seq = input.log->events[span.events.begin].seq;
  span.last_seq = input.log->events[span.events.end - 1].seq;
  span.t_start_ms = input.units[first].t_first_ms;
  span.t_end_ms = input.units[last].t_last_ms;
  span.evidence = run_evidence(input, first, last, cfg);
  return span;
}

// Leftmost start first; from each start take the longest qualifying run,
// then resume after it. `exhausted` marks accumulators that no extension
// can rescue.
std::vector<InteractionSpan> scan(const DetectionInput& input, const DetectorConfig& cfg,
                                  PatternKind kind, Predicate ok, Predicate exhausted) {
  cfg.validate();
  std::vector<InteractionSpan> spans;
  const std::size_t n = input.units.size();
  std::size_t a = 0;
  while (a < n) {
    Accumulator acc;
    std::optional<std::size_t> best;
    for (std::size_t b = a; b < n; ++b) {
      if (b > a && !input.units[b].continues_previous) break;
      acc.add(input.units[b]);
      if (ok(acc, cfg)) best = b;
      if (exhausted(acc, cfg)) break;
    }
    if (best) {
      spans.push_back(make_span(input, kind, a, *best, cfg));
      a = *best + 1;
    } else {
      ++a;
    }
  }
  return spans;
}

}  // namespace

SpanEvidence run_evidence(const DetectionInput& input, std::size_t first, std::size_t last,
                          const DetectorConfig& cfg) {
  const Accumulator acc = accumulate(input, first, last);
  SpanEvidence ev;
  ev.chars_generated = acc.inserted;
  ev.delta_chars = acc.delta();
  ev.expansion_sum = acc.expansion;
  ev.ai_char_fraction = acc.ai_fraction();
  ev.starts_at_boundary = acc.boundary.value_or(false);
  const double cutoff =
      cfg.early_phase_fraction * static_cast<double>(input.log->duration_ms());
  ev.premature = static_cast<double>(acc.t_first) < cutoff;
  return ev;
}

bool echoing_holds(const DetectionInput& input, std::size_t first, std::size_t last,
                   const DetectorConfig& cfg) {
  return contiguous(input, first, last) && echo_ok(accumulate(input, first, last), cfg);
}

bool copyediting_holds(const DetectionInput& input, std::size_t first, std::size_t last,
                       const DetectorConfig& cfg) {
  return contiguous(input, first, last) && copyedit_ok(accumulate(input, first, last), cfg);
}

bool topic_shift_holds(const DetectionInput& input, std::size_t first, std::size_t last,
                       const DetectorConfig& cfg) {
  return contiguous(input, first, last) && topic_ok(accumulate(input, first, last), cfg);
}

std::vector<InteractionSpan> detect_mindless_echoing(const DetectionInput& input,
                                                     const DetectorConfig& cfg) {
  return scan(input, cfg, PatternKind::kMindlessEchoing, echo_ok, echo_exhausted);
}

std::vector<InteractionSpan> detect_copyediting(const DetectionInput& input,
                                                const DetectorConfig& cfg) {
  return scan(input, cfg, PatternKind::kPrematureProlongedCopyediting, copyedit_ok,
              copyedit_exhausted);
}

std::vector<InteractionSpan> detect_topic_shift(const DetectionInput& input,
                                                const DetectorConfig& cfg) {
  return scan(input, cfg, PatternKind::kWriterInitiatedTopicShift, topic_ok, topic_exhausted);
}

std::vector<InteractionSpan> detect_mindless_echoing(const SessionLog& log,
                                                     std::span<const Snapshot> snapshots,
                                                     const ExpansionSeries& series,
                                                     const DetectorConfig& cfg) {
  cfg.validate();
  return detect_mindless_echoing(prepare_detection(log, snapshots, series), cfg);
}

std::vector<InteractionSpan> detect_copyediting(const SessionLog& log,
                                                std::span<const Snapshot> snapshots,
                                                const ExpansionSeries& series,
                                                const DetectorConfig& cfg) {
  cfg.validate();
  return detect_copyediting(prepare_detection(log, snapshots, series), cfg);
}

std::vector<InteractionSpan> detect_topic_shift(const SessionLog& log,
                                                std::span<const Snapshot> snapshots,
                                                const ExpansionSeries& series,
                                                const DetectorConfig& cfg) {
  cfg.validate();
  return detect_topic_shift(prepare_detection(log, snapshots, series), cfg);
}

std::vector<InteractionSpan> detect_all(const DetectionInput& input, const DetectorConfig& cfg) {
  auto spans = detect_mindless_echoing(input, cfg);
  for (auto& s : detect_copyediting(input, cfg)) spans.push_back(s);
  for (auto& s : detect_topic_shift(input, cfg)) spans.push_back(s);
  return spans;
}

}  // namespace cowrite
