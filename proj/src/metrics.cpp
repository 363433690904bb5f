#include "cowrite/metrics.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "cowrite/error.hpp"

namespace cowrite {

double expansion_from_similarity(double sim, std::size_t delta_sentences) {
  return 1.0 - sim / (static_cast<double>(delta_sentences) + 1.0);
}

namespace {

std::size_t abs_diff(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

}  // namespace

double semantic_expansion(const Snapshot& prev, const Snapshot& next,
                          const Embedder& embedder) {
  if (prev.text == next.text) return 0.0;
  const double sim = similarity(embedder.embed(next.text), embedder.embed(prev.text));
  return expansion_from_similarity(sim, abs_diff(next.sentence_count(), prev.sentence_count()));
}

std::size_t textual_delta(const SessionLog& log, EventRange range) {
  std::size_t total = 0;
  const std::size_t end = std::min(range.end, log.events.size());
  for (std::size_t i = range.begin; i < end; ++i) {
    if (log.events[i].is_text_edit()) total += log.events[i].text.size();
  }
  return total;
}

ExpansionSeries expansion_series(const SessionLog& log, std::span<const Snapshot> snapshots,
                                 const Embedder& embedder) {
  if (snapshots.size() < 2) {
    throw Error(ErrorCode::kTooFewSnapshots,
                "need at least 2 snapshots, got " + std::to_string(snapshots.size()));
  }
  ExpansionSeries series;
  series.session_id = log.session_id;
  series.points.reserve(snapshots.size() - 1);
  EmbeddingVector prev_vec = embedder.embed(snapshots[0].text);
  double cumulative = 0.0;
  for (std::size_t i = 1; i < snapshots.size(); ++i) {
    const Snapshot& prev = snapshots[i - 1];
    const Snapshot& next = snapshots[i];
    ExpansionPoint p;
    p.index = next.index;
    p.timestamp_ms = next.timestamp_ms;
    p.delta_sentences = abs_diff(next.sentence_count(), prev.sentence_count());
    p.delta_chars = textual_delta(log, next.events);
    p.events = next.events;
    if (next.text == prev.text) {
      p.similarity = 1.0;
      p.expansion = 0.0;
    } else {
      EmbeddingVector next_vec = embedder.embed(next.text);
      p.similarity = similarity(next_vec, prev_vec);
      p.expansion = expansion_from_similarity(p.similarity, p.delta_sentences);
      prev_vec = std::move(next_vec);
    }
    cumulative += p.expansion;
    p.cumulative = cumulative;
    series.points.push_back(p);
  }
  return series;
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

void write_expansion_csv(std::ostream& out, const ExpansionSeries& series) {
  out << "session_id,index,t_ms,expansion,cumulative,delta_sentences,delta_chars\n";
  for (const auto& p : series.points) {
    out << series.session_id << ',' << p.index << ',' << p.timestamp_ms << ','
        << format_number(p.expansion) << ',' << format_number(p.cumulative) << ','
        << p.delta_sentences << ',' << p.delta_chars << '\n';
  }
}

std::vector<double> resample_cumulative(const ExpansionSeries& series,
                                        std::int64_t duration_ms, std::size_t bins) {
  std::vector<double> out(bins + 1, 0.0);
  std::size_t k = 0;
  double current = 0.0;
  for (std::size_t b = 0; b <= bins; ++b) {
    const double at = bins == 0 ? static_cast<double>(duration_ms)
                                : static_cast<double>(duration_ms) * static_cast<double>(b) /
                                      static_cast<double>(bins);
    while (k < series.points.size() &&
           static_cast<double>(series.points[k].timestamp_ms) <= at) {
      current = series.points[k].cumulative;
      ++k;
    }
    out[b] = current;
  }
  return out;
}

}  // namespace cowrite
