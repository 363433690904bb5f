#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cowrite/embeddings.hpp"
#include "cowrite/session_log.hpp"

namespace cowrite {

// 1 - sim / (|delta_sentences| + 1).
double expansion_from_similarity(double sim, std::size_t delta_sentences);

// Semantic expansion between consecutive snapshots. Identical texts give
// exactly 0 without consulting the embedder.
double semantic_expansion(const Snapshot& prev, const Snapshot& next,
                          const Embedder& embedder);

// Inserted plus deleted byte count over the text edits in `range`.
std::size_t textual_delta(const SessionLog& log, EventRange range);

struct ExpansionPoint {
  std::size_t index = 0;
  std::int64_t timestamp_ms = 0;
  double similarity = 0.0;
  double expansion = 0.0;
  double cumulative = 0.0;
  std::size_t delta_sentences = 0;
  std::size_t delta_chars = 0;
  // Events folded into snapshot `index`.
  EventRange events;
};

struct ExpansionSeries {
  std::string session_id;
  std::vector<ExpansionPoint> points;

  double final_cumulative() const {
    return points.empty() ? 0.0 : points.back().cumulative;
  }
};

ExpansionSeries expansion_series(const SessionLog& log, std::span<const Snapshot> snapshots,
                                 const Embedder& embedder);

// Shortest decimal form that round-trips; used by every text export.
std::string format_number(double value);

// Header plus one row per point:
// session_id,index,t_ms,expansion,cumulative,delta_sentences,delta_chars
void write_expansion_csv(std::ostream& out, const ExpansionSeries& series);

// Cumulative expansion sampled at `bins` + 1 evenly spaced fractions of the
// session duration (step function, last point at or before each sample).
std::vector<double> resample_cumulative(const ExpansionSeries& series,
                                        std::int64_t duration_ms, std::size_t bins);

}  // namespace cowrite
