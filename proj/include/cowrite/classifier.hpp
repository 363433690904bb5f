#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "cowrite/metrics.hpp"
#include "cowrite/session_log.hpp"

namespace cowrite {

enum class Source { kWriter, kAi };

std::string_view to_string(Source source);

struct AttributedPoint {
  std::size_t point = 0;  // index into ExpansionSeries::points
  Source source = Source::kWriter;
  // True when the transition inserted nothing and took the previous source.
  bool inherited = false;
};

// A transition is AI-sourced when AI-provenance characters are a strict
// majority of the characters it inserted.
std::vector<AttributedPoint> attribute_expansion(const ExpansionSeries& series,
                                                 const SessionLog& log);

struct IdeationProfile {
  double writer_expansion_share = 0.0;
  double ai_expansion_share = 0.0;
  std::size_t alternations = 0;
  double total_expansion = 0.0;
};

// When the session has no expansion at all, shares fall back to the
// character shares of the final authorship map.
IdeationProfile build_profile(const ExpansionSeries& series,
                              const std::vector<AttributedPoint>& attributed,
                              const AuthorshipMap& authorship);

enum class SessionClass { kHumanLed, kAiLed, kCoIdeation };

std::string_view to_string(SessionClass label);
std::optional<SessionClass> parse_session_class(std::string_view name);

struct ClassifierThresholds {
  double lo = 0.25;
  double hi = 0.75;
  std::size_t min_alternations = 4;

  // Throws ThresholdInvalid unless 0 <= lo < hi <= 1.
  void validate() const;
};

SessionClass classify_session(const IdeationProfile& profile,
                              const ClassifierThresholds& thresholds);

}  // namespace cowrite
