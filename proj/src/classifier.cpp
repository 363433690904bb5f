#include "cowrite/classifier.hpp"

#include <cmath>

#include "cowrite/error.hpp"

namespace cowrite {

std::string_view to_string(Source source) {
  return source == Source::kAi ? "ai" : "writer";
}

std::string_view to_string(SessionClass label) {
  switch (label) {
    case SessionClass::kHumanLed: return "human_led";
    case SessionClass::kAiLed: return "ai_led";
    case SessionClass::kCoIdeation: return "co_ideation";
  }
  return "human_led";
}

std::optional<SessionClass> parse_session_class(std::string_view name) {
  for (auto c : {SessionClass::kHumanLed, SessionClass::kAiLed, SessionClass::kCoIdeation}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

std::vector<AttributedPoint> attribute_expansion(const ExpansionSeries& series,
                                                 const SessionLog& log) {
  const auto ai = ai_insert_flags(log);
  std::vector<AttributedPoint> out;
  out.reserve(series.points.size());
  Source previous = Source::kWriter;
  for (std::size_t p = 0; p < series.points.size(); ++p) {
    const auto& range = series.points[p].events;
    std::size_t inserted = 0;
    std::size_t ai_inserted = 0;
    for (std::size_t i = range.begin; i < range.end && i < log.events.size(); ++i) {
      const auto& ev = log.events[i];
      if (ev.kind != EventKind::kInsert) continue;
      inserted += ev.text.size();
      if (ai[i]) ai_inserted += ev.text.size();
    }
    AttributedPoint a;
    a.point = p;
    if (inserted == 0) {
      a.source = previous;
      a.inherited = true;
    } else {
      a.source = 2 * ai_inserted > inserted ? Source::kAi : Source::kWriter;
    }
    previous = a.source;
    out.push_back(a);
  }
  return out;
}

IdeationProfile build_profile(const ExpansionSeries& series,
                              const std::vector<AttributedPoint>& attributed,
                              const AuthorshipMap& authorship) {
  IdeationProfile profile;
  double ai = 0.0;
  double writer = 0.0;
  std::optional<Source> last;
  for (const auto& a : attributed) {
    const double e = series.points[a.point].expansion;
    (a.source == Source::kAi ? ai : writer) += e;
    if (a.inherited) continue;
    if (last && *last != a.source) ++profile.alternations;
    last = a.source;
  }
  profile.total_expansion = ai + writer;
  if (profile.total_expansion > 0.0) {
    profile.ai_expansion_share = ai / profile.total_expansion;
    profile.writer_expansion_share = 1.0 - profile.ai_expansion_share;
  } else {
    profile.ai_expansion_share = authorship.ai_share();
    profile.writer_expansion_share = 1.0 - profile.ai_expansion_share;
  }
  return profile;
}

void ClassifierThresholds::validate() const {
  if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) {
    throw Error(ErrorCode::kThresholdInvalid, "require 0 <= lo < hi <= 1");
  }
}

SessionClass classify_session(const IdeationProfile& profile,
                              const ClassifierThresholds& thresholds) {
  thresholds.validate();
  const double share = profile.ai_expansion_share;
  if (share >= thresholds.hi) return SessionClass::kAiLed;
  if (share <= thresholds.lo) return SessionClass::kHumanLed;
  if (profile.alternations >= thresholds.min_alternations) return SessionClass::kCoIdeation;
  return (thresholds.hi - share) < (share - thresholds.lo) ? SessionClass::kAiLed
                                                           : SessionClass::kHumanLed;
}

}  // namespace cowrite
