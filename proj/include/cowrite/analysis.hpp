#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cowrite/classifier.hpp"
#include "cowrite/detectors.hpp"
#include "cowrite/embeddings.hpp"
#include "cowrite/metrics.hpp"
#include "cowrite/session_log.hpp"

namespace cowrite {

struct EmbeddingSettings {
  // Word-vector file; when unset the hash embedder is used.
  std::optional<std::string> path;
  std::size_t hash_dim = HashEmbedder::kDefaultDimension;
  std::uint64_t hash_seed = HashEmbedder::kDefaultSeed;
};

std::unique_ptr<Embedder> make_embedder(const EmbeddingSettings& settings);

struct AnalysisConfig {
  DetectorConfig detector;
  ClassifierThresholds thresholds;
  AuthorshipOptions authorship;
  EmbeddingSettings embeddings;
  // Resolution of the exported cumulative curve.
  std::size_t curve_bins = 50;

  // Throws ConfigInvalid / ThresholdInvalid.
  void validate() const;
};

// Merges a JSON object of the shape produced by config_to_json into `cfg`.
// Keys are checked against the known set and values are type-checked;
// anything else raises ConfigInvalid before the config is touched.
void apply_config_json(const Json& patch, AnalysisConfig& cfg);

// "detector.large_text_chars=300" style override; the value is read as JSON
// when it parses, otherwise as a string.
void apply_override(std::string_view assignment, AnalysisConfig& cfg);

Json config_to_json(const AnalysisConfig& cfg, const Embedder& embedder);

struct SessionAnalysis {
  std::string session_id;
  std::string participant_id;
  std::string topic;
  AssistantMode assistant_mode = AssistantMode::kNone;
  std::int64_t duration_ms = 0;
  std::size_t event_count = 0;
  ExpansionSeries series;
  std::vector<InteractionSpan> spans;
  IdeationProfile profile;
  SessionClass label = SessionClass::kHumanLed;
  double ai_share = 0.0;
  std::vector<double> curve;
};

SessionAnalysis analyze_session(const SessionLog& log, const Embedder& embedder,
                                const AnalysisConfig& cfg);

Json spans_to_json(std::span<const InteractionSpan> spans);
Json profile_to_json(const IdeationProfile& profile);
Json session_report(const SessionAnalysis& analysis, const Json& config_echo);

// Mean curve per class, span counts per kind, class counts.
Json corpus_summary(std::span<const SessionAnalysis> sessions, const Json& config_echo);

}  // namespace cowrite
