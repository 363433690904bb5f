#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cowrite/classifier.hpp"
#include "cowrite/detectors.hpp"
#include "cowrite/session_log.hpp"

namespace cowrite {

enum class PersonaKind { kCoIdeator, kIndependentWriter, kEchoer, kCopyeditor, kInitiator };

std::string_view to_string(PersonaKind kind);
std::optional<PersonaKind> parse_persona_kind(std::string_view name);

struct PersonaParams {
  double typing_rate_cps = 4.0;
  // Probability of asking for suggestions after a writing step.
  double suggestion_request_rate = 0.5;
  double acceptance_probability = 0.5;
  // Probability of a small in-place edit after a step.
  double edit_probability = 0.05;
  // Probability that a writing step is followed by a topic shift.
  double topic_shift_rate = 0.0;
  std::size_t copyedit_burst_length = 0;
  // Start of the first copyedit burst; unset places it right after the
  // opening paragraph.
  std::optional<std::int64_t> copyedit_start_ms;
  // One insert per character instead of one per word.
  bool keystroke_level = false;
};

struct WriterPersona {
  PersonaKind kind = PersonaKind::kIndependentWriter;
  PersonaParams params;

  static WriterPersona preset(PersonaKind kind);
  // Throws InvalidPersonaParams.
  void validate() const;
};

struct TopicBank {
  std::string name;
  std::vector<std::string> words;
};

// Five disjoint topic banks (climate, gun violence, pandemic, city planning,
// school funding).
const std::vector<TopicBank>& default_vocabulary();

struct InsertTag {
  std::int64_t seq = 0;
  Source source = Source::kWriter;
};

struct LabeledSession {
  SessionLog log;
  PersonaKind persona = PersonaKind::kIndependentWriter;
  std::uint64_t seed = 0;
  std::vector<InteractionSpan> truth_spans;
  SessionClass truth_class = SessionClass::kHumanLed;
  std::vector<InsertTag> truth_authorship;
  // Share of final-document characters that came from accepted suggestions,
  // tracked character by character during generation.
  double truth_ai_share = 0.0;
};

SessionClass persona_class(PersonaKind kind);

struct SimulationOptions {
  // Re-check every ground-truth span against its detector predicate (with
  // default thresholds and the default hash embedder) and fail on mismatch.
  bool verify_labels = true;
};

LabeledSession simulate_session(const WriterPersona& persona, std::uint64_t seed,
                                std::int64_t duration_ms,
                                const std::vector<TopicBank>& vocabulary,
                                SimulationOptions options = {});

struct CorpusEntry {
  PersonaKind persona = PersonaKind::kIndependentWriter;
  std::size_t count = 0;
};

// Parses "persona:count,persona:count".
std::vector<CorpusEntry> parse_corpus_spec(std::string_view spec);

// Session k (0-based across the whole spec) uses seed base_seed + k and a
// duration between 30 and 60 minutes derived from that seed.
std::vector<LabeledSession> generate_corpus(const std::vector<CorpusEntry>& spec,
                                            std::uint64_t base_seed,
                                            const std::vector<TopicBank>& vocabulary =
                                                default_vocabulary(),
                                            SimulationOptions options = {});

std::int64_t corpus_duration_ms(std::uint64_t seed);

// Sidecar: {session_id, persona, seed, class, spans[], authorship[]}.
Json truth_to_json(const LabeledSession& session);

}  // namespace cowrite
