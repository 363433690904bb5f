#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cowrite/embeddings.hpp"

namespace cowrite {

enum class SuggestionMode { kSocratic, kAutocomplete };

std::string_view to_string(SuggestionMode mode);

// Prose describing the data shown to the writer. Must be non-empty.
struct DataDescription {
  std::string prose;
};

struct SuggestionRequest {
  std::string context;
  SuggestionMode mode = SuggestionMode::kSocratic;
};

// Number of sentences before the cursor that the assistants see.
inline constexpr std::size_t kContextSentences = 10;

// Up to `k` sentences (the last may be partial) ending at `cursor`.
std::string last_k_sentences(std::string_view document, std::size_t cursor, std::size_t k);

SuggestionRequest make_request(std::string_view document, std::size_t cursor,
                               SuggestionMode mode);

// Prompt layout:
//   "Analyze the following data: " + prose + "\n\n"
//   + [context + " "] + instruction
// The context is cut to the last ten sentences before assembly.
std::string build_socratic_prompt(const DataDescription& data, const SuggestionRequest& request);
std::string build_autocomplete_prompt(const DataDescription& data,
                                      const SuggestionRequest& request);
std::string build_prompt(const DataDescription& data, const SuggestionRequest& request);

std::string_view socratic_instruction();
std::string_view autocomplete_instruction();

struct SuggestionSet {
  std::array<std::string, 4> items;
  SuggestionMode mode = SuggestionMode::kSocratic;
};

// Accepts "1. a 2. b 3. c 4. d" inline or one item per line. Items are
// trimmed and stripped of surrounding brackets; Socratic items gain a
// trailing '?' when the model left it off.
SuggestionSet parse_numbered_suggestions(std::string_view response, SuggestionMode mode);

// Inverse of the parser for well-formed items: "1. a 2. b 3. c 4. d".
std::string format_numbered(std::span<const std::string> items);

// Socratic question patterns; '*' stands for one or more words.
std::span<const std::string_view> socratic_templates();

bool matches_socratic_template(std::string_view question);

struct QuestionCheck {
  std::string question;
  bool template_matched = false;
  double context_similarity = 0.0;
};

struct SocraticValidationReport {
  std::vector<QuestionCheck> questions;
  double template_match_rate = 0.0;
  double mean_similarity = 0.0;
};

SocraticValidationReport validate_socratic(std::span<const std::string> questions,
                                           std::string_view context, const Embedder& embedder);
// Throws ModeMismatch for autocomplete sets.
SocraticValidationReport validate_socratic(const SuggestionSet& set, std::string_view context,
                                           const Embedder& embedder);

}  // namespace cowrite
