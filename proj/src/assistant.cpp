#include "cowrite/assistant.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "cowrite/error.hpp"
#include "cowrite/sentences.hpp"

namespace cowrite {

std::string_view to_string(SuggestionMode mode) {
  return mode == SuggestionMode::kSocratic ? "socratic" : "autocomplete";
}

namespace {

constexpr std::string_view kDataPrefix = "Analyze the following data: ";

constexpr std::string_view kSocraticInstruction =
    "Based on the text above, ask four Socratic questions on what has not yet been "
    "addressed in the writing. Socratic questions lead to exploring complex ideas, "
    "uncovering assumptions, and analyzing concepts. Examples of Socratic questions "
    "include: 'What are the alternative explanations for the trend of increasing gun "
    "violence incident counts', 'What are the implications of discrepancy in energy "
    "consumption profiles?', or 'What evidence supports the claim of weather conditions "
    "contributing to road safety?'. Please ask four questions in the following format: "
    "1. [QUESTION 1] 2. [QUESTION 2] 3. [QUESTION 3] 4. [QUESTION 4]";

constexpr std::string_view kAutocompleteInstruction =
    "Based on this context, suggest next sentences in the following format: "
    "1. [SENTENCE1] 2. [SENTENCE2] 3. [SENTENCE] 4. [SENTENCE]";

constexpr std::array<std::string_view, 22> kTemplates = {
    // assumptions
    "what assumptions underlie *?",
    "what are you assuming about *?",
    "what could we assume instead of *?",
    "is it always the case that *?",
    // evidence
    "what evidence supports the claim of *?",
    "what evidence supports *?",
    "how do we know that *?",
    "what data would support *?",
    "is there reason to doubt *?",
    // implications
    "what are the implications of *?",
    "what are the consequences of *?",
    "how does * affect *?",
    "what would happen if *?",
    "how does * fit with *?",
    // alternatives
    "what are the alternative explanations for *?",
    "what is another way to look at *?",
    "what would someone who disagrees with * say?",
    "what are the strengths and weaknesses of *?",
    // clarification
    "what do you mean by *?",
    "why is * important?",
    "can you give an example of *?",
    "how is * related to *?",
};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

void check_data(const DataDescription& data) {
  if (trim(data.prose).empty()) {
    throw Error(ErrorCode::kConfigInvalid, "data description must not be empty");
  }
}

std::string assemble(const DataDescription& data, const SuggestionRequest& request,
                     std::string_view instruction) {
  check_data(data);
  const std::string context =
      last_k_sentences(request.context, request.context.size(), kContextSentences);
  std::string prompt;
  prompt.reserve(kDataPrefix.size() + data.prose.size() + context.size() +
                 instruction.size() + 4);
  prompt += kDataPrefix;
  prompt += data.prose;
  prompt += "\n\n";
  if (!context.empty()) {
    prompt += context;
    prompt += ' ';
  }
  prompt += instruction;
  return prompt;
}

// Lowercase words with punctuation other than '*' and apostrophes removed.
std::vector<std::string> normalize_words(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '\'' || c == '*' || u >= 0x80) {
      current.push_back(static_cast<char>(std::tolower(u)));
    } else if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

bool glob_words(const std::vector<std::string>& pattern, std::size_t p,
                const std::vector<std::string>& words, std::size_t w) {
  if (p == pattern.size()) return w == words.size();
  if (pattern[p] == "*") {
    for (std::size_t take = 1; w + take <= words.size(); ++take) {
      if (glob_words(pattern, p + 1, words, w + take)) return true;
    }
    return false;
  }
  return w < words.size() && pattern[p] == words[w] && glob_words(pattern, p + 1, words, w + 1);
}

// Position of marker "<n>." at or after `from`, preceded by start or
// whitespace and followed by whitespace, '[' or end of text.
std::optional<std::size_t> find_marker(std::string_view text, int n, std::size_t from) {
  const std::string marker = std::to_string(n) + ".";
  std::size_t at = from;
  while ((at = text.find(marker, at)) != std::string_view::npos) {
    const bool start_ok = at == 0 || is_space(text[at - 1]);
    const std::size_t after = at + marker.size();
    const bool end_ok = after >= text.size() || is_space(text[after]) || text[after] == '[';
    if (start_ok && end_ok) return at;
    ++at;
  }
  return std::nullopt;
}

std::string clean_item(std::string_view raw, SuggestionMode mode) {
  std::string_view item = trim(raw);
  while (item.size() >= 2 && item.front() == '[' && item.back() == ']') {
    item = trim(item.substr(1, item.size() - 2));
  }
  if (!item.empty() && item.front() == '[') item = trim(item.substr(1));
  if (!item.empty() && item.back() == ']') item = trim(item.substr(0, item.size() - 1));
  std::string out(item);
  if (mode == SuggestionMode::kSocratic && !out.empty() && out.back() != '?') {
    while (!out.empty() && (out.back() == '.' || out.back() == '!')) out.pop_back();
    out.push_back('?');
  }
  return out;
}

}  // namespace

std::string_view socratic_instruction() { return kSocraticInstruction; }
std::string_view autocomplete_instruction() { return kAutocompleteInstruction; }

std::string last_k_sentences(std::string_view document, std::size_t cursor, std::size_t k) {
  if (k == 0) return {};
  const std::string_view before = document.substr(0, std::min(cursor, document.size()));
  const auto spans = sentence_spans(before);
  if (spans.empty()) return {};
  const std::size_t first = spans.size() > k ? spans.size() - k : 0;
  const std::size_t begin = spans[first].begin;
  const std::size_t end = spans.back().end;
  return std::string(before.substr(begin, end - begin));
}

SuggestionRequest make_request(std::string_view document, std::size_t cursor,
                               SuggestionMode mode) {
  return {last_k_sentences(document, cursor, kContextSentences), mode};
}

std::string build_socratic_prompt(const DataDescription& data, const SuggestionRequest& request) {
  if (request.mode != SuggestionMode::kSocratic) {
    throw Error(ErrorCode::kModeMismatch, "socratic prompt requested for autocomplete request");
  }
  return assemble(data, request, kSocraticInstruction);
}

std::string build_autocomplete_prompt(const DataDescription& data,
                                      const SuggestionRequest& request) {
  if (request.mode != SuggestionMode::kAutocomplete) {
    throw Error(ErrorCode::kModeMismatch, "autocomplete prompt requested for socratic request");
  }
  return assemble(data, request, kAutocompleteInstruction);
}

std::string build_prompt(const DataDescription& data, const SuggestionRequest& request) {
  return request.mode == SuggestionMode::kSocratic ? build_socratic_prompt(data, request)
                                                   : build_autocomplete_prompt(data, request);
}

SuggestionSet parse_numbered_suggestions(std::string_view response, SuggestionMode mode) {
  if (trim(response).empty()) throw Error(ErrorCode::kEmptyResponse, "response is empty");
  std::array<std::size_t, 5> starts{};
  std::size_t found = 0;
  std::size_t from = 0;
  for (int n = 1; n <= 4; ++n) {
    auto at = find_marker(response, n, from);
    if (!at) break;
    starts[found++] = *at;
    from = *at + 2;
  }
  std::size_t tail = response.size();
  if (found == 4) {
    if (auto five = find_marker(response, 5, from)) tail = *five;
  }
  starts[found] = tail;
  SuggestionSet set;
  set.mode = mode;
  std::size_t usable = 0;
  for (std::size_t i = 0; i < found; ++i) {
    const std::size_t body = starts[i] + std::to_string(i + 1).size() + 1;
    std::string item = clean_item(response.substr(body, starts[i + 1] - body), mode);
    if (!item.empty() && item != "?") {
      set.items[usable++] = std::move(item);
    }
  }
  if (usable < 4) {
    throw Error(ErrorCode::kIncompleteSuggestions,
                "found " + std::to_string(usable) + " of 4 items");
  }
  return set;
}

std::string format_numbered(std::span<const std::string> items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(i + 1) + ". " + items[i];
  }
  return out;
}

std::span<const std::string_view> socratic_templates() { return kTemplates; }

bool matches_socratic_template(std::string_view question) {
  const auto words = normalize_words(question);
  if (words.empty()) return false;
  return std::any_of(kTemplates.begin(), kTemplates.end(), [&](std::string_view t) {
    return glob_words(normalize_words(t), 0, words, 0);
  });
}

SocraticValidationReport validate_socratic(std::span<const std::string> questions,
                                           std::string_view context, const Embedder& embedder) {
  SocraticValidationReport report;
  const EmbeddingVector context_vec = embedder.embed(context);
  std::size_t matched = 0;
  double total = 0.0;
  for (const auto& q : questions) {
    QuestionCheck check;
    check.question = q;
    check.template_matched = matches_socratic_template(q);
    check.context_similarity = similarity(embedder.embed(q), context_vec);
    matched += check.template_matched ? 1 : 0;
    total += check.context_similarity;
    report.questions.push_back(std::move(check));
  }
  if (!questions.empty()) {
    const auto n = static_cast<double>(questions.size());
    report.template_match_rate = static_cast<double>(matched) / n;
    report.mean_similarity = total / n;
  }
  return report;
}

SocraticValidationReport validate_socratic(const SuggestionSet& set, std::string_view context,
                                           const Embedder& embedder) {
  if (set.mode != SuggestionMode::kSocratic) {
    throw Error(ErrorCode::kModeMismatch, "validation applies to Socratic sets only");
  }
  return validate_socratic(std::span<const std::string>(set.items), context, embedder);
}

}  // namespace cowrite
