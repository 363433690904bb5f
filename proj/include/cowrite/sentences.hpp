#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cowrite {

// Half-open byte range [begin, end) into a document.
struct TextSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const TextSpan&, const TextSpan&) = default;
};

// Abbreviations that never end a sentence. Matching is exact and
// case-sensitive against the whitespace-delimited token ending in '.'.
std::span<const std::string_view> abbreviations();

// Sentence rule: a sentence ends after a run of '.', '!' or '?' (optionally
// followed by closing quotes or brackets) when the next character is
// whitespace or the end of text, unless the token is a listed abbreviation.
// Trailing text without terminal punctuation forms a final sentence.
// Returned spans are trimmed of surrounding whitespace and cover every
// non-whitespace byte exactly once.
std::vector<TextSpan> sentence_spans(std::string_view text);

std::vector<std::string> segment_sentences(std::string_view text);

std::size_t count_sentences(std::string_view text);

// True at offset 0, directly after a newline, or after the whitespace that
// follows a sentence end.
bool is_boundary(std::string_view document, std::size_t position);

}  // namespace cowrite
