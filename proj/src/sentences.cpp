#include "cowrite/sentences.hpp"

#include <algorithm>
#include <array>

namespace cowrite {

namespace {

constexpr std::array<std::string_view, 24> kAbbreviations = {
    "Mr.",  "Mrs.",  "Ms.",  "Dr.",  "Prof.", "Sr.",   "Jr.",  "St.",
    "vs.",  "e.g.",  "i.e.", "U.S.", "U.K.",  "Inc.",  "Ltd.", "Co.",
    "Fig.", "No.",   "cf.",  "Mt.",  "Gen.",  "Gov.",  "Sen.", "approx.",
};

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

bool is_closer(char c) {
  return c == '"' || c == '\'' || c == ')' || c == ']';
}

bool is_abbreviation(std::string_view text, std::size_t dot) {
  std::size_t start = dot;
  while (start > 0 && !is_space(text[start - 1])) --start;
  std::string_view token = text.substr(start, dot - start + 1);
  // Leading brackets or quotes are not part of the abbreviation.
  while (!token.empty() && (token.front() == '(' || token.front() == '"' ||
                            token.front() == '\'' || token.front() == '[')) {
    token.remove_prefix(1);
  }
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), token) !=
         kAbbreviations.end();
}

// If a sentence ends with the terminal run starting at `i`, returns the
// offset one past its last character (including closers); otherwise 0.
std::size_t sentence_end_at(std::string_view text, std::size_t i) {
  std::size_t j = i;
  while (j < text.size() && is_terminal(text[j])) ++j;
  std::size_t last_terminal = j - 1;
  while (j < text.size() && is_closer(text[j])) ++j;
  if (j < text.size() && !is_space(text[j])) return 0;
  if (last_terminal == i && text[i] == '.' && is_abbreviation(text, i)) {
    return 0;
  }
  return j;
}

}  // namespace

std::span<const std::string_view> abbreviations() { return kAbbreviations; }

std::vector<TextSpan> sentence_spans(std::string_view text) {
  std::vector<TextSpan> spans;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && is_space(text[i])) ++i;
    if (i >= n) break;
    const std::size_t begin = i;
    std::size_t end = n;
    while (i < n) {
      if (is_terminal(text[i])) {
        if (std::size_t stop = sentence_end_at(text, i); stop != 0) {
          end = stop;
          break;
        }
        while (i < n && is_terminal(text[i])) ++i;
        continue;
      }
      ++i;
    }
    if (end == n) {
      while (end > begin && is_space(text[end - 1])) --end;
    }
    spans.push_back({begin, end});
    i = std::max(end, i);
  }
  return spans;
}

std::vector<std::string> segment_sentences(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& s : sentence_spans(text)) {
    out.emplace_back(text.substr(s.begin, s.size()));
  }
  return out;
}

std::size_t count_sentences(std::string_view text) {
  return sentence_spans(text).size();
}

bool is_boundary(std::string_view document, std::size_t position) {
  if (position == 0) return true;
  if (position > document.size()) return false;
  const char prev = document[position - 1];
  if (prev == '\n') return true;
  if (!is_space(prev)) return false;
  std::size_t k = position - 1;
  while (k > 0 && is_space(document[k - 1])) {
    if (document[k - 1] == '\n') return true;
    --k;
  }
  if (k == 0) return true;  // only whitespace precedes
  // document[k - 1] is the last non-space character before the gap.
  std::size_t last = k - 1;
  while (last > 0 && is_closer(document[last])) --last;
  if (!is_terminal(document[last])) return false;
  std::size_t first = last;
  while (first > 0 && is_terminal(document[first - 1])) --first;
  return sentence_end_at(document, first) == k;
}

}  // namespace cowrite
