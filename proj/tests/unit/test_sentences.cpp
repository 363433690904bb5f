#include <doctest.h>

#include <random>

#include "cowrite/sentences.hpp"
#include "oracles.hpp"

using namespace cowrite;

namespace {

std::string random_text(std::mt19937_64& rng, std::size_t tokens) {
  static const std::vector<std::string> pieces = {
      "alpha", "Beta", "gamma.", "end!", "why?", "Dr.", "U.S.", "e.g.", "3.14", "no.", "No.",
      "\"quoted.\"", "(aside.)", "wow?!", "...", "x.y", "[Fig.", "Mr.)", "'ok.'", "."};
  static const std::vector<std::string> gaps = {" ", " ", " ", "  ", "\n", "\n\n", "\t", " \n "};
  std::string out;
  for (std::size_t i = 0; i < tokens; ++i) {
    if (i) out += gaps[rng() % gaps.size()];
    out += pieces[rng() % pieces.size()];
  }
  if (rng() % 3 == 0) out += " ";
  return out;
}

bool space(char c) { return c == ' ' || c == '\n' || c == '\t' || c == '\r'; }

}  // namespace

TEST_CASE("segmentation examples") {
  CHECK(segment_sentences("").empty());
  CHECK(segment_sentences("   \n\t ").empty());
  CHECK(segment_sentences("A. B! C?") == std::vector<std::string>{"A.", "B!", "C?"});
  CHECK(segment_sentences("Dr. Smith arrived. He left.") ==
        std::vector<std::string>{"Dr. Smith arrived.", "He left."});
  CHECK(segment_sentences("Pi is 3.14 today. Yes") ==
        std::vector<std::string>{"Pi is 3.14 today.", "Yes"});
  CHECK(segment_sentences("He said \"stop.\" Then left.") ==
        std::vector<std::string>{"He said \"stop.\"", "Then left."});
  CHECK(segment_sentences("The U.S. economy grew. Fine") ==
        std::vector<std::string>{"The U.S. economy grew.", "Fine"});
  CHECK(count_sentences("Wait... what?! OK") == 3);
  CHECK(abbreviations().size() == 24);
}

TEST_CASE("boundary examples") {
  CHECK(is_boundary("abc", 0));
  CHECK(is_boundary("A. B", 3));
  CHECK_FALSE(is_boundary("A. B", 2));
  CHECK_FALSE(is_boundary("A. B", 1));
  CHECK(is_boundary("one\ntwo", 4));
  CHECK(is_boundary("one\n  two", 6));
  CHECK_FALSE(is_boundary("Dr. Who", 4));
  CHECK_FALSE(is_boundary("abc def", 4));
  CHECK(is_boundary("abc def", 0));
}

TEST_CASE("every non-space character lands in exactly one sentence") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const std::string text = random_text(rng, 1 + rng() % 25);
    const auto spans = sentence_spans(text);
    std::vector<int> owner(text.size(), 0);
    std::size_t prev_end = 0;
    for (const auto& s : spans) {
      REQUIRE(s.begin >= prev_end);
      REQUIRE(s.end > s.begin);
      CHECK_FALSE(space(text[s.begin]));
      CHECK_FALSE(space(text[s.end - 1]));
      for (std::size_t i = s.begin; i < s.end; ++i) ++owner[i];
      prev_end = s.end;
    }
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (!space(text[i])) CHECK(owner[i] == 1);
    }
  }
}

TEST_CASE("sentence count and boundary agree with the token-level reference") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::string text = random_text(rng, rng() % 30);
    INFO(text);
    CHECK(count_sentences(text) == oracle::sentence_count(text));
    for (std::size_t pos = 0; pos <= text.size(); ++pos) {
      if (is_boundary(text, pos) != oracle::boundary(text, pos)) {
        FAIL_CHECK("boundary mismatch at " << pos);
      }
    }
  }
}

TEST_CASE("segmentation is deterministic") {
  std::mt19937_64 rng(3);
  const std::string text = random_text(rng, 40);
  CHECK(segment_sentences(text) == segment_sentences(text));
}
