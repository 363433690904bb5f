#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "cowrite/error.hpp"
#include "cowrite/session_log.hpp"
#include "cowrite/simulator.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace cowrite;
using testkit::LogBuilder;

namespace {

const char* kHeader =
    R"({"session_id":"s1","participant_id":"p1","topic":"t","assistant_mode":"socratic"})";

std::string with_header(const std::string& body) { return std::string(kHeader) + "\n" + body; }

template <typename Fn>
ErrorCode error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::kIo;
}

LabeledSession sample(PersonaKind kind, std::uint64_t seed) {
  return simulate_session(WriterPersona::preset(kind), seed, corpus_duration_ms(seed),
                          default_vocabulary());
}

}  // namespace

TEST_CASE("single insert parses and replays") {
  const auto log = parse_session_log(
      with_header(R"({"seq":1,"t_ms":0,"kind":"insert","pos":0,"text":"Hello"})"));
  CHECK(log.session_id == "s1");
  CHECK(log.assistant_mode == AssistantMode::kSocratic);
  REQUIRE(log.events.size() == 1);
  CHECK(replay(log) == "Hello");
}

TEST_CASE("unknown kind names its line") {
  try {
    parse_session_log(with_header(R"({"seq":1,"t_ms":0,"kind":"paste","pos":0,"text":"x"})"));
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownEventKind);
    REQUIRE(e.line());
    CHECK(*e.line() == 2);
  }
}

TEST_CASE("structural errors") {
  CHECK(error_of([] {
          parse_session_log(with_header(
              "{\"seq\":2,\"t_ms\":0,\"kind\":\"cursor_move\",\"pos\":0}\n"
              "{\"seq\":2,\"t_ms\":1,\"kind\":\"cursor_move\",\"pos\":0}"));
        }) == ErrorCode::kNonMonotonicSeq);
  CHECK(error_of([] {
          parse_session_log(with_header(
              "{\"seq\":1,\"t_ms\":5,\"kind\":\"cursor_move\",\"pos\":0}\n"
              "{\"seq\":2,\"t_ms\":1,\"kind\":\"cursor_move\",\"pos\":0}"));
        }) == ErrorCode::kNonMonotonicTimestamp);
  CHECK(error_of([] {
          parse_session_log(
              with_header(R"({"seq":1,"t_ms":0,"kind":"suggestion_select","selected_index":0})"));
        }) == ErrorCode::kDanglingSuggestionSelect);
  CHECK(error_of([] { parse_session_log(with_header(R"({"seq":1,"t_ms":0,"kind":"insert"})")); }) ==
        ErrorCode::kMalformedRecord);
  CHECK(error_of([] { parse_session_log(std::string("not json")); }) ==
        ErrorCode::kMalformedRecord);
}

TEST_CASE("replay examples") {
  CHECK(replay(SessionLog{}) == "");
  auto log = LogBuilder().insert(0, "ab").insert(1, "XY").erase(0, "a").build();
  CHECK(replay(log) == "XYb");
  CHECK(replay(log, 2) == "aXYb");
  CHECK(replay(log, 0) == "");
}

TEST_CASE("replay errors carry the seq") {
  auto oob = LogBuilder().insert(0, "ab").insert(5, "x").build();
  CHECK(error_of([&] { replay(oob); }) == ErrorCode::kPositionOutOfBounds);
  auto mismatch = LogBuilder().insert(0, "abc").erase(1, "x").build();
  try {
    replay(mismatch);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDeleteMismatch);
    REQUIRE(e.seq());
    CHECK(*e.seq() == 2);
  }
  auto bad_final = LogBuilder().insert(0, "abc").build();
  bad_final.final_text = "abd";
  CHECK(error_of([&] { verify_log(bad_final); }) == ErrorCode::kFinalTextMismatch);
}

TEST_CASE("round trip keeps extras") {
  const std::string text = std::string(
      R"({"session_id":"s1","participant_id":"p1","topic":"t","assistant_mode":"none","lab":"x"})") +
      "\n" + R"({"seq":1,"t_ms":0,"kind":"insert","pos":0,"text":"Hi","device":"kb"})" + "\n";
  const auto log = parse_session_log(text);
  CHECK(log.header_extras.at("lab") == "x");
  CHECK(log.events[0].extras.at("device") == "kb");
  const auto again = parse_session_log(serialize_session_log(log));
  CHECK(again == log);
  CHECK(serialize_session_log(again) == serialize_session_log(log));
}

TEST_CASE("simulated logs round trip and replay") {
  for (auto kind : {PersonaKind::kEchoer, PersonaKind::kCopyeditor, PersonaKind::kInitiator}) {
    const auto s = sample(kind, 5);
    const auto text = serialize_session_log(s.log);
    const auto parsed = parse_session_log(text);
    CHECK(parsed == s.log);
    CHECK(replay(parsed) == *s.log.final_text);
    CHECK(oracle::replay(parsed) == *s.log.final_text);
  }
}

TEST_CASE("10k-event keystroke log replays to its final text") {
  auto persona = WriterPersona::preset(PersonaKind::kIndependentWriter);
  persona.params.keystroke_level = true;
  const auto s = simulate_session(persona, 9, 60 * 60000, default_vocabulary());
  REQUIRE(s.log.events.size() >= 10000);
  const auto parsed = parse_session_log(serialize_session_log(s.log));
  CHECK(replay(parsed) == *s.log.final_text);
  CHECK(oracle::replay(parsed) == replay(parsed));
}

TEST_CASE("prefix consistency") {
  const auto s = sample(PersonaKind::kCoIdeator, 3);
  auto shorter = s.log;
  shorter.events.resize(shorter.events.size() / 2);
  const auto cut = shorter.events.back().seq;
  for (std::int64_t q : {cut / 3, cut / 2, cut}) {
    CHECK(replay(shorter, q) == replay(s.log, q));
  }
}

TEST_CASE("snapshot rules") {
  SUBCASE("cursor moves only") {
    auto log = LogBuilder().cursor(0).cursor(0).build();
    const auto snaps = reconstruct_snapshots(log);
    REQUIRE(snaps.size() == 2);
    CHECK(snaps[0].text == snaps[1].text);
    CHECK(snaps[0].trigger == SnapshotTrigger::kInitial);
    CHECK(snaps[1].trigger == SnapshotTrigger::kSessionEnd);
  }
  SUBCASE("burst, move, burst, request, end") {
    auto log = LogBuilder()
                   .insert(0, "One. ")
                   .cursor(5)
                   .insert(5, "Two. ")
                   .open({"a", "b", "c", "d"})
                   .dismiss()
                   .build();
    const auto snaps = reconstruct_snapshots(log);
    REQUIRE(snaps.size() == 4);
    CHECK(snaps[1].trigger == SnapshotTrigger::kCursorAfterInsert);
    CHECK(snaps[1].text == "One. ");
    CHECK(snaps[2].trigger == SnapshotTrigger::kSuggestionRequest);
    CHECK(snaps[2].text == "One. Two. ");
    CHECK(snaps[3].trigger == SnapshotTrigger::kSessionEnd);
  }
}

TEST_CASE("simulated snapshot count matches an independent scan") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto s = sample(PersonaKind::kCoIdeator, seed);
    std::size_t opens = 0, moves = 0;
    bool dirty = false;
    for (const auto& e : s.log.events) {
      if (e.kind == EventKind::kSuggestionOpen) ++opens;
      if (e.kind == EventKind::kInsert || e.kind == EventKind::kDelete) dirty = true;
      if (e.kind == EventKind::kCursorMove && dirty) {
        ++moves;
        dirty = false;
      }
      if (e.kind == EventKind::kSuggestionOpen) dirty = false;
    }
    const auto snaps = reconstruct_snapshots(s.log);
    CHECK(snaps.size() == 1 + opens + moves + 1);
    // Coverage: each text edit sits in exactly one snapshot's range.
    std::vector<int> seen(s.log.events.size(), 0);
    for (const auto& sn : snaps) {
      for (std::size_t i = sn.events.begin; i < sn.events.end; ++i) ++seen[i];
    }
    for (std::size_t i = 0; i < s.log.events.size(); ++i) {
      if (s.log.events[i].is_text_edit()) CHECK(seen[i] == 1);
    }
  }
}

TEST_CASE("authorship examples") {
  SUBCASE("no suggestions means all writer") {
    auto log = LogBuilder().insert(0, "Hello there. ").insert(13, "More.").build();
    const auto map = attribute_authorship(log);
    CHECK(map.document_length() == 18);
    CHECK(map.count(Origin::kWriter) == 18);
    CHECK(map.ai_share() == 0.0);
  }
  SUBCASE("one accepted suggestion") {
    auto log = LogBuilder().insert(0, "Intro. ").accept(7, "The data shows a rise.").build();
    const auto map = attribute_authorship(log);
    REQUIRE(map.spans.size() == 2);
    CHECK(map.spans[0] == AuthorshipSpan{0, 7, Origin::kWriter});
    CHECK(map.spans[1] == AuthorshipSpan{7, 22, Origin::kAiAccepted});
  }
  SUBCASE("retyped after dismissal stays writer") {
    auto log = LogBuilder().open({"Same text.", "b", "c", "d"}).dismiss().insert(0, "Same text.").build();
    CHECK(attribute_authorship(log).count(Origin::kWriter) == 10);
  }
  SUBCASE("half replaced becomes modified") {
    auto log = LogBuilder().accept(0, "abcdefghij").erase(2, "cdefg").insert(2, "XY").build();
    const auto map = attribute_authorship(log);
    CHECK(map.count(Origin::kAiModified) == 5);
    CHECK(map.count(Origin::kWriter) == 2);
    CHECK(map.count(Origin::kAiAccepted) == 0);
  }
  SUBCASE("below threshold stays accepted") {
    auto log = LogBuilder().accept(0, "abcdefghij").erase(2, "cd").build();
    const auto map = attribute_authorship(log);
    CHECK(map.count(Origin::kAiAccepted) == 8);
  }
}

TEST_CASE("echoer AI share tracks the simulator's character ledger") {
  for (std::uint64_t seed = 20; seed < 26; ++seed) {
    const auto s = sample(PersonaKind::kEchoer, seed);
    CHECK(std::abs(attribute_authorship(s.log).ai_share() - s.truth_ai_share) <= 0.02);
  }
}

TEST_CASE("authorship partitions every replayed prefix") {
  const auto s = sample(PersonaKind::kCoIdeator, 8);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 40; ++k) {
    const auto q = static_cast<std::int64_t>(rng() % (s.log.max_seq() + 1));
    const auto map = attribute_authorship(s.log, q);
    CHECK(map.document_length() == replay(s.log, q).size());
    std::size_t at = 0;
    for (const auto& span : map.spans) {
      CHECK(span.begin == at);
      CHECK(span.length > 0);
      at += span.length;
    }
  }
}
