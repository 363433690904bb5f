#include <doctest.h>

#include <functional>

#include "cowrite/classifier.hpp"
#include "cowrite/detectors.hpp"
#include "cowrite/error.hpp"
#include "cowrite/simulator.hpp"

using namespace cowrite;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIo;
}

const PersonaKind kAll[] = {PersonaKind::kCoIdeator, PersonaKind::kIndependentWriter,
                            PersonaKind::kEchoer, PersonaKind::kCopyeditor,
                            PersonaKind::kInitiator};

// Mean transition expansion of the edit units inside truth spans of `kind`.
double mean_span_expansion(PersonaKind persona, PatternKind kind, std::size_t sessions) {
  const HashEmbedder emb;
  double sum = 0.0;
  std::size_t n = 0;
  for (std::uint64_t seed = 0; seed < sessions; ++seed) {
    const auto s = simulate_session(WriterPersona::preset(persona), 500 + seed,
                                    corpus_duration_ms(500 + seed), default_vocabulary());
    const auto snaps = reconstruct_snapshots(s.log);
    const auto series = expansion_series(s.log, snaps, emb);
    const auto input = prepare_detection(s.log, snaps, series);
    for (const auto& span : s.truth_spans) {
      if (span.kind != kind) continue;
      for (const auto& u : input.units) {
        if (u.events.begin >= span.events.begin && u.events.end <= span.events.end) {
          sum += u.expansion;
          ++n;
        }
      }
    }
  }
  REQUIRE(n > 0);
  return sum / static_cast<double>(n);
}

}  // namespace

TEST_CASE("same arguments give identical logs") {
  const auto p = WriterPersona::preset(PersonaKind::kIndependentWriter);
  const auto a = simulate_session(p, 7, 60000, default_vocabulary());
  const auto b = simulate_session(p, 7, 60000, default_vocabulary());
  CHECK(serialize_session_log(a.log) == serialize_session_log(b.log));
  CHECK(truth_to_json(a).dump() == truth_to_json(b).dump());
  const auto c = simulate_session(p, 8, 60000, default_vocabulary());
  CHECK(serialize_session_log(a.log) != serialize_session_log(c.log));
}

TEST_CASE("every persona yields valid logs") {
  for (const auto kind : kAll) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      INFO(to_string(kind), " seed ", seed);
      const auto s = simulate_session(WriterPersona::preset(kind), seed, corpus_duration_ms(seed),
                                      default_vocabulary());
      const auto text = serialize_session_log(s.log);
      const auto parsed = parse_session_log(text);
      CHECK(parsed == s.log);
      verify_log(parsed);
      REQUIRE(s.log.final_text);
      CHECK(replay(parsed) == *s.log.final_text);
      CHECK(s.truth_class == persona_class(kind));
      for (const auto& span : s.truth_spans) {
        CHECK(span.events.begin < span.events.end);
        CHECK(span.events.end <= s.log.events.size());
        CHECK(s.log.events[span.events.begin].seq == span.first_seq);
        CHECK(s.log.events[span.events.end - 1].seq == span.last_seq);
      }
    }
  }
}

TEST_CASE("persona construction") {
  CHECK(persona_class(PersonaKind::kCoIdeator) == SessionClass::kCoIdeation);
  CHECK(persona_class(PersonaKind::kIndependentWriter) == SessionClass::kHumanLed);
  CHECK(persona_class(PersonaKind::kEchoer) == SessionClass::kAiLed);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = simulate_session(WriterPersona::preset(PersonaKind::kEchoer), seed,
                                    corpus_duration_ms(seed), default_vocabulary());
    CHECK(s.truth_class == SessionClass::kAiLed);
    std::size_t echo = 0;
    for (const auto& span : s.truth_spans) echo += span.kind == PatternKind::kMindlessEchoing;
    CHECK(echo >= 1);
  }
  const auto c = simulate_session(WriterPersona::preset(PersonaKind::kCopyeditor), 3,
                                  corpus_duration_ms(3), default_vocabulary());
  bool has_copyedit = false;
  for (const auto& span : c.truth_spans) has_copyedit |= span.kind == PatternKind::kPrematureProlongedCopyediting;
  CHECK(has_copyedit);
  const auto i = simulate_session(WriterPersona::preset(PersonaKind::kInitiator), 3,
                                  corpus_duration_ms(3), default_vocabulary());
  bool has_shift = false;
  for (const auto& span : i.truth_spans) {
    if (span.kind == PatternKind::kWriterInitiatedTopicShift) {
      has_shift = true;
      CHECK(span.evidence.starts_at_boundary);
    }
  }
  CHECK(has_shift);
}

TEST_CASE("truth spans satisfy their own predicates") {
  const HashEmbedder emb;
  const DetectorConfig cfg;
  for (const auto kind : kAll) {
    for (std::uint64_t seed = 20; seed < 24; ++seed) {
      const auto s = simulate_session(WriterPersona::preset(kind), seed, corpus_duration_ms(seed),
                                      default_vocabulary());
      const auto snaps = reconstruct_snapshots(s.log);
      const auto series = expansion_series(s.log, snaps, emb);
      const auto detected = detect_all(prepare_detection(s.log, snaps, series), cfg);
      INFO(to_string(kind), " seed ", seed);
      REQUIRE(detected.size() == s.truth_spans.size());
      for (std::size_t k = 0; k < detected.size(); ++k) {
        CHECK(detected[k].kind == s.truth_spans[k].kind);
        CHECK(detected[k].first_seq == s.truth_spans[k].first_seq);
        CHECK(detected[k].last_seq == s.truth_spans[k].last_seq);
      }
    }
  }
}

TEST_CASE("invalid persona parameters") {
  auto p = WriterPersona::preset(PersonaKind::kEchoer);
  p.params.acceptance_probability = 1.5;
  CHECK(code_of([&] { p.validate(); }) == ErrorCode::kInvalidPersonaParams);
  p = WriterPersona::preset(PersonaKind::kEchoer);
  p.params.typing_rate_cps = 0.0;
  CHECK(code_of([&] { simulate_session(p, 1, 60000, default_vocabulary()); }) ==
        ErrorCode::kInvalidPersonaParams);
  p = WriterPersona::preset(PersonaKind::kEchoer);
  CHECK(code_of([&] { simulate_session(p, 1, 0, default_vocabulary()); }) ==
        ErrorCode::kInvalidPersonaParams);
  std::vector<TopicBank> one = {default_vocabulary()[0]};
  CHECK(code_of([&] { simulate_session(p, 1, 60000, one); }) == ErrorCode::kInvalidPersonaParams);
}

TEST_CASE("corpus spec and seeds") {
  const auto spec = parse_corpus_spec("echoer:2");
  REQUIRE(spec.size() == 1);
  CHECK(spec[0].persona == PersonaKind::kEchoer);
  CHECK(spec[0].count == 2);
  const auto corpus = generate_corpus(spec, 100);
  REQUIRE(corpus.size() == 2);
  CHECK(corpus[0].seed == 100);
  CHECK(corpus[1].seed == 101);
  const auto again = generate_corpus(spec, 100);
  CHECK(again[1].log == corpus[1].log);
  for (const char* bad : {"", "echoer", "echoer:0", "poet:3", "echoer:x", "echoer:2,"}) {
    INFO(bad);
    CHECK(code_of([&] { parse_corpus_spec(bad); }) == ErrorCode::kConfigInvalid);
  }
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto d = corpus_duration_ms(seed);
    CHECK(d >= 30 * 60000);
    CHECK(d <= 60 * 60000);
  }
}

TEST_CASE("class distribution of a full corpus") {
  const auto spec = parse_corpus_spec(
      "co_ideator:50,independent_writer:50,echoer:50,copyeditor:50,initiator:50");
  SimulationOptions fast;
  fast.verify_labels = false;
  const auto corpus = generate_corpus(spec, 1, default_vocabulary(), fast);
  REQUIRE(corpus.size() == 250);
  std::size_t co = 0, human = 0, ai = 0;
  for (const auto& s : corpus) {
    co += s.truth_class == SessionClass::kCoIdeation;
    human += s.truth_class == SessionClass::kHumanLed;
    ai += s.truth_class == SessionClass::kAiLed;
  }
  CHECK(co == 100);
  CHECK(human == 100);
  CHECK(ai == 50);
}

TEST_CASE("topic shifts expand far more than copyedits") {
  const double shift = mean_span_expansion(PersonaKind::kInitiator, PatternKind::kWriterInitiatedTopicShift, 20);
  const double edit = mean_span_expansion(PersonaKind::kCopyeditor, PatternKind::kPrematureProlongedCopyediting, 20);
  MESSAGE("topic shift ", shift, " copyedit ", edit);
  CHECK(edit >= 0.0);
  CHECK(shift >= 3.0 * edit);
}
