#include <doctest.h>

#include <map>

#include "cowrite/classifier.hpp"
#include "cowrite/error.hpp"
#include "cowrite/simulator.hpp"
#include "support.hpp"

using namespace cowrite;
using testkit::LogBuilder;

namespace {

struct Pipeline {
  ExpansionSeries series;
  std::vector<AttributedPoint> attributed;
  IdeationProfile profile;
};

Pipeline run(const SessionLog& log) {
  static const HashEmbedder emb;
  Pipeline p;
  const auto snaps = reconstruct_snapshots(log);
  p.series = expansion_series(log, snaps, emb);
  p.attributed = attribute_expansion(p.series, log);
  p.profile = build_profile(p.series, p.attributed, attribute_authorship(log));
  return p;
}

IdeationProfile shares(double ai, std::size_t alternations) {
  IdeationProfile p;
  p.ai_expansion_share = ai;
  p.writer_expansion_share = 1.0 - ai;
  p.alternations = alternations;
  p.total_expansion = 1.0;
  return p;
}

}  // namespace

TEST_CASE("no suggestions: everything is writer") {
  auto log = LogBuilder().insert(0, "One two. ").cursor(9).insert(9, "Three four. ").cursor(21).build();
  const auto p = run(log);
  for (const auto& a : p.attributed) CHECK(a.source == Source::kWriter);
  CHECK(p.profile.writer_expansion_share == 1.0);
  CHECK(p.profile.alternations == 0);
  CHECK(classify_session(p.profile, {}) == SessionClass::kHumanLed);
}

TEST_CASE("a transition holding one accepted suggestion is AI") {
  auto log = LogBuilder().insert(0, "One two. ").cursor(9).accept(9, "Three four. ").cursor(21).build();
  const auto p = run(log);
  // Snapshots: initial, move, open, move, end.
  REQUIRE(p.attributed.size() == 4);
  CHECK(p.attributed[0].source == Source::kWriter);
  CHECK(p.attributed[1].inherited);
  CHECK(p.attributed[2].source == Source::kAi);
  CHECK_FALSE(p.attributed[2].inherited);
  CHECK(p.attributed[3].source == Source::kAi);
  CHECK(p.attributed[3].inherited);
}

TEST_CASE("zero-insert transitions inherit") {
  auto log = LogBuilder().accept(0, "Three four. ").cursor(12).erase(0, "T").cursor(0).build();
  const auto p = run(log);
  CHECK(p.attributed.back().inherited);
  CHECK(p.attributed.back().source == p.attributed[p.attributed.size() - 2].source);
}

TEST_CASE("attribution matches the simulator's insert tags") {
  for (auto persona : {PersonaKind::kCoIdeator, PersonaKind::kInitiator, PersonaKind::kEchoer}) {
    const auto s = simulate_session(WriterPersona::preset(persona), 17, 40 * 60000,
                                    default_vocabulary());
    std::map<std::int64_t, Source> tag;
    for (const auto& t : s.truth_authorship) tag[t.seq] = t.source;
    const auto p = run(s.log);
    const auto snaps = reconstruct_snapshots(s.log);
    Source previous = Source::kWriter;
    for (const auto& a : p.attributed) {
      std::size_t ai = 0, total = 0;
      const auto range = snaps[a.point + 1].events;
      for (std::size_t i = range.begin; i < range.end; ++i) {
        const auto& e = s.log.events[i];
        if (e.kind != EventKind::kInsert) continue;
        total += e.text.size();
        if (tag.at(e.seq) == Source::kAi) ai += e.text.size();
      }
      const Source expect = total == 0 ? previous : (2 * ai > total ? Source::kAi : Source::kWriter);
      CHECK(a.source == expect);
      CHECK(a.inherited == (total == 0));
      previous = expect;
    }
  }
}

TEST_CASE("classification examples") {
  const ClassifierThresholds any{0.0, 1.0, 4};
  CHECK(classify_session(shares(0.0, 0), any) == SessionClass::kHumanLed);
  CHECK(classify_session(shares(1.0, 0), any) == SessionClass::kAiLed);
  CHECK(classify_session(shares(0.5, 12), {0.2, 0.8, 4}) == SessionClass::kCoIdeation);
  CHECK(classify_session(shares(0.4, 1), {}) == SessionClass::kHumanLed);
  CHECK(classify_session(shares(0.6, 1), {}) == SessionClass::kAiLed);
  CHECK(classify_session(shares(0.5, 1), {}) == SessionClass::kHumanLed);
  CHECK(classify_session(shares(0.75, 0), {}) == SessionClass::kAiLed);
  CHECK(classify_session(shares(0.25, 9), {}) == SessionClass::kHumanLed);
}

TEST_CASE("threshold validation") {
  for (auto t : {ClassifierThresholds{0.5, 0.5, 4}, ClassifierThresholds{-0.1, 0.5, 4},
                 ClassifierThresholds{0.2, 1.2, 4}, ClassifierThresholds{0.8, 0.2, 4}}) {
    try {
      classify_session(shares(0.5, 0), t);
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kThresholdInvalid);
    }
  }
}

TEST_CASE("more AI share never flips ai_led back to human_led") {
  for (std::size_t alt : {0ul, 2ul, 4ul, 10ul}) {
    for (double lo : {0.1, 0.25, 0.4}) {
      for (double hi : {0.6, 0.75, 0.9}) {
        bool reached_ai = false;
        for (int k = 0; k <= 200; ++k) {
          const auto label = classify_session(shares(k / 200.0, alt), {lo, hi, 4});
          if (label == SessionClass::kAiLed) reached_ai = true;
          if (reached_ai) CHECK(label != SessionClass::kHumanLed);
        }
      }
    }
  }
}

TEST_CASE("profile invariants on simulated sessions") {
  for (auto persona : {PersonaKind::kCoIdeator, PersonaKind::kIndependentWriter,
                       PersonaKind::kEchoer, PersonaKind::kCopyeditor, PersonaKind::kInitiator}) {
    const auto s = simulate_session(WriterPersona::preset(persona), 5, 30 * 60000,
                                    default_vocabulary());
    const auto p = run(s.log);
    REQUIRE(p.profile.total_expansion > 0.0);
    CHECK(p.profile.writer_expansion_share + p.profile.ai_expansion_share ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.profile.alternations + 1 <= p.attributed.size());
    CHECK(p.profile.total_expansion == doctest::Approx(p.series.final_cumulative()).epsilon(1e-9));
  }
}

TEST_CASE("without expansion the character share decides") {
  ExpansionSeries series;
  series.points.resize(2);
  std::vector<AttributedPoint> attributed = {{0, Source::kAi, false}, {1, Source::kAi, true}};
  AuthorshipMap map;
  map.spans = {{0, 20, Origin::kWriter}, {20, 80, Origin::kAiAccepted}};
  const auto p = build_profile(series, attributed, map);
  CHECK(p.total_expansion == 0.0);
  CHECK(p.ai_expansion_share == doctest::Approx(0.8));
  CHECK(classify_session(p, {}) == SessionClass::kAiLed);
}
