#include "cowrite/analysis.hpp"

#include <map>

#include "cowrite/error.hpp"

namespace cowrite {

std::unique_ptr<Embedder> make_embedder(const EmbeddingSettings& settings) {
  if (settings.path) {
    auto store = std::make_shared<const WordVectorStore>(load_word_vectors_file(*settings.path));
    return std::make_unique<WordVectorEmbedder>(std::move(store), *settings.path);
  }
  return std::make_unique<HashEmbedder>(settings.hash_dim, settings.hash_seed);
}

void AnalysisConfig::validate() const {
  detector.validate();
  thresholds.validate();
  if (!(authorship.modified_threshold > 0.0 && authorship.modified_threshold <= 1.0)) {
    throw Error(ErrorCode::kConfigInvalid, "authorship.modified_threshold must be in (0, 1]");
  }
  if (curve_bins == 0) throw Error(ErrorCode::kConfigInvalid, "curve_bins must be > 0");
  if (!embeddings.path && embeddings.hash_dim == 0) {
    throw Error(ErrorCode::kConfigInvalid, "embeddings.hash_dim must be > 0");
  }
}

namespace {

[[noreturn]] void bad(const std::string& key, const char* want) {
  throw Error(ErrorCode::kConfigInvalid, "config key " + key + " must be " + want);
}

std::size_t as_count(const Json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::size_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::size_t>();
  bad(key, "a non-negative integer");
}

std::int64_t as_int(const Json& v, const std::string& key) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  bad(key, "an integer");
}

double as_real(const Json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  bad(key, "a number");
}

bool as_flag(const Json& v, const std::string& key) {
  if (v.is_boolean()) return v.get<bool>();
  bad(key, "true or false");
}

void require_object(const Json& v, const std::string& key) {
  if (!v.is_object()) bad(key, "an object");
}

void apply_detector(const Json& j, DetectorConfig& d) {
  require_object(j, "detector");
  for (const auto& [k, v] : j.items()) {
    const std::string key = "detector." + k;
    if (k == "large_text_chars") d.large_text_chars = as_count(v, key);
    else if (k == "significant_expansion") d.significant_expansion = as_real(v, key);
    else if (k == "minimal_delta_chars") d.minimal_delta_chars = as_count(v, key);
    else if (k == "min_run_events") d.min_run_events = as_count(v, key);
    else if (k == "min_run_duration_ms") d.min_run_duration_ms = as_int(v, key);
    else if (k == "early_phase_fraction") d.early_phase_fraction = as_real(v, key);
    else if (k == "substantial_expansion") d.substantial_expansion = as_real(v, key);
    else if (k == "echo_ai_fraction") d.echo_ai_fraction = as_real(v, key);
    else if (k == "topic_shift_requires_writer_source")
      d.topic_shift_requires_writer_source = as_flag(v, key);
    else throw Error(ErrorCode::kConfigInvalid, "unknown config key " + key);
  }
}

void apply_classifier(const Json& j, ClassifierThresholds& t) {
  require_object(j, "classifier");
  for (const auto& [k, v] : j.items()) {
    const std::string key = "classifier." + k;
    if (k == "lo") t.lo = as_real(v, key);
    else if (k == "hi") t.hi = as_real(v, key);
    else if (k == "min_alternations") t.min_alternations = as_count(v, key);
    else throw Error(ErrorCode::kConfigInvalid, "unknown config key " + key);
  }
}

void apply_embeddings(const Json& j, EmbeddingSettings& e) {
  require_object(j, "embeddings");
  for (const auto& [k, v] : j.items()) {
    const std::string key = "embeddings." + k;
    if (k == "path") {
      if (v.is_null()) e.path.reset();
      else if (v.is_string()) e.path = v.get<std::string>();
      else bad(key, "a string or null");
    } else if (k == "hash_dim") {
      e.hash_dim = as_count(v, key);
    } else if (k == "hash_seed") {
      e.hash_seed = as_count(v, key);
    } else if (k == "kind") {
      // Written by config_to_json; informational only.
    } else {
      throw Error(ErrorCode::kConfigInvalid, "unknown config key " + key);
    }
  }
}

}  // namespace

void apply_config_json(const Json& patch, AnalysisConfig& cfg) {
  require_object(patch, "<root>");
  AnalysisConfig next = cfg;
  for (const auto& [k, v] : patch.items()) {
    if (k == "detector") apply_detector(v, next.detector);
    else if (k == "classifier") apply_classifier(v, next.thresholds);
    else if (k == "embeddings") apply_embeddings(v, next.embeddings);
    else if (k == "authorship") {
      require_object(v, k);
      for (const auto& [ak, av] : v.items()) {
        if (ak != "modified_threshold") {
          throw Error(ErrorCode::kConfigInvalid, "unknown config key authorship." + ak);
        }
        next.authorship.modified_threshold = as_real(av, "authorship." + ak);
      }
    } else if (k == "curve_bins") {
      next.curve_bins = as_count(v, k);
    } else if (k == "embedder") {
      // Echo of the resolved embedder; ignored on input.
    } else {
      throw Error(ErrorCode::kConfigInvalid, "unknown config key " + k);
    }
  }
  cfg = std::move(next);
}

void apply_override(std::string_view assignment, AnalysisConfig& cfg) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw Error(ErrorCode::kConfigInvalid,
                "override must look like section.key=value: " + std::string(assignment));
  }
  const std::string path(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  Json value = Json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  Json patch = Json::object();
  const auto dot = path.find('.');
  if (dot == std::string::npos) {
    patch[path] = value;
  } else {
    patch[path.substr(0, dot)][path.substr(dot + 1)] = value;
  }
  apply_config_json(patch, cfg);
}

Json config_to_json(const AnalysisConfig& cfg, const Embedder& embedder) {
  const auto& d = cfg.detector;
  Json j = Json::object();
  j["detector"] = Json{{"large_text_chars", d.large_text_chars},
                       {"significant_expansion", d.significant_expansion},
                       {"minimal_delta_chars", d.minimal_delta_chars},
                       {"min_run_events", d.min_run_events},
                       {"min_run_duration_ms", d.min_run_duration_ms},
                       {"early_phase_fraction", d.early_phase_fraction},
                       {"substantial_expansion", d.substantial_expansion},
                       {"echo_ai_fraction", d.echo_ai_fraction},
                       {"topic_shift_requires_writer_source",
                        d.topic_shift_requires_writer_source}};
  j["classifier"] = Json{{"lo", cfg.thresholds.lo},
                         {"hi", cfg.thresholds.hi},
                         {"min_alternations", cfg.thresholds.min_alternations}};
  j["authorship"] = Json{{"modified_threshold", cfg.authorship.modified_threshold}};
  Json e = Json::object();
  if (cfg.embeddings.path) {
    e["kind"] = "word_vectors";
    e["path"] = *cfg.embeddings.path;
  } else {
    e["kind"] = "hash";
    e["hash_dim"] = cfg.embeddings.hash_dim;
    e["hash_seed"] = cfg.embeddings.hash_seed;
  }
  j["embeddings"] = std::move(e);
  j["embedder"] = embedder.describe();
  j["curve_bins"] = cfg.curve_bins;
  return j;
}

SessionAnalysis analyze_session(const SessionLog& log, const Embedder& embedder,
                                const AnalysisConfig& cfg) {
  verify_log(log);
  SessionAnalysis out;
  out.session_id = log.session_id;
  out.participant_id = log.participant_id;
  out.topic = log.topic;
  out.assistant_mode = log.assistant_mode;
  out.duration_ms = log.duration_ms();
  out.event_count = log.events.size();
  const auto snapshots = reconstruct_snapshots(log);
  out.series = expansion_series(log, snapshots, embedder);
  const auto input = prepare_detection(log, snapshots, out.series);
  out.spans = detect_all(input, cfg.detector);
  const auto authorship = attribute_authorship(log, cfg.authorship);
  out.ai_share = authorship.ai_share();
  out.profile = build_profile(out.series, attribute_expansion(out.series, log), authorship);
  out.label = classify_session(out.profile, cfg.thresholds);
  out.curve = resample_cumulative(out.series, out.duration_ms, cfg.curve_bins);
  return out;
}

Json spans_to_json(std::span<const InteractionSpan> spans) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& s = spans[i];
    bool overlap = false;
    for (std::size_t k = 0; k < spans.size() && !overlap; ++k) {
      if (k == i || spans[k].kind == s.kind) continue;
      overlap = spans[k].events.begin < s.events.end && s.events.begin < spans[k].events.end;
    }
    const auto& e = s.evidence;
    arr.push_back(Json{{"kind", to_string(s.kind)},
                       {"first_seq", s.first_seq},
                       {"last_seq", s.last_seq},
                       {"t_start_ms", s.t_start_ms},
                       {"t_end_ms", s.t_end_ms},
                       {"evidence",
                        Json{{"chars_generated", e.chars_generated},
                             {"delta_chars", e.delta_chars},
                             {"expansion_sum", e.expansion_sum},
                             {"ai_char_fraction", e.ai_char_fraction},
                             {"starts_at_boundary", e.starts_at_boundary},
                             {"premature", e.premature}}},
                       {"overlaps_other_kind", overlap}});
  }
  return arr;
}

Json profile_to_json(const IdeationProfile& p) {
  return Json{{"writer_expansion_share", p.writer_expansion_share},
              {"ai_expansion_share", p.ai_expansion_share},
              {"alternations", p.alternations},
              {"total_expansion", p.total_expansion}};
}

namespace {

constexpr PatternKind kKinds[] = {PatternKind::kMindlessEchoing,
                                  PatternKind::kPrematureProlongedCopyediting,
                                  PatternKind::kWriterInitiatedTopicShift};
constexpr SessionClass kClasses[] = {SessionClass::kHumanLed, SessionClass::kAiLed,
                                     SessionClass::kCoIdeation};

}  // namespace

Json session_report(const SessionAnalysis& a, const Json& config_echo) {
  Json j = Json::object();
  j["session_id"] = a.session_id;
  j["participant_id"] = a.participant_id;
  j["topic"] = a.topic;
  j["assistant_mode"] = to_string(a.assistant_mode);
  j["duration_ms"] = a.duration_ms;
  j["events"] = a.event_count;
  j["snapshots"] = a.series.points.size();
  j["class"] = to_string(a.label);
  j["profile"] = profile_to_json(a.profile);
  j["ai_share"] = a.ai_share;
  j["final_cumulative_expansion"] = a.series.final_cumulative();
  Json counts = Json::object();
  for (auto kind : kKinds) {
    std::size_t n = 0;
    for (const auto& s : a.spans) n += s.kind == kind;
    counts[std::string(to_string(kind))] = n;
  }
  j["span_counts"] = std::move(counts);
  j["spans"] = spans_to_json(a.spans);
  j["curve"] = a.curve;
  j["config"] = config_echo;
  return j;
}

Json corpus_summary(std::span<const SessionAnalysis> sessions, const Json& config_echo) {
  Json j = Json::object();
  j["sessions"] = sessions.size();
  Json class_counts = Json::object();
  Json curves = Json::object();
  Json finals = Json::object();
  for (auto cls : kClasses) {
    std::size_t n = 0;
    std::vector<double> sum;
    double final_sum = 0.0;
    for (const auto& s : sessions) {
      if (s.label != cls) continue;
      ++n;
      if (sum.size() < s.curve.size()) sum.resize(s.curve.size(), 0.0);
      for (std::size_t i = 0; i < s.curve.size(); ++i) sum[i] += s.curve[i];
      final_sum += s.series.final_cumulative();
    }
    const std::string name(to_string(cls));
    class_counts[name] = n;
    if (n > 0) {
      for (auto& v : sum) v /= static_cast<double>(n);
      curves[name] = sum;
      finals[name] = final_sum / static_cast<double>(n);
    } else {
      curves[name] = Json::array();
      finals[name] = nullptr;
    }
  }
  j["class_counts"] = std::move(class_counts);
  Json span_counts = Json::object();
  for (auto kind : kKinds) {
    std::size_t n = 0;
    for (const auto& s : sessions) {
      for (const auto& sp : s.spans) n += sp.kind == kind;
    }
    span_counts[std::string(to_string(kind))] = n;
  }
  j["span_counts"] = std::move(span_counts);
  j["mean_final_cumulative"] = std::move(finals);
  j["mean_curve"] = std::move(curves);
  j["config"] = config_echo;
  return j;
}

}  // namespace cowrite
