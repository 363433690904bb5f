// cowrite: batch analysis of co-writing session logs.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "cowrite/analysis.hpp"
#include "cowrite/assistant.hpp"
#include "cowrite/backend.hpp"
#include "cowrite/error.hpp"
#include "cowrite/simulator.hpp"

namespace fs = std::filesystem;
using namespace cowrite;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kIoError = 3;

struct Globals {
  std::string embeddings;
  std::size_t hash_dim = HashEmbedder::kDefaultDimension;
  std::uint64_t hash_seed = HashEmbedder::kDefaultSeed;
  std::string config;
  std::string out;
  unsigned jobs = 1;
  std::string backend = "offline";
  std::vector<std::string> overrides;
  CLI::Option* hash_dim_opt = nullptr;
  CLI::Option* hash_seed_opt = nullptr;
};

int exit_code_for(const Error& e) { return e.code() == ErrorCode::kIo ? kIoError : kInputError; }

// CLI flags > config file > defaults.
AnalysisConfig resolve_config(const Globals& g) {
  AnalysisConfig cfg;
  if (!g.config.empty()) {
    std::ifstream in(g.config);
    if (!in) throw Error(ErrorCode::kIo, "cannot open config " + g.config);
    Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::kConfigInvalid, g.config + " is not valid JSON");
    apply_config_json(j, cfg);
  }
  if (!g.embeddings.empty()) cfg.embeddings.path = g.embeddings;
  if (g.hash_dim_opt->count() > 0) {
    cfg.embeddings.path.reset();
    cfg.embeddings.hash_dim = g.hash_dim;
  }
  if (g.hash_seed_opt->count() > 0) {
    cfg.embeddings.path.reset();
    cfg.embeddings.hash_seed = g.hash_seed;
  }
  for (const auto& o : g.overrides) apply_override(o, cfg);
  cfg.validate();
  return cfg;
}

bool is_log_file(const fs::path& p) {
  return p.extension() == ".jsonl";
}

// Files are taken as given; directories contribute their *.jsonl files.
std::vector<fs::path> collect_inputs(const std::vector<std::string>& paths) {
  std::vector<fs::path> out;
  for (const auto& raw : paths) {
    const fs::path p(raw);
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p, ec)) {
        if (entry.is_regular_file() && is_log_file(entry.path())) found.push_back(entry.path());
      }
      if (ec) throw Error(ErrorCode::kIo, "cannot list " + raw + ": " + ec.message());
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else if (fs::exists(p, ec)) {
      out.push_back(p);
    } else {
      throw Error(ErrorCode::kIo, "no such file or directory: " + raw);
    }
  }
  return out;
}

std::string safe_name(std::string_view id) {
  std::string out;
  for (char c : id) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out.empty() ? "session" : out;
}

fs::path ensure_dir(const std::string& dir) {
  const fs::path p(dir.empty() ? "." : dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + p.string() + ": " + ec.message());
  return p;
}

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << body;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

struct Loaded {
  fs::path path;
  std::optional<SessionLog> log;
  std::string error;
  int code = kOk;
};

std::vector<Loaded> load_all(const std::vector<fs::path>& files, unsigned jobs) {
  std::vector<Loaded> out(files.size());
  parallel_for(files.size(), jobs, [&](std::size_t i) {
    out[i].path = files[i];
    try {
      out[i].log = load_session_log(files[i].string());
    } catch (const Error& e) {
      out[i].error = e.what();
      out[i].code = exit_code_for(e);
    }
  });
  return out;
}

int worst(int a, int b) { return std::max(a, b); }

// -- subcommands -------------------------------------------------------------

int cmd_validate(const Globals& g, const std::vector<std::string>& paths) {
  const auto files = collect_inputs(paths);
  if (files.empty()) {
    std::cerr << "no sessions found\n";
    return kInputError;
  }
  auto loaded = load_all(files, g.jobs);
  int status = kOk;
  std::size_t ok = 0;
  for (auto& l : loaded) {
    if (l.log) {
      try {
        verify_log(*l.log);
      } catch (const Error& e) {
        l.error = e.what();
        l.code = exit_code_for(e);
      }
    }
    if (l.error.empty()) {
      ++ok;
    } else {
      std::cout << l.path.string() << ": " << l.error << "\n";
      status = worst(status, l.code);
    }
  }
  if (status == kOk) {
    std::cout << ok << (ok == 1 ? " file OK\n" : " files OK\n");
  } else {
    std::cout << (files.size() - ok) << " of " << files.size() << " files invalid\n";
  }
  return status;
}

struct Analyzed {
  std::vector<SessionAnalysis> sessions;
  std::vector<std::pair<std::string, std::string>> failures;
  int status = kOk;
};

Analyzed analyze_inputs(const Globals& g, const AnalysisConfig& cfg, const Embedder& embedder,
                        const std::vector<std::string>& paths) {
  const auto files = collect_inputs(paths);
  Analyzed out;
  if (files.empty()) {
    std::cerr << "no sessions found\n";
    out.status = kInputError;
    return out;
  }
  auto loaded = load_all(files, g.jobs);
  std::vector<std::optional<SessionAnalysis>> results(loaded.size());
  parallel_for(loaded.size(), g.jobs, [&](std::size_t i) {
    if (!loaded[i].log) return;
    try {
      results[i] = analyze_session(*loaded[i].log, embedder, cfg);
    } catch (const Error& e) {
      loaded[i].error = e.what();
      loaded[i].code = exit_code_for(e);
    }
  });
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    if (results[i]) {
      out.sessions.push_back(std::move(*results[i]));
    } else {
      out.failures.emplace_back(loaded[i].path.string(), loaded[i].error);
      out.status = worst(out.status, loaded[i].code);
      std::cerr << loaded[i].path.string() << ": " << loaded[i].error << "\n";
    }
  }
  return out;
}

int cmd_analyze(const Globals& g, const std::vector<std::string>& paths) {
  const auto cfg = resolve_config(g);
  const auto embedder = make_embedder(cfg.embeddings);
  const Json echo = config_to_json(cfg, *embedder);
  auto result = analyze_inputs(g, cfg, *embedder, paths);
  if (result.sessions.empty() && result.failures.empty()) return result.status;
  const fs::path dir = ensure_dir(g.out);
  for (const auto& s : result.sessions) {
    const std::string stem = safe_name(s.session_id);
    std::ostringstream csv;
    write_expansion_csv(csv, s.series);
    write_file(dir / (stem + ".expansion.csv"), csv.str());
    write_file(dir / (stem + ".report.json"), session_report(s, echo).dump(2) + "\n");
    std::cout << s.session_id << " " << to_string(s.label) << " spans=" << s.spans.size()
              << " cumulative=" << format_number(s.series.final_cumulative()) << "\n";
  }
  Json summary = corpus_summary(result.sessions, echo);
  Json failed = Json::array();
  for (const auto& [path, err] : result.failures) failed.push_back(Json{{"path", path}, {"error", err}});
  summary["failed"] = std::move(failed);
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  std::cout << result.sessions.size() << " sessions analyzed, " << result.failures.size()
            << " failed\n";
  return result.status;
}

int cmd_detect(const Globals& g, const std::vector<std::string>& paths) {
  const auto cfg = resolve_config(g);
  const auto embedder = make_embedder(cfg.embeddings);
  auto result = analyze_inputs(g, cfg, *embedder, paths);
  std::optional<fs::path> dir;
  if (!g.out.empty()) dir = ensure_dir(g.out);
  for (const auto& s : result.sessions) {
    Json j{{"session_id", s.session_id}, {"spans", spans_to_json(s.spans)}};
    if (dir) {
      write_file(*dir / (safe_name(s.session_id) + ".spans.json"), j.dump(2) + "\n");
    } else {
      std::cout << j.dump() << "\n";
    }
  }
  return result.status;
}

int cmd_classify(const Globals& g, const std::vector<std::string>& paths) {
  const auto cfg = resolve_config(g);
  const auto embedder = make_embedder(cfg.embeddings);
  auto result = analyze_inputs(g, cfg, *embedder, paths);
  for (const auto& s : result.sessions) {
    Json j{{"session_id", s.session_id},
           {"class", to_string(s.label)},
           {"profile", profile_to_json(s.profile)},
           {"ai_share", s.ai_share}};
    std::cout << j.dump() << "\n";
  }
  return result.status;
}

int cmd_simulate(const Globals& g, const std::string& spec, std::uint64_t seed, bool verify) {
  const auto entries = parse_corpus_spec(spec);
  SimulationOptions opts;
  opts.verify_labels = verify;
  const auto corpus = generate_corpus(entries, seed, default_vocabulary(), opts);
  const fs::path dir = ensure_dir(g.out);
  for (const auto& s : corpus) {
    const std::string stem = safe_name(s.log.session_id);
    write_file(dir / (stem + ".jsonl"), serialize_session_log(s.log));
    write_file(dir / (stem + ".truth.json"), truth_to_json(s).dump(2) + "\n");
  }
  std::cout << "wrote " << corpus.size() << " sessions to " << dir.string() << "\n";
  return kOk;
}

// Turns analyze output (*.report.json) into flat CSV tables for plotting.
int cmd_report(const Globals& g, const std::vector<std::string>& dirs) {
  std::vector<Json> reports;
  for (const auto& d : dirs) {
    std::error_code ec;
    if (!fs::is_directory(d, ec)) throw Error(ErrorCode::kIo, "not a directory: " + d);
    std::vector<fs::path> found;
    for (const auto& entry : fs::directory_iterator(d, ec)) {
      const auto name = entry.path().filename().string();
      if (name.size() > 12 && name.ends_with(".report.json")) found.push_back(entry.path());
    }
    std::sort(found.begin(), found.end());
    for (const auto& p : found) {
      std::ifstream in(p);
      if (!in) throw Error(ErrorCode::kIo, "cannot read " + p.string());
      Json j = Json::parse(in, nullptr, false);
      if (j.is_discarded() || !j.is_object() || !j.contains("curve")) {
        throw Error(ErrorCode::kMalformedRecord, p.string() + " is not a session report");
      }
      reports.push_back(std::move(j));
    }
  }
  if (reports.empty()) {
    std::cerr << "no reports found\n";
    return kInputError;
  }
  const fs::path dir = ensure_dir(g.out);
  std::ostringstream sessions;
  sessions << "session_id,class,final_cumulative,ai_share,writer_expansion_share,alternations,"
              "mindless_echoing,premature_prolonged_copyediting,writer_initiated_topic_shift\n";
  std::map<std::string, std::pair<std::size_t, std::vector<double>>> by_class;
  for (const auto& r : reports) {
    const auto& counts = r.at("span_counts");
    sessions << r.at("session_id").get<std::string>() << "," << r.at("class").get<std::string>()
             << "," << format_number(r.at("final_cumulative_expansion").get<double>()) << ","
             << format_number(r.at("ai_share").get<double>()) << ","
             << format_number(r.at("profile").at("writer_expansion_share").get<double>()) << ","
             << r.at("profile").at("alternations").get<std::size_t>() << ","
             << counts.at("mindless_echoing").get<std::size_t>() << ","
             << counts.at("premature_prolonged_copyediting").get<std::size_t>() << ","
             << counts.at("writer_initiated_topic_shift").get<std::size_t>() << "\n";
    auto& [n, sum] = by_class[r.at("class").get<std::string>()];
    const auto curve = r.at("curve").get<std::vector<double>>();
    if (sum.size() < curve.size()) sum.resize(curve.size(), 0.0);
    for (std::size_t i = 0; i < curve.size(); ++i) sum[i] += curve[i];
    ++n;
  }
  std::ostringstream curves;
  curves << "class,fraction,mean_cumulative\n";
  for (const auto& [cls, entry] : by_class) {
    const auto& [n, sum] = entry;
    for (std::size_t i = 0; i < sum.size(); ++i) {
      const double frac = sum.size() > 1 ? static_cast<double>(i) / static_cast<double>(sum.size() - 1) : 0.0;
      curves << cls << "," << format_number(frac) << ","
             << format_number(sum[i] / static_cast<double>(n)) << "\n";
    }
  }
  write_file(dir / "sessions.csv", sessions.str());
  write_file(dir / "curves.csv", curves.str());
  std::cout << "wrote sessions.csv and curves.csv for " << reports.size() << " sessions\n";
  return kOk;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct SuggestArgs {
  std::string prose;
  std::string prose_file;
  std::string document;
  std::optional<std::size_t> cursor;
  std::string mode = "socratic";
  std::uint64_t seed = 0;
  bool show_prompt = false;
};

int cmd_suggest(const Globals& g, const SuggestArgs& a) {
  DataDescription data{a.prose_file.empty() ? a.prose : read_text(a.prose_file)};
  const std::string doc = a.document.empty() ? std::string() : read_text(a.document);
  const SuggestionMode mode =
      a.mode == "autocomplete" ? SuggestionMode::kAutocomplete : SuggestionMode::kSocratic;
  const auto request = make_request(doc, a.cursor.value_or(doc.size()), mode);
  const std::string prompt = build_prompt(data, request);
  if (a.show_prompt) std::cout << prompt << "\n---\n";
  auto backend = make_backend(g.backend, a.seed);
  const auto set = parse_numbered_suggestions(backend->generate(prompt), mode);
  std::cout << format_numbered(set.items) << "\n";
  if (mode == SuggestionMode::kSocratic) {
    const auto cfg = resolve_config(g);
    const auto embedder = make_embedder(cfg.embeddings);
    const auto report = validate_socratic(set, request.context, *embedder);
    std::cout << "template_match_rate=" << format_number(report.template_match_rate)
              << " mean_similarity=" << format_number(report.mean_similarity) << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analyze co-writing session logs: semantic expansion, interaction patterns, "
               "leadership classes."};
  app.require_subcommand(1);
  Globals g;
  auto* emb_opt = app.add_option("--embeddings", g.embeddings, "word-vector file (text or .gz)");
  g.hash_dim_opt = app.add_option("--hash-dim", g.hash_dim, "hash embedder dimension")
                       ->excludes(emb_opt);
  g.hash_seed_opt = app.add_option("--hash-seed", g.hash_seed, "hash embedder seed")
                        ->excludes(emb_opt);
  app.add_option("--config", g.config, "JSON config file");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--jobs", g.jobs, "parallel sessions")->check(CLI::PositiveNumber);
  app.add_option("--backend", g.backend, "suggestion backend")
      ->check(CLI::IsMember({"offline", "http"}));
  app.add_option("--set", g.overrides, "config override, e.g. detector.large_text_chars=300");

  std::vector<std::string> paths;
  auto* validate = app.add_subcommand("validate", "check logs parse and replay to final_text");
  auto* analyze = app.add_subcommand("analyze", "expansion CSV, report JSON and summary");
  auto* detect = app.add_subcommand("detect", "interaction-pattern spans per session");
  auto* classify = app.add_subcommand("classify", "leadership class per session");
  for (auto* sub : {validate, analyze, detect, classify}) {
    sub->add_option("paths", paths, "log files or directories")->required();
    sub->fallthrough();
  }

  std::string spec;
  std::uint64_t seed = 42;
  bool no_verify = false;
  auto* simulate = app.add_subcommand("simulate", "generate a labelled synthetic corpus");
  simulate->add_option("--spec", spec, "persona:count,...")->required();
  simulate->add_option("--seed", seed, "base seed");
  simulate->add_flag("--no-verify", no_verify, "skip re-checking truth spans");
  simulate->fallthrough();

  std::vector<std::string> report_dirs;
  auto* report = app.add_subcommand("report", "flatten analyze output into CSV plot data");
  report->add_option("dirs", report_dirs, "analyze output directories")->required();
  report->fallthrough();

  SuggestArgs sa;
  auto* suggest = app.add_subcommand("suggest", "build a prompt and fetch four suggestions");
  suggest->add_option("--prose", sa.prose, "data description prose");
  suggest->add_option("--prose-file", sa.prose_file, "file holding the data description");
  suggest->add_option("--document", sa.document, "file holding the current draft");
  suggest->add_option("--cursor", sa.cursor, "byte offset of the cursor (default: end)");
  suggest->add_option("--mode", sa.mode)->check(CLI::IsMember({"socratic", "autocomplete"}));
  suggest->add_option("--seed", sa.seed, "offline backend seed");
  suggest->add_flag("--show-prompt", sa.show_prompt);
  suggest->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*validate) return cmd_validate(g, paths);
    if (*analyze) return cmd_analyze(g, paths);
    if (*detect) return cmd_detect(g, paths);
    if (*classify) return cmd_classify(g, paths);
    if (*simulate) return cmd_simulate(g, spec, seed, !no_verify);
    if (*report) return cmd_report(g, report_dirs);
    if (*suggest) return cmd_suggest(g, sa);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
