#include "cowrite/simulator.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "cowrite/embeddings.hpp"
#include "cowrite/error.hpp"
#include "cowrite/metrics.hpp"
#include "cowrite/rng.hpp"
#include "cowrite/sentences.hpp"

namespace cowrite {

std::string_view to_string(PersonaKind kind) {
  switch (kind) {
    case PersonaKind::kCoIdeator: return "co_ideator";
    case PersonaKind::kIndependentWriter: return "independent_writer";
    case PersonaKind::kEchoer: return "echoer";
    case PersonaKind::kCopyeditor: return "copyeditor";
    case PersonaKind::kInitiator: return "initiator";
  }
  return "independent_writer";
}

std::optional<PersonaKind> parse_persona_kind(std::string_view name) {
  for (auto k : {PersonaKind::kCoIdeator, PersonaKind::kIndependentWriter, PersonaKind::kEchoer,
                 PersonaKind::kCopyeditor, PersonaKind::kInitiator}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

SessionClass persona_class(PersonaKind kind) {
  switch (kind) {
    case PersonaKind::kCoIdeator:
    case PersonaKind::kInitiator:
      return SessionClass::kCoIdeation;
    case PersonaKind::kEchoer:
      return SessionClass::kAiLed;
    case PersonaKind::kIndependentWriter:
    case PersonaKind::kCopyeditor:
      return SessionClass::kHumanLed;
  }
  return SessionClass::kHumanLed;
}

WriterPersona WriterPersona::preset(PersonaKind kind) {
  WriterPersona p;
  p.kind = kind;
  auto& q = p.params;
  switch (kind) {
    case PersonaKind::kCoIdeator:
      q.typing_rate_cps = 4.0;
      q.suggestion_request_rate = 0.95;
      q.acceptance_probability = 0.85;
      q.edit_probability = 0.1;
      break;
    case PersonaKind::kIndependentWriter:
      q.typing_rate_cps = 4.0;
      q.suggestion_request_rate = 0.15;
      q.acceptance_probability = 0.0;
      q.edit_probability = 0.05;
      break;
    case PersonaKind::kEchoer:
      q.typing_rate_cps = 3.0;
      q.suggestion_request_rate = 1.0;
      q.acceptance_probability = 0.85;
      q.edit_probability = 0.0;
      break;
    case PersonaKind::kCopyeditor:
      q.typing_rate_cps = 3.5;
      q.suggestion_request_rate = 0.1;
      q.acceptance_probability = 0.0;
      q.edit_probability = 0.05;
      q.copyedit_burst_length = 40;
      break;
    case PersonaKind::kInitiator:
      q.typing_rate_cps = 4.0;
      q.suggestion_request_rate = 0.95;
      q.acceptance_probability = 0.9;
      q.edit_probability = 0.05;
      q.topic_shift_rate = 0.3;
      break;
  }
  return p;
}

void WriterPersona::validate() const {
  auto prob = [](double v) { return v >= 0.0 && v <= 1.0; };
  const auto& q = params;
  if (!(q.typing_rate_cps > 0.0)) {
    throw Error(ErrorCode::kInvalidPersonaParams, "typing_rate_cps must be > 0");
  }
  if (!prob(q.suggestion_request_rate) || !prob(q.acceptance_probability) ||
      !prob(q.edit_probability) || !prob(q.topic_shift_rate)) {
    throw Error(ErrorCode::kInvalidPersonaParams, "probabilities must lie in [0, 1]");
  }
  if (kind == PersonaKind::kCopyeditor &&
      (q.copyedit_burst_length < 8 || q.copyedit_burst_length > 70)) {
    throw Error(ErrorCode::kInvalidPersonaParams, "copyedit_burst_length must be in [8, 70]");
  }
  if (q.copyedit_start_ms && *q.copyedit_start_ms < 0) {
    throw Error(ErrorCode::kInvalidPersonaParams, "copyedit_start_ms must be >= 0");
  }
}

const std::vector<TopicBank>& default_vocabulary() {
  static const std::vector<TopicBank> banks = {
      {"climate change",
       {"carbon", "emissions", "warming", "glaciers", "drought", "heatwaves", "sea", "levels",
        "fossil", "fuels", "renewable", "solar", "wind", "temperature", "atmosphere", "ice",
        "methane", "wildfires", "rainfall", "coastal", "flooding", "climate", "energy", "coal",
        "ocean", "forests", "storms", "greenhouse", "degrees", "arctic"}},
      {"gun violence",
       {"firearms", "shootings", "incidents", "victims", "injured", "killed", "states",
        "handguns", "background", "checks", "police", "suspects", "teens", "children",
        "legislation", "permits", "ammunition", "homicides", "neighborhoods", "trauma",
        "rifles", "owners", "registry", "gunfire", "violence", "weapons", "courts", "offenders",
        "gangs", "loopholes"}},
      {"pandemic",
       {"virus", "infections", "vaccines", "hospitals", "masks", "lockdowns", "cases",
        "patients", "symptoms", "testing", "quarantine", "variants", "immunity", "doses",
        "clinics", "outbreaks", "deaths", "transmission", "nurses", "ventilators", "boosters",
        "antibodies", "contagion", "epidemic", "isolation", "respiratory", "wards", "pathogen",
        "surveillance", "recovery"}},
      {"city planning",
       {"roads", "transit", "zoning", "suburbs", "sidewalks", "bicycles", "commuters",
        "highways", "parking", "density", "buses", "streets", "traffic", "housing", "parks",
        "intersections", "lanes", "downtown", "railways", "neighborhood", "corridors",
        "pedestrians", "blocks", "infrastructure", "municipal", "congestion", "bridges",
        "districts", "navigation", "developers"}},
      {"school funding",
       {"teachers", "classrooms", "budgets", "tuition", "students", "curriculum", "districts",
        "textbooks", "enrollment", "salaries", "grants", "principals", "homework", "literacy",
        "graduation", "campuses", "scholarships", "tutors", "lessons", "exams", "libraries",
        "counselors", "semester", "grades", "pupils", "kindergarten", "faculty", "taxes",
        "boards", "attendance"}},
  };
  return banks;
}

namespace {

constexpr std::array<std::string_view, 20> kFunctionWords = {
    "the",  "of",   "and",  "in",    "to",    "a",       "for",  "on",   "with", "as",
    "is",   "that", "by",   "this",  "from",  "more",    "than", "across", "between", "over",
};

constexpr std::array<std::string_view, 6> kQuestionStems = {
    "What are the implications of",
    "What evidence supports the claim of",
    "What are the alternative explanations for",
    "What assumptions underlie",
    "What would happen if",
    "Why is",
};

constexpr std::int64_t kMinute = 60000;

bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

class Generator {
 public:
  Generator(const WriterPersona& persona, std::uint64_t seed, std::int64_t duration_ms,
            const std::vector<TopicBank>& vocabulary)
      : persona_(persona),
        params_(persona.params),
        rng_(seed * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL),
        duration_(duration_ms),
        vocab_(vocabulary) {
    bank_ = rng_.index(vocab_.size());
    used_banks_.push_back(bank_);
  }

  LabeledSession run(std::uint64_t seed) {
    LabeledSession out;
    out.persona = persona_.kind;
    out.seed = seed;
    log_.session_id = std::string(to_string(persona_.kind)) + "-" + std::to_string(seed);
    log_.participant_id = "sim-" + std::to_string(seed);
    log_.topic = vocab_[bank_].name;
    const bool has_assistant = true;
    socratic_ = rng_.chance(0.5);
    log_.assistant_mode = has_assistant ? (socratic_ ? AssistantMode::kSocratic
                                                     : AssistantMode::kAutocomplete)
                                        : AssistantMode::kNone;
    switch (persona_.kind) {
      case PersonaKind::kIndependentWriter: run_independent(); break;
      case PersonaKind::kCoIdeator: run_co_ideator(false); break;
      case PersonaKind::kInitiator: run_co_ideator(true); break;
      case PersonaKind::kEchoer: run_echoer(); break;
      case PersonaKind::kCopyeditor: run_copyeditor(); break;
    }
    log_.final_text = doc_;
    out.log = std::move(log_);
    out.truth_spans = std::move(truth_);
    out.truth_class = persona_class(persona_.kind);
    out.truth_authorship = std::move(tags_);
    std::size_t ai = 0;
    for (auto flag : ai_chars_) ai += flag;
    out.truth_ai_share =
        doc_.empty() ? 0.0 : static_cast<double>(ai) / static_cast<double>(doc_.size());
    return out;
  }

 private:
  // -- event primitives ----------------------------------------------------

  std::size_t emit(SessionEvent ev) {
    ev.seq = ++seq_;
    ev.timestamp_ms = t_;
    log_.events.push_back(std::move(ev));
    return log_.events.size() - 1;
  }

  std::size_t insert(std::size_t pos, std::string text, bool ai) {
    doc_.insert(pos, text);
    ai_chars_.insert(ai_chars_.begin() + static_cast<std::ptrdiff_t>(pos), text.size(),
                     ai ? 1 : 0);
    SessionEvent ev;
    ev.kind = EventKind::kInsert;
    ev.position = pos;
    ev.text = std::move(text);
    const std::size_t idx = emit(std::move(ev));
    tags_.push_back({log_.events[idx].seq, ai ? Source::kAi : Source::kWriter});
    return idx;
  }

  std::size_t erase(std::size_t pos, std::size_t len) {
    SessionEvent ev;
    ev.kind = EventKind::kDelete;
    ev.position = pos;
    ev.text = doc_.substr(pos, len);
    doc_.erase(pos, len);
    ai_chars_.erase(ai_chars_.begin() + static_cast<std::ptrdiff_t>(pos),
                    ai_chars_.begin() + static_cast<std::ptrdiff_t>(pos + len));
    return emit(std::move(ev));
  }

  void cursor(std::size_t pos) {
    SessionEvent ev;
    ev.kind = EventKind::kCursorMove;
    ev.position = pos;
    emit(std::move(ev));
  }

  void open(std::vector<std::string> suggestions) {
    SessionEvent ev;
    ev.kind = EventKind::kSuggestionOpen;
    ev.suggestions = std::move(suggestions);
    emit(std::move(ev));
  }

  void select(std::size_t index) {
    SessionEvent ev;
    ev.kind = EventKind::kSuggestionSelect;
    ev.selected_index = index;
    emit(std::move(ev));
  }

  void dismiss() {
    SessionEvent ev;
    ev.kind = EventKind::kSuggestionDismiss;
    emit(std::move(ev));
  }

  void wait(std::int64_t lo, std::int64_t hi) { t_ += rng_.between(lo, hi); }

  void type_ms(std::size_t chars) {
    const double ms = static_cast<double>(chars) * 1000.0 / params_.typing_rate_cps;
    t_ += static_cast<std::int64_t>(ms * (0.7 + 0.6 * rng_.uniform())) + 1;
  }

  // -- text --------------------------------------------------------------

  std::string word(std::size_t bank) {
    if (rng_.chance(0.6)) return rng_.pick(vocab_[bank].words);
    return std::string(kFunctionWords[rng_.index(kFunctionWords.size())]);
  }

  static void capitalize(std::string& s) {
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  }

  // Words of one sentence; the last carries the terminal mark.
  std::vector<std::string> sentence_words(std::size_t bank, std::size_t lo, std::size_t hi) {
    const auto n = static_cast<std::size_t>(rng_.between(static_cast<std::int64_t>(lo),
                                                         static_cast<std::int64_t>(hi)));
    std::vector<std::string> words;
    for (std::size_t i = 0; i < n; ++i) words.push_back(word(bank));
    capitalize(words.front());
    words.back() += ".";
    return words;
  }

  static std::string join(const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) out += w + " ";
    return out;
  }

  std::string suggestion(std::size_t bank) {
    if (!socratic_) return join(sentence_words(bank, 11, 16));
    std::string q(kQuestionStems[rng_.index(kQuestionStems.size())]);
    const auto n = rng_.between(5, 9);
    for (std::int64_t i = 0; i < n; ++i) q += " " + word(bank);
    return q + "? ";
  }

  std::vector<std::string> suggestion_list() {
    std::vector<std::string> items;
    for (int i = 0; i < 4; ++i) items.push_back(suggestion(bank_));
    return items;
  }

  void type_words(std::size_t pos, const std::vector<std::string>& chunks) {
    for (const auto& chunk : chunks) {
      if (params_.keystroke_level) {
        for (char c : chunk) {
          type_ms(1);
          insert(pos++, std::string(1, c), false);
        }
      } else {
        type_ms(chunk.size());
        insert(pos, chunk, false);
        pos += chunk.size();
      }
    }
  }

  // -- actions -----------------------------------------------------------

  // Two to four sentences, at least 200 characters, typed at the end.
  void write_burst(std::size_t min_sentences, std::size_t max_sentences) {
    wait(3000, 10000);
    std::vector<std::string> chunks;
    std::size_t chars = 0;
    std::size_t sentences = 0;
    const auto target = static_cast<std::size_t>(rng_.between(
        static_cast<std::int64_t>(min_sentences), static_cast<std::int64_t>(max_sentences)));
    while (sentences < target || chars < 200) {
      for (auto& w : sentence_words(bank_, 12, 18)) {
        chunks.push_back(w + " ");
        chars += w.size() + 1;
      }
      ++sentences;
    }
    type_words(doc_.size(), chunks);
    cursor(doc_.size());
  }

  bool accept_suggestion(std::int64_t read_lo, std::int64_t read_hi) {
    wait(1000, 4000);
    auto items = suggestion_list();
    open(items);
    wait(read_lo, read_hi);
    if (!rng_.chance(params_.acceptance_probability)) {
      dismiss();
      return false;
    }
    const std::size_t pick = rng_.index(items.size());
    select(pick);
    wait(200, 600);
    insert(doc_.size(), items[pick], true);
    wait(500, 2000);
    cursor(doc_.size());
    return true;
  }

  void dismiss_suggestions() {
    wait(1000, 4000);
    open(suggestion_list());
    wait(3000, 10000);
    dismiss();
  }

  void navigate() {
    if (doc_.empty()) return;
    wait(2000, 6000);
    cursor(rng_.index(doc_.size()));
    wait(4000, 15000);
    cursor(doc_.size());
  }

  // Offsets of letters that are not the first letter of their word.
  std::vector<std::size_t> inner_letters() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i < doc_.size(); ++i) {
      if (is_letter(doc_[i]) && is_letter(doc_[i - 1])) out.push_back(i);
    }
    return out;
  }

  void case_edit(std::size_t pos) {
    const char c = doc_[pos];
    const char toggled = std::isupper(static_cast<unsigned char>(c))
                             ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
                             : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    const bool ai = ai_chars_[pos] != 0;
    (void)ai;
    cursor(pos);
    wait(1500, 4000);
    erase(pos, 1);
    wait(300, 900);
    insert(pos, std::string(1, toggled), false);
  }

  void isolated_edit() {
    auto letters = inner_letters();
    if (letters.empty()) return;
    wait(2000, 5000);
    case_edit(rng_.pick(letters));
    wait(1000, 3000);
    cursor(doc_.size());
  }

  // Spans (sentence plus its trailing space) made entirely of AI text.
  std::vector<TextSpan> ai_sentences() const {
    std::vector<TextSpan> out;
    for (const auto& s : sentence_spans(doc_)) {
      if (s.end >= doc_.size() || doc_[s.end] != ' ') continue;
      bool all_ai = true;
      for (std::size_t i = s.begin; i <= s.end && all_ai; ++i) all_ai = ai_chars_[i] != 0;
      if (all_ai) out.push_back({s.begin, s.end + 1});
    }
    return out;
  }

  // Rewrites the middle of an accepted sentence, enough to mark it modified.
  void modify_accepted() {
    auto candidates = ai_sentences();
    if (candidates.empty()) return;
    const TextSpan s = rng_.pick(candidates);
    // Keep the first word and the closing mark plus space.
    std::size_t start = doc_.find(' ', s.begin);
    if (start == std::string::npos || start + 1 >= s.end) return;
    start += 1;
    const std::size_t stop = s.end - 2;
    if (stop <= start || (stop - start) * 10 < s.size() * 6) return;
    wait(3000, 8000);
    cursor(start);
    wait(1000, 3000);
    erase(start, stop - start);
    std::vector<std::string> words;
    const auto n = rng_.between(4, 8);
    for (std::int64_t i = 0; i < n; ++i) words.push_back(word(bank_));
    std::string text;
    for (std::size_t i = 0; i < words.size(); ++i) text += (i ? " " : "") + words[i];
    type_ms(text.size());
    insert(start, text, false);
    wait(1000, 3000);
    cursor(doc_.size());
  }

  void topic_shift() {
    std::size_t fresh = bank_;
    for (std::size_t k = 1; k <= vocab_.size(); ++k) {
      const std::size_t cand = (bank_ + k) % vocab_.size();
      if (std::find(used_banks_.begin(), used_banks_.end(), cand) == used_banks_.end()) {
        fresh = cand;
        break;
      }
    }
    if (fresh == bank_) fresh = (bank_ + 1) % vocab_.size();
    bank_ = fresh;
    used_banks_.push_back(fresh);
    wait(5000, 15000);
    const std::size_t first = insert(doc_.size(), "\n", false);
    std::vector<std::string> chunks;
    for (auto& w : sentence_words(bank_, 6, 9)) chunks.push_back(w + " ");
    type_words(doc_.size(), chunks);
    const std::size_t last = log_.events.size() - 1;
    record(PatternKind::kWriterInitiatedTopicShift, first, last);
    cursor(doc_.size());
  }

  void copyedit_burst(std::size_t edits) {
    std::size_t first = 0;
    std::size_t last = 0;
    for (std::size_t k = 0; k < edits; ++k) {
      auto letters = inner_letters();
      if (letters.empty()) return;
      wait(3000, 7000);
      const std::size_t pos = rng_.pick(letters);
      case_edit(pos);
      if (k == 0) first = log_.events.size() - 2;
      last = log_.events.size() - 1;
    }
    record(PatternKind::kPrematureProlongedCopyediting, first, last);
    wait(2000, 5000);
    cursor(doc_.size());
  }

  // Replaces accepted sentences with fresh suggestions one for one, so the
  // text churns while the sentence count stays put.
  bool echo_run() {
    auto candidates = ai_sentences();
    if (candidates.size() < 10) return false;
    std::size_t first = 0;
    std::size_t last = 0;
    std::size_t inserted = 0;
    std::size_t count = 0;
    while ((inserted < 500 || count < 4) && count < 12) {
      candidates = ai_sentences();
      if (candidates.empty()) break;
      const TextSpan target = rng_.pick(candidates);
      wait(3000, 8000);
      auto items = suggestion_list();
      open(items);
      wait(25000, 45000);
      const std::size_t pick = rng_.index(items.size());
      select(pick);
      wait(200, 600);
      const std::size_t at = insert(target.begin, items[pick], true);
      if (count == 0) first = at;
      wait(3000, 9000);
      last = erase(target.begin + items[pick].size(), target.size());
      inserted += items[pick].size();
      ++count;
    }
    record(PatternKind::kMindlessEchoing, first, last);
    return true;
  }

  void record(PatternKind kind, std::size_t first, std::size_t last) {
    InteractionSpan span;
    span.kind = kind;
    span.events = {first, last + 1};
    span.first_seq = log_.events[first].seq;
    span.last_seq = log_.events[last].seq;
    span.t_start_ms = log_.events[first].timestamp_ms;
    span.t_end_ms = log_.events[last].timestamp_ms;
    truth_.push_back(span);
  }

  bool time_left() const { return t_ < duration_; }

  // -- personas ----------------------------------------------------------

  void run_independent() {
    while (time_left()) {
      write_burst(2, 3);
      if (rng_.chance(params_.edit_probability)) isolated_edit();
      if (rng_.chance(params_.suggestion_request_rate)) {
        if (params_.acceptance_probability > 0.0) {
          accept_suggestion(5000, 12000);
        } else {
          dismiss_suggestions();
        }
      }
      if (rng_.chance(0.15)) navigate();
    }
  }

  void run_co_ideator(bool initiates) {
    while (time_left()) {
      write_burst(2, 3);
      if (initiates && t_ > 3 * kMinute && rng_.chance(params_.topic_shift_rate)) {
        topic_shift();
        write_burst(2, 3);
      }
      if (rng_.chance(params_.suggestion_request_rate)) {
        if (accept_suggestion(6000, 15000) && rng_.chance(0.35)) accept_suggestion(6000, 15000);
      }
      if (rng_.chance(params_.edit_probability)) modify_accepted();
      if (rng_.chance(0.1)) navigate();
    }
  }

  void run_echoer() {
    write_burst(2, 2);
    int since_run = 0;
    while (time_left()) {
      if (since_run >= 4 && rng_.chance(0.35) && echo_run()) {
        since_run = 0;
        // An ordinary acceptance closes the run.
        const double keep = params_.acceptance_probability;
        params_.acceptance_probability = 1.0;
        accept_suggestion(35000, 70000);
        params_.acceptance_probability = keep;
        continue;
      }
      ++since_run;
      if (rng_.chance(0.08)) {
        write_burst(2, 2);
      } else if (rng_.chance(params_.suggestion_request_rate)) {
        accept_suggestion(35000, 70000);
      }
    }
  }

  void run_copyeditor() {
    write_burst(2, 3);
    std::vector<std::int64_t> bursts;
    bursts.push_back(params_.copyedit_start_ms.value_or(t_));
    if (!params_.copyedit_start_ms && rng_.chance(0.5)) {
      bursts.push_back(duration_ * 7 / 10);
    }
    std::size_t next = 0;
    while (time_left() || next < bursts.size()) {
      // A burst due within the next couple of minutes waits for its start.
      if (next < bursts.size() && t_ + 150000 > bursts[next]) {
        t_ = std::max(t_, bursts[next]);
        copyedit_burst(params_.copyedit_burst_length);
        ++next;
        write_burst(2, 4);
        continue;
      }
      write_burst(2, 4);
      if (rng_.chance(params_.edit_probability)) isolated_edit();
      if (rng_.chance(params_.suggestion_request_rate)) dismiss_suggestions();
      if (rng_.chance(0.15)) navigate();
    }
  }

  const WriterPersona& persona_;
  PersonaParams params_;
  Rng rng_;
  std::int64_t duration_;
  const std::vector<TopicBank>& vocab_;
  std::size_t bank_ = 0;
  std::vector<std::size_t> used_banks_;
  bool socratic_ = false;

  SessionLog log_;
  std::string doc_;
  std::vector<std::uint8_t> ai_chars_;
  std::int64_t t_ = 0;
  std::int64_t seq_ = 0;
  std::vector<InsertTag> tags_;
  std::vector<InteractionSpan> truth_;
};

void verify_labels(LabeledSession& session) {
  const HashEmbedder embedder;
  const auto snapshots = reconstruct_snapshots(session.log);
  const auto series = expansion_series(session.log, snapshots, embedder);
  const auto input = prepare_detection(session.log, snapshots, series);
  const DetectorConfig cfg;
  for (auto& span : session.truth_spans) {
    std::optional<std::size_t> first;
    std::optional<std::size_t> last;
    for (std::size_t u = 0; u < input.units.size(); ++u) {
      if (input.units[u].events.begin == span.events.begin) first = u;
      if (input.units[u].events.end == span.events.end) last = u;
    }
    if (!first || !last || *last < *first) {
      throw Error(ErrorCode::kSimulatorInconsistency,
                  session.log.session_id + ": truth span does not align with transitions");
    }
    bool holds = false;
    switch (span.kind) {
      case PatternKind::kMindlessEchoing:
        holds = echoing_holds(input, *first, *last, cfg);
        break;
      case PatternKind::kPrematureProlongedCopyediting:
        holds = copyediting_holds(input, *first, *last, cfg);
        break;
      case PatternKind::kWriterInitiatedTopicShift:
        holds = topic_shift_holds(input, *first, *last, cfg);
        break;
    }
    span.evidence = run_evidence(input, *first, *last, cfg);
    if (!holds) {
      throw Error(ErrorCode::kSimulatorInconsistency,
                  session.log.session_id + ": " + std::string(to_string(span.kind)) +
                      " label at seq " + std::to_string(span.first_seq) +
                      " fails its detector predicate (delta " +
                      std::to_string(span.evidence.delta_chars) + ", expansion " +
                      format_number(span.evidence.expansion_sum) + ")");
    }
  }
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

LabeledSession simulate_session(const WriterPersona& persona, std::uint64_t seed,
                                std::int64_t duration_ms,
                                const std::vector<TopicBank>& vocabulary,
                                SimulationOptions options) {
  persona.validate();
  if (duration_ms <= 0) throw Error(ErrorCode::kInvalidPersonaParams, "duration must be > 0");
  if (vocabulary.size() < 2) {
    throw Error(ErrorCode::kInvalidPersonaParams, "need at least two topic banks");
  }
  for (const auto& bank : vocabulary) {
    if (bank.words.empty()) throw Error(ErrorCode::kInvalidPersonaParams, "empty topic bank");
  }
  Generator gen(persona, seed, duration_ms, vocabulary);
  LabeledSession session = gen.run(seed);
  if (options.verify_labels) verify_labels(session);
  return session;
}

std::vector<CorpusEntry> parse_corpus_spec(std::string_view spec) {
  std::vector<CorpusEntry> out;
  std::size_t at = 0;
  while (at <= spec.size()) {
    std::size_t comma = spec.find(',', at);
    if (comma == std::string_view::npos) comma = spec.size();
    std::string_view item = spec.substr(at, comma - at);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::kConfigInvalid, "expected persona:count, got \"" +
                                                 std::string(item) + "\"");
    }
    auto kind = parse_persona_kind(item.substr(0, colon));
    if (!kind) {
      throw Error(ErrorCode::kConfigInvalid,
                  "unknown persona \"" + std::string(item.substr(0, colon)) + "\"");
    }
    const std::string_view count_text = item.substr(colon + 1);
    std::size_t count = 0;
    if (count_text.empty()) throw Error(ErrorCode::kConfigInvalid, "missing count");
    for (char c : count_text) {
      if (c < '0' || c > '9') {
        throw Error(ErrorCode::kConfigInvalid, "bad count \"" + std::string(count_text) + "\"");
      }
      count = count * 10 + static_cast<std::size_t>(c - '0');
    }
    if (count == 0) throw Error(ErrorCode::kConfigInvalid, "counts must be > 0");
    out.push_back({*kind, count});
    at = comma + 1;
  }
  if (out.empty()) throw Error(ErrorCode::kConfigInvalid, "empty corpus spec");
  return out;
}

std::int64_t corpus_duration_ms(std::uint64_t seed) {
  return 30 * kMinute + static_cast<std::int64_t>(splitmix(seed) % (30 * kMinute + 1));
}

std::vector<LabeledSession> generate_corpus(const std::vector<CorpusEntry>& spec,
                                            std::uint64_t base_seed,
                                            const std::vector<TopicBank>& vocabulary,
                                            SimulationOptions options) {
  std::vector<LabeledSession> out;
  std::uint64_t index = 0;
  for (const auto& entry : spec) {
    const auto persona = WriterPersona::preset(entry.persona);
    for (std::size_t k = 0; k < entry.count; ++k, ++index) {
      const std::uint64_t seed = base_seed + index;
      out.push_back(
          simulate_session(persona, seed, corpus_duration_ms(seed), vocabulary, options));
    }
  }
  return out;
}

Json truth_to_json(const LabeledSession& session) {
  Json j = Json::object();
  j["session_id"] = session.log.session_id;
  j["persona"] = to_string(session.persona);
  j["seed"] = session.seed;
  j["class"] = to_string(session.truth_class);
  Json spans = Json::array();
  for (const auto& s : session.truth_spans) {
    spans.push_back(Json{{"kind", to_string(s.kind)},
                         {"first_seq", s.first_seq},
                         {"last_seq", s.last_seq},
                         {"t_start_ms", s.t_start_ms},
                         {"t_end_ms", s.t_end_ms}});
  }
  j["spans"] = std::move(spans);
  Json tags = Json::array();
  for (const auto& t : session.truth_authorship) {
    tags.push_back(Json{{"seq", t.seq}, {"source", to_string(t.source)}});
  }
  j["authorship"] = std::move(tags);
  j["ai_share"] = session.truth_ai_share;
  return j;
}

}  // namespace cowrite
