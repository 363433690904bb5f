#include "cowrite/backend.hpp"

#include <httplib.h>

#include <algorithm>
#include <array>
#include <cstdlib>
#include <json.hpp>
#include <string_view>

#include "cowrite/assistant.hpp"
#include "cowrite/embeddings.hpp"
#include "cowrite/error.hpp"
#include "cowrite/rng.hpp"

namespace cowrite {

namespace {

constexpr std::array<std::string_view, 40> kStopwords = {
    "the",   "and",   "that",  "this",  "with",  "from",  "have",  "been",
    "were",  "they",  "their", "there", "which", "what",  "when",  "where",
    "would", "could", "should", "about", "into", "than",  "then",  "also",
    "these", "those", "such",  "more",  "most",  "very",  "over",  "only",
    "each",  "other", "some",  "while", "being", "does",  "based", "text",
};

constexpr std::array<std::string_view, 8> kSocraticFills = {
    "What evidence supports the claim of {a} {b}?",
    "What are the implications of {a} for {b}?",
    "What are the alternative explanations for the trend of {a} {b}?",
    "What assumptions underlie {a} and {b}?",
    "How does {a} affect {b}?",
    "What would happen if {a} changed {b}?",
    "What is another way to look at {a} {b}?",
    "Why is {a} {b} important?",
};

constexpr std::array<std::string_view, 6> kSentenceFills = {
    "The {a} data also points to {b}.",
    "This suggests that {a} shapes {b}.",
    "Another angle is how {a} relates to {b}.",
    "Over time, {a} and {b} move together.",
    "Readers may overlook the role of {a} in {b}.",
    "A closer look at {a} reveals {b}.",
};

std::string fill(std::string_view pattern, const std::string& a, const std::string& b) {
  std::string out(pattern);
  auto replace = [&](std::string_view key, const std::string& value) {
    auto at = out.find(key);
    if (at != std::string::npos) out.replace(at, key.size(), value);
  };
  replace("{a}", a);
  replace("{b}", b);
  return out;
}

std::uint64_t mix(std::uint64_t seed, std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ (seed * 0x9e3779b97f4a7c15ULL);
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Context between the data paragraph and the instruction; falls back to the
// data description when the writer has written nothing yet.
std::string_view prompt_context(std::string_view prompt) {
  const auto split = prompt.find("\n\n");
  const auto instr = prompt.find("Based on ");
  if (split != std::string_view::npos && instr != std::string_view::npos && instr > split + 2) {
    return prompt.substr(split + 2, instr - split - 2);
  }
  return split == std::string_view::npos ? prompt : prompt.substr(0, split);
}

std::vector<std::string> content_words(std::string_view text) {
  std::vector<std::string> words;
  for (auto& token : tokenize(text)) {
    if (token.size() < 4) continue;
    if (std::find(kStopwords.begin(), kStopwords.end(), token) != kStopwords.end()) continue;
    if (std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      continue;
    }
    if (std::find(words.begin(), words.end(), token) == words.end()) words.push_back(token);
  }
  if (words.empty()) words = {"the", "writing"};
  return words;
}

}  // namespace

std::string OfflineBackend::generate(const std::string& prompt) {
  if (prompt.empty()) throw Error(ErrorCode::kConfigInvalid, "prompt must not be empty");
  const bool socratic = prompt.find("Socratic questions") != std::string::npos;
  const auto words = content_words(prompt_context(prompt));
  Rng rng(mix(seed_, prompt));
  std::string out;
  std::vector<std::size_t> used;
  const std::size_t pool = socratic ? kSocraticFills.size() : kSentenceFills.size();
  for (int n = 1; n <= 4; ++n) {
    std::size_t pick = rng.index(pool);
    while (std::find(used.begin(), used.end(), pick) != used.end()) pick = (pick + 1) % pool;
    used.push_back(pick);
    const std::string& a = rng.pick(words);
    const std::string& b = rng.pick(words);
    const std::string_view pattern = socratic ? kSocraticFills[pick] : kSentenceFills[pick];
    if (n > 1) out += '\n';
    out += std::to_string(n) + ". " + fill(pattern, a, b);
  }
  return out;
}

HttpBackend::HttpBackend(HttpBackendOptions options) : options_(std::move(options)) {}

HttpBackend HttpBackend::from_environment() {
  HttpBackendOptions options;
  if (const char* url = std::getenv("COWRITE_BACKEND_URL")) options.endpoint = url;
  if (const char* token = std::getenv("COWRITE_BACKEND_TOKEN")) options.credential = token;
  return HttpBackend(std::move(options));
}

std::string HttpBackend::generate(const std::string& prompt) {
  if (prompt.empty()) throw Error(ErrorCode::kConfigInvalid, "prompt must not be empty");
  const std::string& url = options_.endpoint;
  const auto scheme_end = url.find("://");
  if (url.empty() || scheme_end == std::string::npos) {
    throw Error(ErrorCode::kBackendUnavailable, "no endpoint configured (COWRITE_BACKEND_URL)");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  const std::string host = url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(host);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (!options_.credential.empty()) {
    headers.emplace("Authorization", "Bearer " + options_.credential);
  }
  const std::string body = nlohmann::json{{"prompt", prompt}}.dump();

  ErrorCode last = ErrorCode::kBackendUnavailable;
  std::string detail;
  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    auto res = client.Post(path, headers, body, "application/json");
    if (!res) {
      const auto err = res.error();
      last = (err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout)
                 ? ErrorCode::kBackendTimeout
                 : ErrorCode::kBackendUnavailable;
      detail = httplib::to_string(err);
      continue;
    }
    if (res->status != 200) {
      last = ErrorCode::kBackendUnavailable;
      detail = "HTTP " + std::to_string(res->status);
      continue;
    }
    try {
      auto json = nlohmann::json::parse(res->body);
      if (json.contains("text") && json["text"].is_string()) return json["text"].get<std::string>();
      detail = "response envelope lacks \"text\"";
    } catch (const nlohmann::json::parse_error& e) {
      detail = e.what();
    }
    last = ErrorCode::kBackendUnavailable;
  }
  throw Error(last, host + path + ": " + detail);
}

std::unique_ptr<GenerationBackend> make_backend(const std::string& kind, std::uint64_t seed) {
  if (kind == "offline") return std::make_unique<OfflineBackend>(seed);
  if (kind == "http") return std::make_unique<HttpBackend>(HttpBackend::from_environment());
  throw Error(ErrorCode::kConfigInvalid, "unknown backend \"" + kind + "\"");
}

}  // namespace cowrite
