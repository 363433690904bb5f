#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>

namespace cowrite {

class GenerationBackend {
 public:
  virtual ~GenerationBackend() = default;
  // Returns the model's raw text for a non-empty prompt.
  virtual std::string generate(const std::string& prompt) = 0;
  virtual std::string name() const = 0;
};

// Fills Socratic templates or next-sentence stubs with content words drawn
// from the prompt's context. Output depends only on (prompt, seed).
class OfflineBackend final : public GenerationBackend {
 public:
  explicit OfflineBackend(std::uint64_t seed = 0) : seed_(seed) {}

  std::string generate(const std::string& prompt) override;
  std::string name() const override { return "offline"; }

 private:
  std::uint64_t seed_;
};

struct HttpBackendOptions {
  // http://host:port/path
  std::string endpoint;
  // Sent as a bearer token when non-empty.
  std::string credential;
  std::chrono::milliseconds timeout{30000};
  int retries = 1;
};

// POSTs {"prompt": ...} and reads {"text": ...}. Connection failures raise
// BackendUnavailable, read timeouts BackendTimeout.
class HttpBackend final : public GenerationBackend {
 public:
  explicit HttpBackend(HttpBackendOptions options);

  // Endpoint from COWRITE_BACKEND_URL, credential from COWRITE_BACKEND_TOKEN.
  static HttpBackend from_environment();

  std::string generate(const std::string& prompt) override;
  std::string name() const override { return "http"; }

 private:
  HttpBackendOptions options_;
};

// "offline" or "http".
std::unique_ptr<GenerationBackend> make_backend(const std::string& kind, std::uint64_t seed);

}  // namespace cowrite
