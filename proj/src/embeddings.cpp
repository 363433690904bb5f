#include "cowrite/embeddings.hpp"

#include <zlib.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cowrite/error.hpp"
#include "cowrite/log.hpp"

namespace cowrite {

bool EmbeddingVector::is_zero() const {
  for (double v : values) {
    if (v != 0.0) return false;
  }
  return true;
}

namespace {

char fold(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string fold(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = fold(c);
  return out;
}

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c >= 0x80;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool is_integer(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

WordVectorStore::WordVectorStore(std::size_t dimension, std::vector<std::string> words,
                                 std::vector<float> data)
    : dimension_(dimension), data_(std::move(data)) {
  if (dimension_ == 0 || words.empty()) throw Error(ErrorCode::kEmptyStore, "no vectors");
  if (data_.size() != words.size() * dimension_) {
    throw Error(ErrorCode::kInconsistentDimension, "vector data does not match vocabulary");
  }
  index_.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    index_.emplace(fold(words[i]), i * dimension_);
  }
}

std::span<const float> WordVectorStore::lookup(std::string_view word) const {
  auto it = index_.find(fold(word));
  if (it == index_.end()) return {};
  return {data_.data() + it->second, dimension_};
}

WordVectorStore load_word_vectors(std::istream& in) {
  std::vector<std::string> words;
  std::vector<float> data;
  std::unordered_map<std::string, bool> seen;
  std::size_t dimension = 0;
  std::string raw;
  std::size_t line = 0;
  bool first = true;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    auto fields = split_fields(raw);
    if (fields.empty()) continue;
    if (first) {
      first = false;
      if (fields.size() == 2 && is_integer(fields[0]) && is_integer(fields[1])) {
        std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), dimension);
        if (dimension == 0) {
          throw Error(ErrorCode::kInconsistentDimension, "header declares dimension 0", line);
        }
        continue;
      }
    }
    const std::size_t got = fields.size() - 1;
    if (dimension == 0) {
      if (got == 0) throw Error(ErrorCode::kInconsistentDimension, "no components", line);
      dimension = got;
    }
    if (got != dimension) {
      throw Error(ErrorCode::kInconsistentDimension,
                  "expected " + std::to_string(dimension) + " components, found " +
                      std::to_string(got),
                  line);
    }
    std::string key = fold(fields[0]);
    const bool duplicate = !seen.emplace(key, true).second;
    const std::size_t offset = data.size();
    for (std::size_t k = 1; k < fields.size(); ++k) {
      float value = 0.0f;
      const auto* b = fields[k].data();
      const auto* e = b + fields[k].size();
      auto [ptr, ec] = std::from_chars(b, e, value);
      if (ec != std::errc() || ptr != e || !std::isfinite(value)) {
        throw Error(ErrorCode::kMalformedFloat, "\"" + std::string(fields[k]) + "\"", line);
      }
      if (!duplicate) data.push_back(value);
    }
    if (!duplicate) {
      words.push_back(std::move(key));
    } else {
      data.resize(offset);
    }
  }
  if (words.empty()) throw Error(ErrorCode::kEmptyStore, "no word vectors found");
  return WordVectorStore(dimension, std::move(words), std::move(data));
}

WordVectorStore load_word_vectors_file(const std::string& path) {
  gzFile file = gzopen(path.c_str(), "rb");
  if (file == nullptr) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::string content;
  char buffer[1 << 16];
  int n = 0;
  while ((n = gzread(file, buffer, sizeof(buffer))) > 0) {
    content.append(buffer, static_cast<std::size_t>(n));
  }
  const bool failed = n < 0;
  gzclose(file);
  if (failed) throw Error(ErrorCode::kIo, "read error in " + path);
  std::istringstream in(std::move(content));
  return load_word_vectors(in);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) tokens.push_back(fold(text.substr(start, i - start)));
  }
  return tokens;
}

EmbeddingVector embed_text(std::string_view text, const WordVectorStore& store) {
  EmbeddingVector out{std::vector<double>(store.dimension(), 0.0)};
  std::size_t hits = 0;
  for (const auto& token : tokenize(text)) {
    auto vec = store.lookup(token);
    if (vec.empty()) continue;
    for (std::size_t k = 0; k < vec.size(); ++k) out.values[k] += vec[k];
    ++hits;
  }
  if (hits > 0) {
    for (double& v : out.values) v /= static_cast<double>(hits);
  }
  return out;
}

double similarity(const EmbeddingVector& u, const EmbeddingVector& v) {
  if (u.dimension() != v.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, std::to_string(u.dimension()) + " vs " +
                                                   std::to_string(v.dimension()));
  }
  double dot = 0.0;
  double nu = 0.0;
  double nv = 0.0;
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    dot += u.values[k] * v.values[k];
    nu += u.values[k] * u.values[k];
    nv += v.values[k] * v.values[k];
  }
  if (nu == 0.0 || nv == 0.0) return 0.0;
  double cosine = dot / (std::sqrt(nu) * std::sqrt(nv));
  if (cosine < 0.0) {
    log::debug("similarity: clamped negative cosine " + std::to_string(cosine) + " to 0");
    return 0.0;
  }
  if (cosine > 1.0) return 1.0;
  return cosine;
}

EmbeddingVector hash_embedder(std::string_view text, std::size_t dimension,
                              std::uint64_t seed) {
  EmbeddingVector out{std::vector<double>(dimension, 0.0)};
  if (dimension == 0) return out;
  const std::uint64_t salt = splitmix64(seed);
  for (const auto& token : tokenize(text)) {
    const std::uint64_t h = splitmix64(fnv1a(token) ^ salt);
    const std::size_t bucket = static_cast<std::size_t>(h % dimension);
    out.values[bucket] += (h >> 63) != 0 ? -1.0 : 1.0;
  }
  return out;
}

WordVectorEmbedder::WordVectorEmbedder(std::shared_ptr<const WordVectorStore> store,
                                       std::string source)
    : store_(std::move(store)), source_(std::move(source)) {}

EmbeddingVector WordVectorEmbedder::embed(std::string_view text) const {
  return embed_text(text, *store_);
}

std::string WordVectorEmbedder::describe() const {
  return "word_vectors:" + source_ + ":d=" + std::to_string(store_->dimension());
}

HashEmbedder::HashEmbedder(std::size_t dimension, std::uint64_t seed)
    : dimension_(dimension), seed_(seed) {
  if (dimension_ == 0) throw Error(ErrorCode::kConfigInvalid, "hash dimension must be > 0");
}

EmbeddingVector HashEmbedder::embed(std::string_view text) const {
  return hash_embedder(text, dimension_, seed_);
}

std::string HashEmbedder::describe() const {
  return "hash:d=" + std::to_string(dimension_) + ":seed=" + std::to_string(seed_);
}

}  // namespace cowrite
