#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cowrite {

struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dimension() const { return values.size(); }
  bool is_zero() const;
  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

// Immutable word -> vector table. Keys are stored lowercased.
class WordVectorStore {
 public:
  WordVectorStore(std::size_t dimension, std::vector<std::string> words,
                  std::vector<float> data);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return index_.size(); }
  // Empty span when the (case-folded) word is not in the vocabulary.
  std::span<const float> lookup(std::string_view word) const;

 private:
  std::size_t dimension_;
  std::vector<float> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Text vector format: optional "count dim" header, then "token f1 ... fd"
// per line. Duplicate words keep their first vector.
WordVectorStore load_word_vectors(std::istream& in);
// Reads plain or gzip-compressed files.
WordVectorStore load_word_vectors_file(const std::string& path);

// Lowercased ASCII alphanumeric runs; bytes >= 0x80 count as word characters
// so UTF-8 words stay whole.
std::vector<std::string> tokenize(std::string_view text);

// Mean of the in-vocabulary token vectors, or the zero vector.
EmbeddingVector embed_text(std::string_view text, const WordVectorStore& store);

// Cosine clamped to [0, 1]; 0 when either vector is zero.
double similarity(const EmbeddingVector& u, const EmbeddingVector& v);

// Signed feature hashing of tokens into `dimension` buckets. Stable across
// platforms for a given seed.
EmbeddingVector hash_embedder(std::string_view text, std::size_t dimension,
                              std::uint64_t seed);

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual EmbeddingVector embed(std::string_view text) const = 0;
  virtual std::size_t dimension() const = 0;
  // Short description echoed into reports.
  virtual std::string describe() const = 0;
};

class WordVectorEmbedder final : public Embedder {
 public:
  WordVectorEmbedder(std::shared_ptr<const WordVectorStore> store, std::string source);

  EmbeddingVector embed(std::string_view text) const override;
  std::size_t dimension() const override { return store_->dimension(); }
  std::string describe() const override;

 private:
  std::shared_ptr<const WordVectorStore> store_;
  std::string source_;
};

class HashEmbedder final : public Embedder {
 public:
  static constexpr std::size_t kDefaultDimension = 1024;
  static constexpr std::uint64_t kDefaultSeed = 17;

  explicit HashEmbedder(std::size_t dimension = kDefaultDimension,
                        std::uint64_t seed = kDefaultSeed);

  EmbeddingVector embed(std::string_view text) const override;
  std::size_t dimension() const override { return dimension_; }
  std::string describe() const override;

 private:
  std::size_t dimension_;
  std::uint64_t seed_;
};

}  // namespace cowrite
