#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace amrex {

// Non-empty vector of finite reals. Throws ValueError otherwise.
class EmbeddingVector {
 public:
  explicit EmbeddingVector(std::vector<double> values);

  std::size_t dim() const { return values_.size(); }
  std::span<const double> values() const { return values_; }

  bool operator==(const EmbeddingVector&) const = default;

 private:
  std::vector<double> values_;
};

// dot(a, b) / (|a| |b|). Throws ValueError on dimension mismatch or a zero vector.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

// One source of embeddings. `find` returns nullopt when the source has no
// vector for the text; transport problems throw TransportError.
class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  virtual std::optional<EmbeddingVector> find(const std::string& text) = 0;
  // Batch lookup; the default calls `find` per text.
  virtual std::vector<std::optional<EmbeddingVector>> find_all(std::span<const std::string> texts);
  virtual std::string describe() const = 0;
};

// Line-delimited `{"text": ..., "vector": [...]}` records, keyed by exact text.
class PrecomputedEmbeddings : public EmbeddingBackend {
 public:
  static std::unique_ptr<PrecomputedEmbeddings> load(const std::string& path);
  static std::unique_ptr<PrecomputedEmbeddings> parse(std::string_view jsonl,
                                                      std::string origin = "<memory>");

  std::optional<EmbeddingVector> find(const std::string& text) override;
  std::string describe() const override { return "file:" + origin_; }
  std::size_t size() const { return vectors_.size(); }

 private:
  std::string origin_;
  std::unordered_map<std::string, EmbeddingVector> vectors_;
};

// `POST /embed {"texts": [...]}` -> `{"vectors": [[...], ...]}`.
class EmbeddingServiceClient : public EmbeddingBackend {
 public:
  explicit EmbeddingServiceClient(std::string base_url, double timeout_seconds = 30.0);

  std::optional<EmbeddingVector> find(const std::string& text) override;
  std::vector<std::optional<EmbeddingVector>> find_all(std::span<const std::string> texts) override;
  std::string describe() const override { return "service:" + base_url_; }

 private:
  std::string base_url_;
  double timeout_seconds_;
};

// Model-free stand-in: character trigram counts of the padded text hashed
// into `dim` buckets. Never misses and never yields a zero vector.
class HashingEmbedder : public EmbeddingBackend {
 public:
  static constexpr std::size_t kDefaultDim = 256;
  explicit HashingEmbedder(std::size_t dim = kDefaultDim);

  std::optional<EmbeddingVector> find(const std::string& text) override;
  std::string describe() const override { return "hash:" + std::to_string(dim_); }

 private:
  std::size_t dim_;
};

// Ordered chain of backends with a per-run cache keyed by exact text.
// Every vector handed out has the same dimension; the first vector fixes it.
// Safe for concurrent use.
class Embedder {
 public:
  explicit Embedder(std::vector<std::unique_ptr<EmbeddingBackend>> chain);

  // Spec grammar: comma-separated `hash[:dim]`, `file:<path>`, `service:<url>`.
  static Embedder from_spec(std::string_view spec);

  // Throws EmbeddingMiss if no backend knows the text, ValueError for empty text.
  EmbeddingVector embed(const std::string& text);
  // Resolves all uncached texts up front, batching where a backend supports it.
  void prefetch(std::span<const std::string> texts);
  double similarity(const std::string& a, const std::string& b);

  std::string describe() const;

 private:
  EmbeddingVector admit(const std::string& text, EmbeddingVector vector);

  std::vector<std::unique_ptr<EmbeddingBackend>> chain_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, EmbeddingVector> cache_;
  std::optional<std::size_t> dim_;
};

}  // namespace amrex
