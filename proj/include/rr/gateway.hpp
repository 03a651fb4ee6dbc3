#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rr/types.hpp"

namespace rr {

/// Log-probability vector over classes; exp must sum to 1 within 1e-6.
class ClassifierOutput {
 public:
  explicit ClassifierOutput(Vector log_probs);

  const Vector& log_probs() const noexcept { return log_probs_; }
  int num_classes() const noexcept { return static_cast<int>(log_probs_.size()); }

  /// Argmax class; first index wins ties.
  int predicted() const;

  friend bool operator==(const ClassifierOutput& a, const ClassifierOutput& b) {
    return a.log_probs_ == b.log_probs_;
  }

 private:
  Vector log_probs_;
};

/// Dense word-embedding table: one row per vocabulary token.
class EmbeddingTable {
 public:
  EmbeddingTable(std::vector<std::string> vocab, Matrix vectors);

  int dim() const noexcept { return static_cast<int>(vectors_.cols()); }
  std::size_t size() const noexcept { return vocab_.size(); }
  const std::vector<std::string>& vocab() const noexcept { return vocab_; }
  const Matrix& vectors() const noexcept { return vectors_; }

  std::optional<std::size_t> index_of(const std::string& token) const;

  /// Stored vector for in-vocabulary tokens; absent for OOV. Case-sensitive.
  std::optional<Vector> vector_for(const std::string& token) const;

 private:
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::size_t> index_;
  Matrix vectors_;
};

/// Embedding rows re-aligned to another vocabulary, with presence flags for
/// tokens the table does not cover. Row norms are precomputed.
struct AlignedEmbeddings {
  VocabPtr vocab;
  Matrix vectors;
  Vector row_norms;
  std::vector<char> present;

  static AlignedEmbeddings align(VocabPtr vocab, const EmbeddingTable& table);
};

// ---------------------------------------------------------------------------
// The five model interfaces consumed by the attack. All are pure with respect
// to their inputs within a session; batch entry points exist so adapters can
// evaluate a whole batch in one backend call. Backends that cannot be queried
// throw BackendUnavailableError.
// ---------------------------------------------------------------------------

class MaskedLanguageModel {
 public:
  virtual ~MaskedLanguageModel() = default;

  virtual VocabPtr vocab() const = 0;

  /// One Distribution per mask position, over vocab().
  virtual std::vector<Distribution> word_distributions(const MaskedSentence& masked) const = 0;

  virtual std::vector<std::vector<Distribution>> word_distributions_batch(
      std::span<const MaskedSentence> batch) const;
};

class PerplexityScorer {
 public:
  virtual ~PerplexityScorer() = default;

  /// exp of mean negative log-likelihood, scored left to right.
  virtual double perplexity(const Sentence& sentence) const = 0;

  virtual std::vector<double> perplexity_batch(std::span<const Sentence> batch) const;
};

class SentenceEncoder {
 public:
  virtual ~SentenceEncoder() = default;

  virtual int dim() const = 0;
  virtual Vector encode(const Sentence& sentence) const = 0;
  virtual std::vector<Vector> encode_batch(std::span<const Sentence> batch) const;
};

class VictimClassifier {
 public:
  virtual ~VictimClassifier() = default;

  virtual int num_classes() const = 0;
  virtual ClassifierOutput classify(const Sentence& sentence) const = 0;
  virtual std::vector<ClassifierOutput> classify_batch(std::span<const Sentence> batch) const;
};

/// Bundles the five model interfaces behind one facade, counts classifier
/// queries, and owns the candidate-embedding view aligned to the LM
/// vocabulary. Safe for concurrent read-only use; the query counter is atomic.
class ModelGateway {
 public:
  /// lm_embeddings covers the LM vocabulary for enforcing-distribution
  /// scoring (typically an adapted table). Defaults to word_embeddings.
  ModelGateway(std::shared_ptr<const MaskedLanguageModel> lm,
               std::shared_ptr<const PerplexityScorer> scorer,
               std::shared_ptr<const SentenceEncoder> encoder,
               std::shared_ptr<const EmbeddingTable> word_embeddings,
               std::shared_ptr<const VictimClassifier> victim,
               std::shared_ptr<const EmbeddingTable> lm_embeddings = nullptr);

  std::vector<Distribution> lm_word_distributions(const MaskedSentence& masked) const;
  std::vector<std::vector<Distribution>> lm_word_distributions_batch(
      std::span<const MaskedSentence> batch) const;

  double perplexity(const Sentence& sentence) const;
  Vector encode(const Sentence& sentence) const;

  ClassifierOutput classify(const Sentence& sentence) const;
  std::vector<ClassifierOutput> classify_batch(std::span<const Sentence> batch) const;

  std::optional<Vector> word_embedding(const std::string& token) const;

  VocabPtr lm_vocab() const { return lm_->vocab(); }
  const EmbeddingTable& word_embeddings() const { return *word_embeddings_; }
  const AlignedEmbeddings& candidate_embeddings() const { return candidate_embeddings_; }
  int num_classes() const { return victim_->num_classes(); }

  std::int64_t classifier_queries() const { return queries_.load(); }
  void reset_classifier_queries() { queries_.store(0); }

 private:
  std::shared_ptr<const MaskedLanguageModel> lm_;
  std::shared_ptr<const PerplexityScorer> scorer_;
  std::shared_ptr<const SentenceEncoder> encoder_;
  std::shared_ptr<const EmbeddingTable> word_embeddings_;
  std::shared_ptr<const VictimClassifier> victim_;
  AlignedEmbeddings candidate_embeddings_;
  mutable std::atomic<std::int64_t> queries_{0};
};

struct TokenSeqHash {
  std::size_t operator()(const std::vector<std::string>& tokens) const;
};

/// Per-attack memoization of the pure gateway metrics, keyed by token
/// sequence. Counts the classify calls that actually reach the gateway, which
/// is the query count reported in AttackResult.
class GatewayCache {
 public:
  explicit GatewayCache(const ModelGateway& gateway) : gateway_(gateway) {}

  double perplexity(const Sentence& sentence);
  const Vector& encode(const Sentence& sentence);
  const ClassifierOutput& classify(const Sentence& sentence);

  const ModelGateway& gateway() const { return gateway_; }
  std::int64_t classifier_queries() const { return queries_; }

 private:
  const ModelGateway& gateway_;
  std::unordered_map<std::vector<std::string>, double, TokenSeqHash> ppl_;
  std::unordered_map<std::vector<std::string>, Vector, TokenSeqHash> enc_;
  std::unordered_map<std::vector<std::string>, ClassifierOutput, TokenSeqHash> clf_;
  std::int64_t queries_ = 0;
};

}  // namespace rr
