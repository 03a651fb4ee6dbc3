#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "rr/gateway.hpp"
#include "rr/types.hpp"

namespace rr {

/// Add-k smoothed bigram language model over a word corpus. Serves both the
/// masked-word and perplexity interfaces. Fully deterministic and seedless.
///
/// Masked positions are filled left to right: a mask whose left neighbor is
/// visible is scored by the bigram conditioned on that neighbor (or on the
/// sentence start); a mask whose left neighbor is itself a mask falls back to
/// the unigram distribution, so the per-position distributions differ.
class MockBigramLm : public MaskedLanguageModel, public PerplexityScorer {
 public:
  explicit MockBigramLm(const std::vector<std::vector<std::string>>& corpus,
                        double smoothing_k = 0.1);

  static std::shared_ptr<MockBigramLm> from_lines(const std::vector<std::string>& lines,
                                                  double smoothing_k = 0.1);

  VocabPtr vocab() const override { return vocab_; }

  std::vector<Distribution> word_distributions(const MaskedSentence& masked) const override;

  /// exp[-(1/l) sum_i log p(x_i | x_{i-1})] with the sentence start as the
  /// first context. Unseen events get the smoothed floor; with k = 0 a zero
  /// probability yields an infinite perplexity.
  double perplexity(const Sentence& sentence) const override;

  double smoothing() const noexcept { return k_; }

 private:
  static constexpr std::size_t kBosContext = 0;  // context row 0 = sentence start

  double context_total(std::size_t ctx) const;
  double pair_count(std::size_t ctx, std::size_t token) const;
  double prob(std::size_t ctx, std::size_t token) const;
  // Probability of observing a token unknown to the vocabulary.
  double oov_prob(std::size_t ctx) const;
  std::size_t context_of(const std::string& token) const;

  Distribution bigram_distribution(std::size_t ctx) const;
  Distribution unigram_distribution() const;

  VocabPtr vocab_;
  double k_;
  std::vector<double> context_totals_;                   // rows: BOS, tokens, OOV
  std::unordered_map<std::uint64_t, double> pair_counts_;  // key = ctx * V + token
  std::vector<double> unigram_counts_;
  double unigram_total_ = 0.0;
};

/// Sentence encoder that L2-normalizes the sum of word embeddings over
/// in-vocabulary tokens. OOV tokens contribute nothing; a sentence with no
/// covered tokens encodes to the zero vector.
class BagOfEmbeddingsEncoder : public SentenceEncoder {
 public:
  explicit BagOfEmbeddingsEncoder(std::shared_ptr<const EmbeddingTable> embeddings);

  int dim() const override { return embeddings_->dim(); }
  Vector encode(const Sentence& sentence) const override;

 private:
  std::shared_ptr<const EmbeddingTable> embeddings_;
};

/// Multinomial logistic victim over bag-of-words counts with fixed,
/// caller-authored coefficients. Tokens without a coefficient contribute 0.
class BagOfWordsLogisticClassifier : public VictimClassifier {
 public:
  BagOfWordsLogisticClassifier(int num_classes,
                               std::unordered_map<std::string, Vector> coefficients,
                               Vector bias);

  int num_classes() const override { return num_classes_; }
  ClassifierOutput classify(const Sentence& sentence) const override;

 private:
  int num_classes_;
  std::unordered_map<std::string, Vector> coefficients_;
  Vector bias_;
};

/// log softmax with max subtraction.
Vector log_softmax(const Vector& logits);

}  // namespace rr
