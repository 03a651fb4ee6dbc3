#include "rr/mock_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "rr/tokenize.hpp"

namespace rr {

MockBigramLm::MockBigramLm(const std::vector<std::vector<std::string>>& corpus, double smoothing_k)
    : k_(smoothing_k) {
  if (k_ < 0.0) throw std::invalid_argument("MockBigramLm: smoothing must be >= 0");
  std::set<std::string> words;
  for (const auto& line : corpus) {
    for (const auto& w : line) {
      if (w == kMaskToken) {
        throw std::invalid_argument("MockBigramLm: corpus contains the mask placeholder");
      }
      words.insert(w);
    }
  }
  if (words.empty()) throw std::invalid_argument("MockBigramLm: empty corpus");
  vocab_ = std::make_shared<Vocabulary>(std::vector<std::string>(words.begin(), words.end()));

  const std::size_t v = vocab_->size();
  // Context rows: 0 = sentence start, token i = i + 1, v + 1 = OOV context
  // (permanently empty, so it falls back to the smoothed uniform law).
  context_totals_.assign(v + 2, 0.0);
  unigram_counts_.assign(v, 0.0);
  for (const auto& line : corpus) {
    std::size_t ctx = kBosContext;
    for (const auto& w : line) {
      const std::size_t idx = *vocab_->index_of(w);
      pair_counts_[static_cast<std::uint64_t>(ctx) * v + idx] += 1.0;
      context_totals_[ctx] += 1.0;
      unigram_counts_[idx] += 1.0;
      unigram_total_ += 1.0;
      ctx = idx + 1;
    }
  }
}

std::shared_ptr<MockBigramLm> MockBigramLm::from_lines(const std::vector<std::string>& lines,
                                                       double smoothing_k) {
  std::vector<std::vector<std::string>> corpus;
  corpus.reserve(lines.size());
  for (const auto& line : lines) {
    auto tokens = word_tokenize(line);
    if (!tokens.empty()) corpus.push_back(std::move(tokens));
  }
  return std::make_shared<MockBigramLm>(corpus, smoothing_k);
}

double MockBigramLm::context_total(std::size_t ctx) const { return context_totals_[ctx]; }

double MockBigramLm::pair_count(std::size_t ctx, std::size_t token) const {
  auto it = pair_counts_.find(static_cast<std::uint64_t>(ctx) * vocab_->size() + token);
  return it == pair_counts_.end() ? 0.0 : it->second;
}

double MockBigramLm::prob(std::size_t ctx, std::size_t token) const {
  const double v = static_cast<double>(vocab_->size());
  const double denom = context_total(ctx) + k_ * v;
  if (denom <= 0.0) return 1.0 / v;  // k = 0 and unseen context
  return (pair_count(ctx, token) + k_) / denom;
}

double MockBigramLm::oov_prob(std::size_t ctx) const {
  const double v = static_cast<double>(vocab_->size());
  const double denom = context_total(ctx) + k_ * v;
  if (denom <= 0.0) return 0.0;
  return k_ / denom;
}

std::size_t MockBigramLm::context_of(const std::string& token) const {
  auto idx = vocab_->index_of(token);
  return idx ? *idx + 1 : vocab_->size() + 1;
}

Distribution MockBigramLm::bigram_distribution(std::size_t ctx) const {
  const auto v = static_cast<Eigen::Index>(vocab_->size());
  Vector weights(v);
  for (Eigen::Index i = 0; i < v; ++i) {
    weights[i] = prob(ctx, static_cast<std::size_t>(i));
  }
  return Distribution::normalized(vocab_, std::move(weights));
}

Distribution MockBigramLm::unigram_distribution() const {
  const auto v = static_cast<Eigen::Index>(vocab_->size());
  Vector weights(v);
  for (Eigen::Index i = 0; i < v; ++i) {
    weights[i] = unigram_counts_[static_cast<std::size_t>(i)] + k_;
  }
  if (weights.sum() <= 0.0) weights.setOnes();
  return Distribution::normalized(vocab_, std::move(weights));
}

std::vector<Distribution> MockBigramLm::word_distributions(const MaskedSentence& masked) const {
  std::vector<Distribution> out;
  out.reserve(masked.mask_count());
  for (std::size_t j = 0; j < masked.mask_count(); ++j) {
    if (j == 0) {
      const std::size_t pos = masked.span_start();
      const std::size_t ctx =
          pos == 0 ? kBosContext : context_of(masked.tokens()[pos - 1]);
      out.push_back(bigram_distribution(ctx));
    } else {
      out.push_back(unigram_distribution());
    }
  }
  return out;
}

double MockBigramLm::perplexity(const Sentence& sentence) const {
  double log_sum = 0.0;
  std::size_t ctx = kBosContext;
  for (const auto& w : sentence.tokens()) {
    auto idx = vocab_->index_of(w);
    const double p = idx ? prob(ctx, *idx) : oov_prob(ctx);
    if (p <= 0.0) return std::numeric_limits<double>::infinity();
    log_sum += std::log(p);
    ctx = idx ? *idx + 1 : vocab_->size() + 1;
  }
  return std::exp(-log_sum / static_cast<double>(sentence.size()));
}

BagOfEmbeddingsEncoder::BagOfEmbeddingsEncoder(std::shared_ptr<const EmbeddingTable> embeddings)
    : embeddings_(std::move(embeddings)) {
  if (!embeddings_) throw std::invalid_argument("BagOfEmbeddingsEncoder: null embedding table");
}

Vector BagOfEmbeddingsEncoder::encode(const Sentence& sentence) const {
  Vector sum = Vector::Zero(embeddings_->dim());
  for (const auto& token : sentence.tokens()) {
    auto idx = embeddings_->index_of(token);
    if (idx) sum += embeddings_->vectors().row(static_cast<Eigen::Index>(*idx)).transpose();
  }
  const double norm = sum.norm();
  if (norm > 0.0) sum /= norm;
  return sum;
}

BagOfWordsLogisticClassifier::BagOfWordsLogisticClassifier(
    int num_classes, std::unordered_map<std::string, Vector> coefficients, Vector bias)
    : num_classes_(num_classes), coefficients_(std::move(coefficients)), bias_(std::move(bias)) {
  if (num_classes_ < 2) {
    throw std::invalid_argument("BagOfWordsLogisticClassifier: need at least 2 classes");
  }
  if (bias_.size() != num_classes_) {
    throw std::invalid_argument("BagOfWordsLogisticClassifier: bias size must match classes");
  }
  for (const auto& [token, coef] : coefficients_) {
    if (coef.size() != num_classes_) {
      throw std::invalid_argument("BagOfWordsLogisticClassifier: coefficient size mismatch for '" +
                                  token + "'");
    }
  }
}

ClassifierOutput BagOfWordsLogisticClassifier::classify(const Sentence& sentence) const {
  Vector logits = bias_;
  for (const auto& token : sentence.tokens()) {
    auto it = coefficients_.find(token);
    if (it != coefficients_.end()) logits += it->second;
  }
  return ClassifierOutput(log_softmax(logits));
}

Vector log_softmax(const Vector& logits) {
  const double max = logits.maxCoeff();
  const double lse = std::log((logits.array() - max).exp().sum()) + max;
  return logits.array() - lse;
}

}  // namespace rr
