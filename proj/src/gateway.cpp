#include "rr/gateway.hpp"

#include <cmath>

namespace rr {

ClassifierOutput::ClassifierOutput(Vector log_probs) : log_probs_(std::move(log_probs)) {
  if (log_probs_.size() == 0) {
    throw std::invalid_argument("ClassifierOutput: empty log-probability vector");
  }
  const double total = log_probs_.array().exp().sum();
  if (std::abs(total - 1.0) > 1e-6) {
    throw std::invalid_argument("ClassifierOutput: exp(log_probs) must sum to 1 (got " +
                                std::to_string(total) + ")");
  }
}

int ClassifierOutput::predicted() const {
  Eigen::Index best = 0;
  log_probs_.maxCoeff(&best);
  return static_cast<int>(best);
}

EmbeddingTable::EmbeddingTable(std::vector<std::string> vocab, Matrix vectors)
    : vocab_(std::move(vocab)), vectors_(std::move(vectors)) {
  if (static_cast<std::size_t>(vectors_.rows()) != vocab_.size()) {
    throw std::invalid_argument("EmbeddingTable: one vector row per vocab token required");
  }
  if (vectors_.cols() == 0 && !vocab_.empty()) {
    throw std::invalid_argument("EmbeddingTable: zero-dimensional vectors");
  }
  index_.reserve(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (!index_.emplace(vocab_[i], i).second) {
      throw std::invalid_argument("EmbeddingTable: duplicate token '" + vocab_[i] + "'");
    }
  }
}

std::optional<std::size_t> EmbeddingTable::index_of(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Vector> EmbeddingTable::vector_for(const std::string& token) const {
  auto idx = index_of(token);
  if (!idx) return std::nullopt;
  return vectors_.row(static_cast<Eigen::Index>(*idx)).transpose();
}

AlignedEmbeddings AlignedEmbeddings::align(VocabPtr vocab, const EmbeddingTable& table) {
  AlignedEmbeddings out;
  out.vocab = std::move(vocab);
  const auto n = static_cast<Eigen::Index>(out.vocab->size());
  out.vectors = Matrix::Zero(n, table.dim());
  out.row_norms = Vector::Zero(n);
  out.present.assign(static_cast<std::size_t>(n), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    auto idx = table.index_of(out.vocab->token(static_cast<std::size_t>(i)));
    if (!idx) continue;
    out.vectors.row(i) = table.vectors().row(static_cast<Eigen::Index>(*idx));
    out.row_norms[i] = out.vectors.row(i).norm();
    out.present[static_cast<std::size_t>(i)] = 1;
  }
  return out;
}

std::vector<std::vector<Distribution>> MaskedLanguageModel::word_distributions_batch(
    std::span<const MaskedSentence> batch) const {
  std::vector<std::vector<Distribution>> out;
  out.reserve(batch.size());
  for (const auto& masked : batch) out.push_back(word_distributions(masked));
  return out;
}

std::vector<double> PerplexityScorer::perplexity_batch(std::span<const Sentence> batch) const {
  std::vector<double> out;
  out.reserve(batch.size());
  for (const auto& s : batch) out.push_back(perplexity(s));
  return out;
}

std::vector<Vector> SentenceEncoder::encode_batch(std::span<const Sentence> batch) const {
  std::vector<Vector> out;
  out.reserve(batch.size());
  for (const auto& s : batch) out.push_back(encode(s));
  return out;
}

std::vector<ClassifierOutput> VictimClassifier::classify_batch(
    std::span<const Sentence> batch) const {
  std::vector<ClassifierOutput> out;
  out.reserve(batch.size());
  for (const auto& s : batch) out.push_back(classify(s));
  return out;
}

ModelGateway::ModelGateway(std::shared_ptr<const MaskedLanguageModel> lm,
                           std::shared_ptr<const PerplexityScorer> scorer,
                           std::shared_ptr<const SentenceEncoder> encoder,
                           std::shared_ptr<const EmbeddingTable> word_embeddings,
                           std::shared_ptr<const VictimClassifier> victim,
                           std::shared_ptr<const EmbeddingTable> lm_embeddings)
    : lm_(std::move(lm)),
      scorer_(std::move(scorer)),
      encoder_(std::move(encoder)),
      word_embeddings_(std::move(word_embeddings)),
      victim_(std::move(victim)) {
  if (!lm_ || !scorer_ || !encoder_ || !word_embeddings_ || !victim_) {
    throw std::invalid_argument("ModelGateway: all five model interfaces are required");
  }
  const EmbeddingTable& candidates = lm_embeddings ? *lm_embeddings : *word_embeddings_;
  candidate_embeddings_ = AlignedEmbeddings::align(lm_->vocab(), candidates);
}

std::vector<Distribution> ModelGateway::lm_word_distributions(const MaskedSentence& masked) const {
  return lm_->word_distributions(masked);
}

std::vector<std::vector<Distribution>> ModelGateway::lm_word_distributions_batch(
    std::span<const MaskedSentence> batch) const {
  return lm_->word_distributions_batch(batch);
}

double ModelGateway::perplexity(const Sentence& sentence) const {
  return scorer_->perplexity(sentence);
}

Vector ModelGateway::encode(const Sentence& sentence) const { return encoder_->encode(sentence); }

ClassifierOutput ModelGateway::classify(const Sentence& sentence) const {
  queries_.fetch_add(1, std::memory_order_relaxed);
  return victim_->classify(sentence);
}

std::vector<ClassifierOutput> ModelGateway::classify_batch(std::span<const Sentence> batch) const {
  queries_.fetch_add(static_cast<std::int64_t>(batch.size()), std::memory_order_relaxed);
  return victim_->classify_batch(batch);
}

std::optional<Vector> ModelGateway::word_embedding(const std::string& token) const {
  return word_embeddings_->vector_for(token);
}

std::size_t TokenSeqHash::operator()(const std::vector<std::string>& tokens) const {
  // FNV-1a over token bytes with a unit separator between tokens.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char byte) {
    h ^= byte;
    h *= 0x100000001b3ULL;
  };
  for (const auto& t : tokens) {
    for (const char c : t) mix(static_cast<unsigned char>(c));
    mix(0x1f);
  }
  return static_cast<std::size_t>(h);
}

double GatewayCache::perplexity(const Sentence& sentence) {
  auto it = ppl_.find(sentence.tokens());
  if (it != ppl_.end()) return it->second;
  const double value = gateway_.perplexity(sentence);
  ppl_.emplace(sentence.tokens(), value);
  return value;
}

const Vector& GatewayCache::encode(const Sentence& sentence) {
  auto it = enc_.find(sentence.tokens());
  if (it != enc_.end()) return it->second;
  return enc_.emplace(sentence.tokens(), gateway_.encode(sentence)).first->second;
}

const ClassifierOutput& GatewayCache::classify(const Sentence& sentence) {
  auto it = clf_.find(sentence.tokens());
  if (it != clf_.end()) return it->second;
  ++queries_;
  return clf_.emplace(sentence.tokens(), gateway_.classify(sentence)).first->second;
}

}  // namespace rr
