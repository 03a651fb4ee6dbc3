#include "rr/types.hpp"

#include <algorithm>
#include <cmath>

namespace rr {

Sentence::Sentence(std::vector<std::string> tokens, std::optional<std::string> raw)
    : tokens_(std::move(tokens)), raw_(std::move(raw)) {
  if (tokens_.empty()) {
    throw std::invalid_argument("Sentence: token list must be non-empty");
  }
  for (const auto& t : tokens_) {
    if (t == kMaskToken) {
      throw std::invalid_argument("Sentence: reserved mask placeholder is not a token");
    }
  }
}

std::string Sentence::text() const {
  std::string out;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens_[i];
  }
  return out;
}

MaskedSentence::MaskedSentence(std::vector<std::string> tokens, std::size_t span_start,
                               std::size_t mask_count, std::vector<std::string> removed_span)
    : tokens_(std::move(tokens)),
      span_start_(span_start),
      mask_count_(mask_count),
      removed_span_(std::move(removed_span)) {
  if (mask_count_ == 0) {
    throw std::invalid_argument("MaskedSentence: mask count must be >= 1");
  }
  if (span_start_ + mask_count_ > tokens_.size()) {
    throw std::invalid_argument("MaskedSentence: mask span out of bounds");
  }
  const std::size_t m = removed_span_.size();
  if (mask_count_ + 1 < m || mask_count_ > m + 1) {
    throw std::invalid_argument("MaskedSentence: mask count must be within one of span length");
  }
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    const bool in_span = i >= span_start_ && i < span_start_ + mask_count_;
    if (in_span != (tokens_[i] == kMaskToken)) {
      throw std::invalid_argument("MaskedSentence: mask placeholders must fill exactly the span");
    }
  }
}

LabeledExample::LabeledExample(Sentence sentence_in, int label_in, std::string id_in)
    : sentence(std::move(sentence_in)), label(label_in), id(std::move(id_in)) {
  if (label < 0) {
    throw std::invalid_argument("LabeledExample: label must be a nonnegative class index");
  }
}

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::vector<std::string> special)
    : tokens_(std::move(tokens)), special_(tokens_.size(), 0) {
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], i).second) {
      throw std::invalid_argument("Vocabulary: duplicate token '" + tokens_[i] + "'");
    }
  }
  for (const auto& s : special) {
    auto it = index_.find(s);
    if (it == index_.end()) {
      throw std::invalid_argument("Vocabulary: special token '" + s + "' not in vocabulary");
    }
    if (!special_[it->second]) {
      special_[it->second] = 1;
      ++special_count_;
    }
  }
}

std::optional<std::size_t> Vocabulary::index_of(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Distribution::Distribution(VocabPtr vocab, Vector probs)
    : vocab_(std::move(vocab)), probs_(std::move(probs)) {
  if (!vocab_) {
    throw std::invalid_argument("Distribution: null vocabulary");
  }
  if (static_cast<std::size_t>(probs_.size()) != vocab_->size()) {
    throw std::invalid_argument("Distribution: probs not aligned to vocabulary");
  }
  if ((probs_.array() < 0.0).any()) {
    throw std::invalid_argument("Distribution: probabilities must be nonnegative");
  }
  const double total = probs_.sum();
  if (std::abs(total - 1.0) > 1e-6) {
    throw std::invalid_argument("Distribution: probabilities must sum to 1 (got " +
                                std::to_string(total) + ")");
  }
}

Distribution Distribution::normalized(VocabPtr vocab, Vector weights) {
  if ((weights.array() < 0.0).any()) {
    throw std::invalid_argument("Distribution::normalized: negative weight");
  }
  const double total = weights.sum();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw std::invalid_argument("Distribution::normalized: weights must have positive finite mass");
  }
  weights /= total;
  return Distribution(std::move(vocab), std::move(weights));
}

double Distribution::prob_of(const std::string& token) const {
  auto idx = vocab_->index_of(token);
  if (!idx) return 0.0;
  return probs_[static_cast<Eigen::Index>(*idx)];
}

void CritiqueWeights::validate() const {
  if (!(w_ppl > 0.0) || !(w_sim > 0.0) || !(w_clf > 0.0) || !(w_enforce > 0.0)) {
    throw std::invalid_argument("CritiqueWeights: all weights must be positive");
  }
  if (!(phi_sim > 0.0) || !(phi_sim < 1.0)) {
    throw std::invalid_argument("CritiqueWeights: phi_sim must lie in (0,1)");
  }
}

void AttackConfig::validate() const {
  if (span_m < 1) throw std::invalid_argument("AttackConfig: span_m must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("AttackConfig: batch_size must be >= 1");
  if (max_iterations < 1) throw std::invalid_argument("AttackConfig: max_iterations must be >= 1");
  if (rollback_period < 1) throw std::invalid_argument("AttackConfig: rollback_period must be >= 1");
  if (!(early_stop_fraction > 0.0) || early_stop_fraction > 1.0) {
    throw std::invalid_argument("AttackConfig: early_stop_fraction must lie in (0,1]");
  }
  weights.validate();
}

const char* to_string(DecisionMode mode) {
  return mode == DecisionMode::kStochastic ? "stochastic" : "greedy";
}

const char* to_string(RollbackMode mode) {
  switch (mode) {
    case RollbackMode::kPeriodic: return "periodic";
    case RollbackMode::kSingle: return "single";
    case RollbackMode::kNone: return "none";
  }
  return "periodic";
}

DecisionMode decision_mode_from_string(const std::string& name) {
  if (name == "stochastic") return DecisionMode::kStochastic;
  if (name == "greedy") return DecisionMode::kGreedy;
  throw std::invalid_argument("unknown decision mode '" + name + "'");
}

RollbackMode rollback_mode_from_string(const std::string& name) {
  if (name == "periodic") return RollbackMode::kPeriodic;
  if (name == "single") return RollbackMode::kSingle;
  if (name == "none") return RollbackMode::kNone;
  throw std::invalid_argument("unknown rollback mode '" + name + "'");
}

}  // namespace rr
