#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rr/gateway.hpp"
#include "rr/types.hpp"

namespace rr::testing {

/// Perplexity scorer with caller-pinned values per sentence text.
class FixedPerplexity : public PerplexityScorer {
 public:
  explicit FixedPerplexity(std::map<std::string, double> values, double fallback = 1.0)
      : values_(std::move(values)), fallback_(fallback) {}

  double perplexity(const Sentence& s) const override {
    auto it = values_.find(s.text());
    return it == values_.end() ? fallback_ : it->second;
  }

 private:
  std::map<std::string, double> values_;
  double fallback_;
};

/// Encoder with caller-pinned vectors per sentence text.
class FixedEncoder : public SentenceEncoder {
 public:
  FixedEncoder(int dim, std::map<std::string, Vector> values, Vector fallback)
      : dim_(dim), values_(std::move(values)), fallback_(std::move(fallback)) {}

  int dim() const override { return dim_; }
  Vector encode(const Sentence& s) const override {
    auto it = values_.find(s.text());
    return it == values_.end() ? fallback_ : it->second;
  }

 private:
  int dim_;
  std::map<std::string, Vector> values_;
  Vector fallback_;
};

/// Victim with caller-pinned log-probability vectors per sentence text.
class FixedClassifier : public VictimClassifier {
 public:
  FixedClassifier(int classes, std::map<std::string, Vector> values, Vector fallback)
      : classes_(classes), values_(std::move(values)), fallback_(std::move(fallback)) {}

  int num_classes() const override { return classes_; }
  ClassifierOutput classify(const Sentence& s) const override {
    auto it = values_.find(s.text());
    return ClassifierOutput(it == values_.end() ? fallback_ : it->second);
  }

 private:
  int classes_;
  std::map<std::string, Vector> values_;
  Vector fallback_;
};

/// Masked LM that returns the same caller-pinned distribution on every mask.
class FixedMaskedLm : public MaskedLanguageModel {
 public:
  explicit FixedMaskedLm(Distribution dist) : dist_(std::move(dist)) {}

  VocabPtr vocab() const override { return dist_.vocab_ptr(); }
  std::vector<Distribution> word_distributions(const MaskedSentence& masked) const override {
    return std::vector<Distribution>(masked.mask_count(), dist_);
  }

 private:
  Distribution dist_;
};

/// Uniform log-probabilities; a convenience for fallback outputs.
inline Vector uniform_log_probs(int classes) {
  return Vector::Constant(classes, -std::log(static_cast<double>(classes)));
}

}  // namespace rr::testing
