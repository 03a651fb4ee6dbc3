#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

#include "rr/gateway.hpp"
#include "rr/types.hpp"

namespace rr {

/// Maps one word to its subword tokenization (never empty).
using SubwordTokenizer = std::function<std::vector<std::string>(const std::string&)>;

/// A plain-text corpus tokenized by words; a multiset, so repeated words
/// carry their frequency.
class AdaptationCorpus {
 public:
  explicit AdaptationCorpus(std::vector<std::string> words);

  const std::vector<std::string>& words() const noexcept { return words_; }
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::vector<std::string> words_;
};

struct AdaptationOptions {
  int steps = 2000;
  int sample_size = 5000;
  double step_size = 1e-3;
  /// step(t) = step_size / (1 + step_decay * t); 0 keeps the step constant.
  double step_decay = 0.0;
  std::uint64_t seed = 0;
  /// When > 0, on_progress fires every progress_every steps (and once at the
  /// end) with the step index and the in-progress vectors over target_vocab.
  int progress_every = 0;
  std::function<void(int step, const Matrix& vectors)> on_progress;
};

/// Transfers word embeddings onto a subword vocabulary by stochastic
/// subgradient descent on the summed L1 reconstruction error
///   sum_w || E(w) - sum_{x in T(w)} E'(x) ||_1.
///
/// E' starts as a copy of the source vectors on tokens the two vocabularies
/// share and zero elsewhere. Each step samples sample_size corpus words with
/// replacement and applies the summed subgradient, scaled by the current step
/// size; the subgradient of |.| at 0 is 0. Corpus words missing from the
/// source table are skipped.
EmbeddingTable adapt_embeddings(const AdaptationCorpus& corpus, const EmbeddingTable& source,
                                const SubwordTokenizer& subword_tokenize,
                                const Vocabulary& target_vocab,
                                const AdaptationOptions& options = {});

/// Exact value of the L1 objective over the whole corpus (multiplicities
/// included), with the same coverage rules as adapt_embeddings.
double reconstruction_error(const AdaptationCorpus& corpus, const EmbeddingTable& source,
                            const EmbeddingTable& adapted,
                            const SubwordTokenizer& subword_tokenize);

/// The adaptation starting point: source vectors copied onto tokens the two
/// vocabularies share, zero elsewhere.
EmbeddingTable initialize_adapted(const EmbeddingTable& source, const Vocabulary& target_vocab);

/// Greedy longest-match subword splitter over a fixed piece inventory.
/// Continuation pieces carry a prefix ("##" by default); words that cannot be
/// covered tokenize to the single unknown piece.
class WordPieceTokenizer {
 public:
  explicit WordPieceTokenizer(std::vector<std::string> pieces,
                              std::string continuation_prefix = "##",
                              std::string unknown_token = "[UNK]");

  std::vector<std::string> tokenize(const std::string& word) const;

  const std::string& unknown_token() const noexcept { return unknown_; }

 private:
  std::unordered_set<std::string> pieces_;
  std::string prefix_;
  std::string unknown_;
  std::size_t max_match_chars_ = 0;
};

/// Fallback splitter when no piece inventory is available: first character
/// plain, remaining characters as continuation pieces.
std::vector<std::string> character_subwords(const std::string& word,
                                            const std::string& continuation_prefix = "##");

}  // namespace rr
