#include "rr/vocab_adaptation.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "rr/rng.hpp"

namespace rr {

namespace {

struct WordPlan {
  bool covered = false;               // word present in the source table
  Eigen::Index source_row = -1;
  std::vector<Eigen::Index> pieces;   // rows in the target vocabulary
};

// Resolves tokenizations once per unique corpus word.
std::unordered_map<std::string, WordPlan> plan_words(const AdaptationCorpus& corpus,
                                                     const EmbeddingTable& source,
                                                     const SubwordTokenizer& subword_tokenize,
                                                     const Vocabulary& target_vocab) {
  std::unordered_map<std::string, WordPlan> plans;
  for (const auto& word : corpus.words()) {
    if (plans.count(word)) continue;
    WordPlan plan;
    const auto pieces = subword_tokenize(word);
    if (pieces.empty()) {
      throw std::invalid_argument("adaptation corpus word '" + word +
                                  "' has an empty subword tokenization");
    }
    auto src = source.index_of(word);
    if (src) {
      plan.covered = true;
      plan.source_row = static_cast<Eigen::Index>(*src);
      plan.pieces.reserve(pieces.size());
      for (const auto& piece : pieces) {
        auto idx = target_vocab.index_of(piece);
        if (!idx) {
          throw std::invalid_argument("subword piece '" + piece +
                                      "' is not in the target vocabulary");
        }
        plan.pieces.push_back(static_cast<Eigen::Index>(*idx));
      }
    }
    plans.emplace(word, std::move(plan));
  }
  return plans;
}

Vector sum_rows(const Matrix& vectors, const std::vector<Eigen::Index>& rows) {
  Vector sum = Vector::Zero(vectors.cols());
  for (const auto r : rows) sum += vectors.row(r).transpose();
  return sum;
}

}  // namespace

AdaptationCorpus::AdaptationCorpus(std::vector<std::string> words) : words_(std::move(words)) {
  if (words_.empty()) {
    throw std::invalid_argument("AdaptationCorpus: corpus must be non-empty");
  }
}

EmbeddingTable adapt_embeddings(const AdaptationCorpus& corpus, const EmbeddingTable& source,
                                const SubwordTokenizer& subword_tokenize,
                                const Vocabulary& target_vocab,
                                const AdaptationOptions& options) {
  if (options.steps < 1) throw std::invalid_argument("adapt_embeddings: steps must be >= 1");
  if (options.sample_size < 1) {
    throw std::invalid_argument("adapt_embeddings: sample_size must be >= 1");
  }
  if (!(options.step_size > 0.0)) {
    throw std::invalid_argument("adapt_embeddings: step_size must be positive");
  }

  const auto plans = plan_words(corpus, source, subword_tokenize, target_vocab);

  Matrix adapted = initialize_adapted(source, target_vocab).vectors();

  Rng rng(options.seed);
  std::unordered_map<Eigen::Index, Vector> gradient;
  for (int step = 0; step < options.steps; ++step) {
    gradient.clear();
    for (int draw = 0; draw < options.sample_size; ++draw) {
      const auto& word = corpus.words()[rng.uniform_index(corpus.size())];
      const WordPlan& plan = plans.at(word);
      if (!plan.covered) continue;
      const Vector residual =
          source.vectors().row(plan.source_row).transpose() - sum_rows(adapted, plan.pieces);
      const Vector direction = residual.array().sign();
      for (const auto piece : plan.pieces) {
        auto it = gradient.try_emplace(piece, Vector::Zero(source.dim())).first;
        it->second += direction;
      }
    }
    const double step_size = options.step_size / (1.0 + options.step_decay * step);
    for (const auto& [row, dir] : gradient) {
      adapted.row(row) += step_size * dir.transpose();
    }
    if (options.on_progress && options.progress_every > 0 &&
        ((step + 1) % options.progress_every == 0 || step + 1 == options.steps)) {
      options.on_progress(step + 1, adapted);
    }
  }

  return EmbeddingTable(target_vocab.tokens(), std::move(adapted));
}

double reconstruction_error(const AdaptationCorpus& corpus, const EmbeddingTable& source,
                            const EmbeddingTable& adapted,
                            const SubwordTokenizer& subword_tokenize) {
  if (source.dim() != adapted.dim()) {
    throw std::invalid_argument("reconstruction_error: embedding dimension mismatch");
  }
  // Cache the reconstruction per unique word; multiplicities multiply in.
  std::unordered_map<std::string, double> per_word;
  double total = 0.0;
  for (const auto& word : corpus.words()) {
    auto it = per_word.find(word);
    if (it == per_word.end()) {
      double value = 0.0;
      auto src = source.index_of(word);
      if (src) {
        const auto pieces = subword_tokenize(word);
        if (pieces.empty()) {
          throw std::invalid_argument("adaptation corpus word '" + word +
                                      "' has an empty subword tokenization");
        }
        Vector sum = Vector::Zero(adapted.dim());
        for (const auto& piece : pieces) {
          auto idx = adapted.index_of(piece);
          if (idx) sum += adapted.vectors().row(static_cast<Eigen::Index>(*idx)).transpose();
        }
        value = (source.vectors().row(static_cast<Eigen::Index>(*src)).transpose() - sum)
                    .lpNorm<1>();
      }
      it = per_word.emplace(word, value).first;
    }
    total += it->second;
  }
  return total;
}

EmbeddingTable initialize_adapted(const EmbeddingTable& source, const Vocabulary& target_vocab) {
  const auto rows = static_cast<Eigen::Index>(target_vocab.size());
  Matrix vectors = Matrix::Zero(rows, source.dim());
  for (Eigen::Index i = 0; i < rows; ++i) {
    auto src = source.index_of(target_vocab.token(static_cast<std::size_t>(i)));
    if (src) vectors.row(i) = source.vectors().row(static_cast<Eigen::Index>(*src));
  }
  return EmbeddingTable(target_vocab.tokens(), std::move(vectors));
}

WordPieceTokenizer::WordPieceTokenizer(std::vector<std::string> pieces,
                                       std::string continuation_prefix, std::string unknown_token)
    : prefix_(std::move(continuation_prefix)), unknown_(std::move(unknown_token)) {
  for (auto& piece : pieces) {
    const std::size_t match_chars =
        piece.rfind(prefix_, 0) == 0 ? piece.size() - prefix_.size() : piece.size();
    max_match_chars_ = std::max(max_match_chars_, match_chars);
    pieces_.insert(std::move(piece));
  }
}

std::vector<std::string> WordPieceTokenizer::tokenize(const std::string& word) const {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < word.size()) {
    const std::size_t remaining = word.size() - pos;
    std::size_t len = std::min(max_match_chars_, remaining);
    bool matched = false;
    for (; len >= 1; --len) {
      std::string candidate = word.substr(pos, len);
      if (pos > 0) candidate = prefix_ + candidate;
      if (pieces_.count(candidate)) {
        out.push_back(std::move(candidate));
        pos += len;
        matched = true;
        break;
      }
    }
    if (!matched) return {unknown_};
  }
  if (out.empty()) return {unknown_};
  return out;
}

std::vector<std::string> character_subwords(const std::string& word,
                                            const std::string& continuation_prefix) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    std::string piece = i == 0 ? "" : continuation_prefix;
    piece += word[i];
    out.push_back(std::move(piece));
  }
  if (out.empty()) out.push_back(continuation_prefix);
  return out;
}

}  // namespace rr
