#include "rr/rewrite.hpp"

#include <cmath>

namespace rr {

namespace {

constexpr double kZeroNormEps = 1e-12;

Vector bag_of_embeddings(const std::vector<std::string>& tokens,
                         const EmbeddingTable& embeddings) {
  Vector sum = Vector::Zero(embeddings.dim());
  for (const auto& token : tokens) {
    if (token == kMaskToken) continue;
    auto idx = embeddings.index_of(token);
    if (idx) sum += embeddings.vectors().row(static_cast<Eigen::Index>(*idx)).transpose();
  }
  return sum;
}

Distribution uniform_over_words(const VocabPtr& vocab) {
  const auto n = static_cast<Eigen::Index>(vocab->size());
  Vector weights = Vector::Ones(n);
  if (vocab->has_special()) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (vocab->is_special(static_cast<std::size_t>(i))) weights[i] = 0.0;
    }
  }
  return Distribution::normalized(vocab, std::move(weights));
}

}  // namespace

SpanChoice select_span(const Sentence& sentence, int m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("select_span: m must be >= 1");
  const std::size_t len = sentence.size();
  // A sentence shorter than m shrinks the span to the whole sentence.
  const std::size_t m_eff = std::min<std::size_t>(static_cast<std::size_t>(m), len);
  if (m_eff == 0) throw PreconditionError("select_span: sentence too short for any span");

  const std::size_t start = rng.uniform_index(len - m_eff + 1);

  // t = 0 is infeasible, so m_eff == 1 offers only {1, 2}.
  std::size_t feasible[3];
  std::size_t count = 0;
  for (const std::size_t t : {m_eff - 1, m_eff, m_eff + 1}) {
    if (t >= 1) feasible[count++] = t;
  }
  const std::size_t t = feasible[rng.uniform_index(count)];
  return SpanChoice{start, m_eff, t};
}

MaskedSentence apply_mask(const Sentence& sentence, std::size_t start, std::size_t m,
                          std::size_t t) {
  if (start + m > sentence.size() || m == 0) {
    throw std::invalid_argument("apply_mask: span out of bounds");
  }
  if (t < 1 || t + 1 < m || t > m + 1) {
    throw std::invalid_argument("apply_mask: t must be in {m-1, m, m+1} and >= 1");
  }
  const auto& tokens = sentence.tokens();
  std::vector<std::string> out;
  out.reserve(tokens.size() - m + t);
  out.insert(out.end(), tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(start));
  out.insert(out.end(), t, kMaskToken);
  out.insert(out.end(), tokens.begin() + static_cast<std::ptrdiff_t>(start + m), tokens.end());
  std::vector<std::string> removed(tokens.begin() + static_cast<std::ptrdiff_t>(start),
                                   tokens.begin() + static_cast<std::ptrdiff_t>(start + m));
  return MaskedSentence(std::move(out), start, t, std::move(removed));
}

Distribution enforcing_distribution(const MaskedSentence& masked, const Sentence& original,
                                    const EmbeddingTable& word_embeddings,
                                    const AlignedEmbeddings& candidates, double w_enforce) {
  if (!(w_enforce > 0.0)) {
    throw std::invalid_argument("enforcing_distribution: w_enforce must be positive");
  }
  const Vector difference = bag_of_embeddings(original.tokens(), word_embeddings) -
                            bag_of_embeddings(masked.tokens(), word_embeddings);
  const double d_norm = difference.norm();
  if (d_norm <= kZeroNormEps) {
    // No preference signal; cosine is undefined against a zero vector.
    return uniform_over_words(candidates.vocab);
  }

  const auto n = static_cast<Eigen::Index>(candidates.vocab->size());
  Vector cosines = Vector::Zero(n);
  const Vector dots = candidates.vectors * (difference / d_norm);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (candidates.present[static_cast<std::size_t>(i)] && candidates.row_norms[i] > kZeroNormEps) {
      cosines[i] = dots[i] / candidates.row_norms[i];
    }
  }

  Vector exponents = w_enforce * (cosines.array() - 1.0);
  const double max_exponent = exponents.maxCoeff();
  Vector weights = (exponents.array() - max_exponent).exp();
  if (candidates.vocab->has_special()) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (candidates.vocab->is_special(static_cast<std::size_t>(i))) weights[i] = 0.0;
    }
  }
  return Distribution::normalized(candidates.vocab, std::move(weights));
}

std::vector<Distribution> proposal_distribution(const std::vector<Distribution>& lm_dists,
                                                const Distribution& enforce) {
  std::vector<Distribution> out;
  out.reserve(lm_dists.size());
  for (const auto& lm : lm_dists) {
    if (lm.vocab_ptr() != enforce.vocab_ptr() &&
        lm.vocab().tokens() != enforce.vocab().tokens()) {
      throw std::invalid_argument("proposal_distribution: factor vocabularies differ");
    }
    Vector product = lm.probs().cwiseProduct(enforce.probs());
    if (product.sum() > 0.0) {
      out.push_back(Distribution::normalized(lm.vocab_ptr(), std::move(product)));
    } else {
      // Degenerate product: no token has mass in both factors.
      out.push_back(lm);
    }
  }
  return out;
}

std::size_t sample_index(const Vector& probs, Rng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  Eigen::Index last_nonzero = -1;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_nonzero = i;
    cumulative += probs[i];
    if (u < cumulative) return static_cast<std::size_t>(i);
  }
  if (last_nonzero < 0) throw std::invalid_argument("sample_index: no positive mass");
  return static_cast<std::size_t>(last_nonzero);  // u fell into fp rounding slack
}

Sentence sample_candidate(const MaskedSentence& masked,
                          const std::vector<Distribution>& proposals, Rng& rng) {
  if (proposals.size() != masked.mask_count()) {
    throw std::invalid_argument("sample_candidate: one proposal per mask required");
  }
  std::vector<std::string> tokens = masked.tokens();
  for (std::size_t j = 0; j < masked.mask_count(); ++j) {
    const auto& dist = proposals[j];
    const std::size_t pick = sample_index(dist.probs(), rng);
    tokens[masked.span_start() + j] = dist.vocab().token(pick);
  }
  return Sentence(std::move(tokens));
}

}  // namespace rr
