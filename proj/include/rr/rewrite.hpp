#pragma once

#include <vector>

#include "rr/gateway.hpp"
#include "rr/rng.hpp"
#include "rr/types.hpp"

namespace rr {

/// A chosen span: starting index, number of words removed, number of masks
/// written. mask_count - removed is -1, 0 or +1 (shrink, replace, expand).
struct SpanChoice {
  std::size_t start;
  std::size_t removed;
  std::size_t mask_count;
};

/// Picks a span uniformly: start over [0, len - m], mask count over the
/// feasible subset of {m-1, m, m+1} (a count of 0 is never feasible). When
/// the sentence is shorter than m the span shrinks to the whole sentence.
/// Throws PreconditionError when no feasible span exists.
SpanChoice select_span(const Sentence& sentence, int m, Rng& rng);

/// Replaces [start, start + m) with t mask placeholders, recording the
/// removed words. Tokens outside the span are preserved in order.
MaskedSentence apply_mask(const Sentence& sentence, std::size_t start, std::size_t m,
                          std::size_t t);

/// Embedding-guided word weighting over the LM vocabulary:
///   weight(z) = exp[w_enforce * (cos(R(x) - R(u~), E(z)) - 1)]
/// where R sums word embeddings over non-mask tokens. The same distribution
/// applies to every mask of the span. Special vocabulary tokens get zero
/// mass; a zero difference vector yields the uniform distribution; candidate
/// tokens without an embedding are scored as if orthogonal (cos = 0).
Distribution enforcing_distribution(const MaskedSentence& masked, const Sentence& original,
                                    const EmbeddingTable& word_embeddings,
                                    const AlignedEmbeddings& candidates, double w_enforce);

/// Per-mask elementwise product of the LM distribution with the enforcing
/// distribution, renormalized. A mask whose product has no mass falls back to
/// its LM distribution alone.
std::vector<Distribution> proposal_distribution(const std::vector<Distribution>& lm_dists,
                                                const Distribution& enforce);

/// Fills each mask with an independent draw from its own proposal; non-mask
/// tokens are unchanged.
Sentence sample_candidate(const MaskedSentence& masked,
                          const std::vector<Distribution>& proposals, Rng& rng);

/// Inverse-CDF draw from a probability vector.
std::size_t sample_index(const Vector& probs, Rng& rng);

}  // namespace rr
