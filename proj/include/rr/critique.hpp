#pragma once

#include "rr/gateway.hpp"
#include "rr/rng.hpp"
#include "rr/types.hpp"

namespace rr {

/// The three clamped penalty terms and their sum. Every term is <= 0; a total
/// of 0 means the candidate is fluent, similar, and misclassified.
struct CritiqueBreakdown {
  double ppl_term;
  double sim_term;
  double clf_term;
  double total;

  static CritiqueBreakdown from_terms(double ppl_term, double sim_term, double clf_term) {
    return CritiqueBreakdown{ppl_term, sim_term, clf_term, ppl_term + sim_term + clf_term};
  }

  friend bool operator==(const CritiqueBreakdown&, const CritiqueBreakdown&) = default;
};

/// Cosine similarity. Two zero vectors are treated as identical (1); a single
/// zero vector as unrelated (0).
double cosine(const Vector& a, const Vector& b);

/// Per-attack constants of the original sentence.
struct OriginalStats {
  double ppl;
  Vector encoding;
};

/// Assembles the critique from already-measured quantities:
///   ppl_term = w_ppl * min(1 - ppl_u / ppl_x, 0)
///   sim_term = w_sim * min(cos_sim - phi_sim, 0)
///   clf_term = w_clf * min(max_{y' != y} lp[y'] - lp[y], 0)
CritiqueBreakdown critique_from_measurements(double ppl_u, double ppl_x, double cos_sim,
                                             const ClassifierOutput& output, int label,
                                             const CritiqueWeights& weights);

/// Measures the candidate through the gateway and assembles the critique.
/// The original's perplexity and encoding are computed once per attack and
/// passed in.
CritiqueBreakdown critique_score(const Sentence& candidate, const OriginalStats& original,
                                 int label, GatewayCache& gateway,
                                 const CritiqueWeights& weights);

/// Convenience overload that measures the original on the fly.
CritiqueBreakdown critique_score(const Sentence& candidate, const Sentence& original, int label,
                                 GatewayCache& gateway, const CritiqueWeights& weights);

/// Stochastic acceptance: accept with probability min(exp(c_new - c_old), 1).
/// A ratio of exactly 1 accepts.
bool decide(double c_new, double c_old, Rng& rng);

/// Greedy acceptance: accept only strict improvements.
bool decide_greedy(double c_new, double c_old);

}  // namespace rr
