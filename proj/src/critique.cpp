#include "rr/critique.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rr {

double cosine(const Vector& a, const Vector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 && nb == 0.0) return 1.0;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

CritiqueBreakdown critique_from_measurements(double ppl_u, double ppl_x, double cos_sim,
                                             const ClassifierOutput& output, int label,
                                             const CritiqueWeights& weights) {
  if (!(ppl_x > 0.0)) {
    throw PreconditionError("critique: original perplexity must be positive");
  }
  if (label < 0 || label >= output.num_classes()) {
    throw std::invalid_argument("critique: label out of range");
  }
  if (output.num_classes() < 2) {
    throw std::invalid_argument("critique: classifier must have at least 2 classes");
  }

  const double ppl_term = weights.w_ppl * std::min(1.0 - ppl_u / ppl_x, 0.0);
  const double sim_term = weights.w_sim * std::min(cos_sim - weights.phi_sim, 0.0);

  double best_other = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < output.num_classes(); ++c) {
    if (c == label) continue;
    best_other = std::max(best_other, output.log_probs()[c]);
  }
  const double clf_term = weights.w_clf * std::min(best_other - output.log_probs()[label], 0.0);

  return CritiqueBreakdown::from_terms(ppl_term, sim_term, clf_term);
}

CritiqueBreakdown critique_score(const Sentence& candidate, const OriginalStats& original,
                                 int label, GatewayCache& gateway,
                                 const CritiqueWeights& weights) {
  const double ppl_u = gateway.perplexity(candidate);
  const double cos_sim = cosine(gateway.encode(candidate), original.encoding);
  const ClassifierOutput& output = gateway.classify(candidate);
  return critique_from_measurements(ppl_u, original.ppl, cos_sim, output, label, weights);
}

CritiqueBreakdown critique_score(const Sentence& candidate, const Sentence& original, int label,
                                 GatewayCache& gateway, const CritiqueWeights& weights) {
  const OriginalStats stats{gateway.perplexity(original), gateway.encode(original)};
  return critique_score(candidate, stats, label, gateway, weights);
}

bool decide(double c_new, double c_old, Rng& rng) {
  if (!std::isfinite(c_new) || !std::isfinite(c_old)) {
    throw std::invalid_argument("decide: critique scores must be finite");
  }
  if (c_new >= c_old) return true;
  return rng.uniform() < std::exp(c_new - c_old);
}

bool decide_greedy(double c_new, double c_old) {
  if (!std::isfinite(c_new) || !std::isfinite(c_old)) {
    throw std::invalid_argument("decide_greedy: critique scores must be finite");
  }
  return c_new > c_old;
}

}  // namespace rr
