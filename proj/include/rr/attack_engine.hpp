#pragma once

#include <optional>

#include "rr/critique.hpp"
#include "rr/gateway.hpp"
#include "rr/rewrite.hpp"
#include "rr/rng.hpp"
#include "rr/types.hpp"

namespace rr {

/// One batch member: its sentence plus the cached measurements that belong
/// to it. misclassified always mirrors last_output against the label.
struct CandidateState {
  Sentence sentence;
  CritiqueBreakdown critique;
  bool misclassified;
  ClassifierOutput last_output;

  static CandidateState evaluate(Sentence sentence, const OriginalStats& original, int label,
                                 GatewayCache& gateway, const CritiqueWeights& weights);
};

/// Instrumentation hooks; every callback is optional. Iterations are 1-based.
class AttackObserver {
 public:
  virtual ~AttackObserver() = default;
  virtual void on_iteration(int /*iteration*/, int /*misclassified*/, bool /*rollback*/) {}
  virtual void on_best_update(int /*iteration*/, double /*critique_total*/) {}
};

/// One rewrite step on one batch member: select a span, mask it, build the
/// per-mask proposals, sample a candidate, and accept or reject it by the
/// configured decision rule. Returns the unchanged state on rejection.
CandidateState rewrite_step(const CandidateState& state, const Sentence& original,
                            const OriginalStats& stats, int label, const AttackConfig& config,
                            GatewayCache& gateway, Rng& rng);

/// rewrite_step with the span fixed by the caller.
CandidateState rewrite_step_at(const CandidateState& state, const SpanChoice& span,
                               const Sentence& original, const OriginalStats& stats, int label,
                               const AttackConfig& config, GatewayCache& gateway, Rng& rng);

/// Full attack on one correctly-classified example: a batch of copies is
/// rewritten for up to max_iterations, rolled back on the configured
/// schedule, stopped early once the misclassified fraction reaches the
/// threshold, and the misclassified copy with the best critique score seen
/// anywhere in the run is returned.
///
/// Throws PreconditionError when the victim already misclassifies the
/// example; propagates gateway errors.
AttackResult attack(const LabeledExample& example, const AttackConfig& config,
                    const ModelGateway& gateway, Rng& rng, AttackObserver* observer = nullptr);

}  // namespace rr
