#include "rr/attack_engine.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "rr/edit_script.hpp"
#include "rr/rollback.hpp"

namespace rr {

namespace {

/// Tracks the best-scoring misclassified sentence seen anywhere in the run.
/// The recorded score never decreases; ties keep the earlier record.
class BestTracker {
 public:
  void record(const Sentence& sentence, const CritiqueBreakdown& critique, int iteration,
              GatewayCache& gateway, const OriginalStats& stats, AttackObserver* observer) {
    if (best_ && critique.total <= best_total_) return;
    best_total_ = critique.total;
    best_ = sentence;
    similarity_ = cosine(gateway.encode(sentence), stats.encoding);
    ppl_ = gateway.perplexity(sentence);
    if (observer) observer->on_best_update(iteration, best_total_);
  }

  bool has() const { return best_.has_value(); }
  const Sentence& sentence() const { return *best_; }
  double total() const { return best_total_; }
  double similarity() const { return similarity_; }
  double perplexity() const { return ppl_; }

 private:
  std::optional<Sentence> best_;
  double best_total_ = -std::numeric_limits<double>::infinity();
  double similarity_ = 0.0;
  double ppl_ = 0.0;
};

}  // namespace

CandidateState CandidateState::evaluate(Sentence sentence, const OriginalStats& original,
                                        int label, GatewayCache& gateway,
                                        const CritiqueWeights& weights) {
  CritiqueBreakdown critique = critique_score(sentence, original, label, gateway, weights);
  ClassifierOutput output = gateway.classify(sentence);
  const bool misclassified = output.predicted() != label;
  return CandidateState{std::move(sentence), critique, misclassified, std::move(output)};
}

CandidateState rewrite_step_at(const CandidateState& state, const SpanChoice& span,
                               const Sentence& original, const OriginalStats& stats, int label,
                               const AttackConfig& config, GatewayCache& gateway, Rng& rng) {
  const MaskedSentence masked =
      apply_mask(state.sentence, span.start, span.removed, span.mask_count);

  const ModelGateway& models = gateway.gateway();
  const std::vector<Distribution> lm_dists = models.lm_word_distributions(masked);
  const Distribution enforce =
      enforcing_distribution(masked, original, models.word_embeddings(),
                             models.candidate_embeddings(), config.weights.w_enforce);
  const std::vector<Distribution> proposals = proposal_distribution(lm_dists, enforce);

  Sentence candidate = sample_candidate(masked, proposals, rng);
  CandidateState next =
      CandidateState::evaluate(std::move(candidate), stats, label, gateway, config.weights);

  const bool accept = config.decision_mode == DecisionMode::kGreedy
                          ? decide_greedy(next.critique.total, state.critique.total)
                          : decide(next.critique.total, state.critique.total, rng);
  return accept ? next : state;
}

CandidateState rewrite_step(const CandidateState& state, const Sentence& original,
                            const OriginalStats& stats, int label, const AttackConfig& config,
                            GatewayCache& gateway, Rng& rng) {
  const SpanChoice span = select_span(state.sentence, config.span_m, rng);
  return rewrite_step_at(state, span, original, stats, label, config, gateway, rng);
}

AttackResult attack(const LabeledExample& example, const AttackConfig& config,
                    const ModelGateway& gateway, Rng& rng, AttackObserver* observer) {
  config.validate();
  GatewayCache cache(gateway);

  if (cache.classify(example.sentence).predicted() != example.label) {
    throw PreconditionError("attack: example is not correctly classified by the victim");
  }
  const OriginalStats stats{cache.perplexity(example.sentence), cache.encode(example.sentence)};

  const Sentence& x = example.sentence;
  const int label = example.label;

  std::vector<CandidateState> batch;
  std::vector<Rng> streams;
  batch.reserve(static_cast<std::size_t>(config.batch_size));
  streams.reserve(static_cast<std::size_t>(config.batch_size));
  for (int i = 0; i < config.batch_size; ++i) {
    batch.push_back(CandidateState::evaluate(x, stats, label, cache, config.weights));
    streams.push_back(rng.substream(static_cast<std::uint64_t>(i)));
  }

  BestTracker best;

  auto run_rollback = [&](CandidateState& state, int iteration) {
    Sentence rolled = rollback_pass(state.sentence, x, label, cache);
    if (rolled != state.sentence) {
      state = CandidateState::evaluate(std::move(rolled), stats, label, cache, config.weights);
    }
    best.record(state.sentence, state.critique, iteration, cache, stats, observer);
  };

  int iterations = 0;
  for (int iteration = 1; iteration <= config.max_iterations; ++iteration) {
    iterations = iteration;

    for (int i = 0; i < config.batch_size; ++i) {
      auto& state = batch[static_cast<std::size_t>(i)];
      state = rewrite_step(state, x, stats, label, config, cache, streams[static_cast<std::size_t>(i)]);
      if (state.misclassified) {
        best.record(state.sentence, state.critique, iteration, cache, stats, observer);
      }
    }

    bool rollback_applied = false;
    if (config.rollback_mode == RollbackMode::kPeriodic &&
        iteration % config.rollback_period == 0) {
      for (auto& state : batch) {
        if (!state.misclassified) continue;
        run_rollback(state, iteration);
        rollback_applied = true;
      }
    }

    int misclassified = 0;
    for (const auto& state : batch) {
      if (state.misclassified) ++misclassified;
    }
    if (observer) observer->on_iteration(iteration, misclassified, rollback_applied);
    const double fraction =
        static_cast<double>(misclassified) / static_cast<double>(config.batch_size);
    if (fraction >= config.early_stop_fraction) break;
  }

  if (config.rollback_mode == RollbackMode::kSingle) {
    for (auto& state : batch) {
      if (state.misclassified) run_rollback(state, iterations);
    }
  }

  const bool success = best.has();
  std::optional<Sentence> adversarial;
  double similarity = 0.0;
  double log_ppl_adv = 0.0;
  double log_ppl_ratio = 0.0;
  double critique_total = 0.0;
  int edits = 0;
  const double log_ppl_orig = std::log(stats.ppl);
  if (success) {
    adversarial = best.sentence();
    similarity = best.similarity();
    log_ppl_adv = std::log(best.perplexity());
    log_ppl_ratio = log_ppl_adv - log_ppl_orig;
    critique_total = best.total();
    edits = static_cast<int>(edit_script(best.sentence(), x).size());
  }

  return AttackResult{success,
                      std::move(adversarial),
                      example,
                      similarity,
                      log_ppl_orig,
                      log_ppl_adv,
                      log_ppl_ratio,
                      critique_total,
                      iterations,
                      cache.classifier_queries(),
                      edits};
}

}  // namespace rr
