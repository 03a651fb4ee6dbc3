#pragma once

#include <span>
#include <utility>
#include <vector>

#include "rr/attack_engine.hpp"
#include "rr/types.hpp"

namespace rr {

/// Fraction of results that succeeded with similarity >= sim_threshold.
/// Every result's original must have been correctly classified (the engine
/// enforces this); an empty input has no defined rate.
double attack_success_rate(std::span<const AttackResult> results, double sim_threshold);

/// ASR at each threshold; thresholds must be sorted ascending. The curve is
/// non-increasing.
std::vector<std::pair<double, double>> asr_curve(std::span<const AttackResult> results,
                                                 std::span<const double> thresholds);

struct MetricSummary {
  double mean_log_ppl;      // natural log of the adversarial perplexity
  double mean_similarity;
  double mean_queries;
  double mean_edit_count;
  int count;                // successful results above the similarity threshold
};

/// Averages over successful attacks passing the similarity threshold.
MetricSummary metric_summary(std::span<const AttackResult> results, double sim_threshold);

/// Mean original-sentence log perplexity over the successful or failed
/// subset; supports comparing which inputs a method succeeds on.
double mean_original_log_ppl(std::span<const AttackResult> results, bool successful);

struct AblationCurves {
  std::vector<AttackConfig> configs;
  std::vector<std::vector<std::pair<double, double>>> curves;
};

/// Runs every config over the dataset with shared per-example seeds and
/// returns one ASR curve per config on the shared threshold grid. The configs
/// may differ only in decision mode, rollback mode, or span size. Originally
/// misclassified examples are skipped consistently across configs.
AblationCurves ablation_run(std::span<const LabeledExample> dataset,
                            std::span<const AttackConfig> configs, const ModelGateway& gateway,
                            std::span<const double> thresholds);

}  // namespace rr
