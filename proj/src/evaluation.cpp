#include "rr/evaluation.hpp"

#include <algorithm>
#include <cmath>

namespace rr {

namespace {

bool counts_at(const AttackResult& r, double sim_threshold) {
  return r.success && r.similarity >= sim_threshold;
}

void check_ablation_pair(const AttackConfig& a, const AttackConfig& b) {
  const bool same = a.batch_size == b.batch_size && a.max_iterations == b.max_iterations &&
                    a.rollback_period == b.rollback_period &&
                    a.early_stop_fraction == b.early_stop_fraction && a.seed == b.seed &&
                    a.weights.w_ppl == b.weights.w_ppl && a.weights.w_sim == b.weights.w_sim &&
                    a.weights.phi_sim == b.weights.phi_sim &&
                    a.weights.w_clf == b.weights.w_clf &&
                    a.weights.w_enforce == b.weights.w_enforce;
  if (!same) {
    throw std::invalid_argument(
        "ablation_run: configs may differ only in decision mode, rollback mode, or span size");
  }
}

}  // namespace

double attack_success_rate(std::span<const AttackResult> results, double sim_threshold) {
  if (results.empty()) {
    throw UndefinedMetricError("attack_success_rate: no results");
  }
  std::size_t hits = 0;
  for (const auto& r : results) {
    if (counts_at(r, sim_threshold)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

std::vector<std::pair<double, double>> asr_curve(std::span<const AttackResult> results,
                                                 std::span<const double> thresholds) {
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw std::invalid_argument("asr_curve: thresholds must be sorted ascending");
  }
  std::vector<std::pair<double, double>> curve;
  curve.reserve(thresholds.size());
  for (const double t : thresholds) {
    curve.emplace_back(t, attack_success_rate(results, t));
  }
  return curve;
}

MetricSummary metric_summary(std::span<const AttackResult> results, double sim_threshold) {
  double log_ppl = 0.0;
  double sim = 0.0;
  double queries = 0.0;
  double edits = 0.0;
  int n = 0;
  for (const auto& r : results) {
    if (!counts_at(r, sim_threshold)) continue;
    log_ppl += r.log_ppl_adversarial;
    sim += r.similarity;
    queries += static_cast<double>(r.classifier_queries);
    edits += static_cast<double>(r.edit_count);
    ++n;
  }
  if (n == 0) {
    throw UndefinedMetricError("metric_summary: no successful results above the threshold");
  }
  const double d = static_cast<double>(n);
  return MetricSummary{log_ppl / d, sim / d, queries / d, edits / d, n};
}

double mean_original_log_ppl(std::span<const AttackResult> results, bool successful) {
  double sum = 0.0;
  int n = 0;
  for (const auto& r : results) {
    if (r.success != successful) continue;
    sum += r.log_ppl_original;
    ++n;
  }
  if (n == 0) {
    throw UndefinedMetricError("mean_original_log_ppl: empty subset");
  }
  return sum / static_cast<double>(n);
}

AblationCurves ablation_run(std::span<const LabeledExample> dataset,
                            std::span<const AttackConfig> configs, const ModelGateway& gateway,
                            std::span<const double> thresholds) {
  if (configs.empty()) throw std::invalid_argument("ablation_run: no configs");
  for (std::size_t i = 1; i < configs.size(); ++i) {
    check_ablation_pair(configs[0], configs[i]);
  }

  AblationCurves out;
  out.configs.assign(configs.begin(), configs.end());
  for (const auto& config : configs) {
    std::vector<AttackResult> results;
    results.reserve(dataset.size());
    Rng master(config.seed);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      Rng example_rng = master.substream(i);
      try {
        results.push_back(attack(dataset[i], config, gateway, example_rng));
      } catch (const PreconditionError&) {
        // Originally misclassified; identical skip under every config.
      }
    }
    out.curves.push_back(asr_curve(results, thresholds));
  }
  return out;
}

}  // namespace rr
