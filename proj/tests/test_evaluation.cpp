#include <doctest.h>

#include <cmath>

#include "rr/evaluation.hpp"
#include "support/toy_world.hpp"

using namespace rr;

namespace {

AttackResult make_result(bool success, double similarity, double log_ppl_adv,
                         double log_ppl_orig = 1.0, std::int64_t queries = 10, int edits = 2) {
  LabeledExample original(Sentence({"x"}), 0, "id");
  std::optional<Sentence> adv;
  if (success) adv = Sentence({"y"});
  return AttackResult{success,        adv,          original, similarity,
                      log_ppl_orig,   log_ppl_adv,  log_ppl_adv - log_ppl_orig,
                      0.0,            5,            queries,  success ? edits : 0};
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("asr counts successes above the threshold") {
  std::vector<AttackResult> results;
  results.push_back(make_result(true, 0.99, 2.0));
  results.push_back(make_result(true, 0.97, 2.0));
  results.push_back(make_result(true, 0.93, 2.0));
  results.push_back(make_result(false, 0.0, 0.0));

  CHECK(attack_success_rate(results, 0.95) == doctest::Approx(0.5));
  CHECK(attack_success_rate(results, 0.0) == doctest::Approx(0.75));  // raw success fraction

  std::vector<AttackResult> failures{make_result(false, 0.0, 0.0),
                                     make_result(false, 0.0, 0.0)};
  CHECK(attack_success_rate(failures, 0.95) == 0.0);

  CHECK_THROWS_AS(attack_success_rate(std::vector<AttackResult>{}, 0.5), UndefinedMetricError);
}

TEST_CASE("asr curve steps down at the result similarity") {
  std::vector<AttackResult> results{make_result(true, 0.96, 2.0)};
  const std::vector<double> thresholds{0.90, 0.95, 0.96, 0.97};
  const auto curve = asr_curve(results, thresholds);
  REQUIRE(curve.size() == 4);
  CHECK(curve[0].second == 1.0);
  CHECK(curve[1].second == 1.0);
  CHECK(curve[2].second == 1.0);  // threshold met with equality
  CHECK(curve[3].second == 0.0);

  SUBCASE("curve agrees with the scalar rate") {
    CHECK(curve[1].second == attack_success_rate(results, 0.95));
  }
  SUBCASE("thresholds must ascend") {
    const std::vector<double> bad{0.95, 0.90};
    CHECK_THROWS_AS(asr_curve(results, bad), std::invalid_argument);
  }
}

TEST_CASE("asr curves are non-increasing for arbitrary result sets") {
  Rng rng(55);
  std::vector<AttackResult> results;
  for (int i = 0; i < 40; ++i) {
    results.push_back(make_result(rng.uniform() < 0.7, rng.uniform(), rng.uniform() * 4));
  }
  std::vector<double> thresholds;
  for (int i = 0; i <= 20; ++i) thresholds.push_back(i / 20.0);
  const auto curve = asr_curve(results, thresholds);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    CHECK(curve[i].second <= curve[i - 1].second);
  }
}

TEST_CASE("metric summary averages the filtered successes") {
  std::vector<AttackResult> results;
  results.push_back(make_result(true, 0.99, 2.0, 1.0, 10, 2));
  results.push_back(make_result(true, 0.97, 4.0, 1.0, 30, 4));
  results.push_back(make_result(true, 0.90, 9.0, 1.0, 50, 6));  // filtered out at 0.95
  results.push_back(make_result(false, 0.0, 0.0));

  const MetricSummary s = metric_summary(results, 0.95);
  CHECK(s.count == 2);
  CHECK(s.mean_log_ppl == doctest::Approx(3.0));  // perplexities e^2 and e^4
  CHECK(s.mean_similarity == doctest::Approx(0.98));
  CHECK(s.mean_queries == doctest::Approx(20.0));
  CHECK(s.mean_edit_count == doctest::Approx(3.0));

  SUBCASE("a single result summarizes to itself") {
    std::vector<AttackResult> one{make_result(true, 0.99, 2.5, 1.0, 17, 3)};
    const MetricSummary m = metric_summary(one, 0.95);
    CHECK(m.mean_log_ppl == doctest::Approx(2.5));
    CHECK(m.mean_queries == doctest::Approx(17.0));
    CHECK(m.count == 1);
  }
  SUBCASE("raising the threshold never adds members") {
    const MetricSummary lower = metric_summary(results, 0.90);
    CHECK(lower.count >= s.count);
  }
  SUBCASE("an empty subset is undefined") {
    CHECK_THROWS_AS(metric_summary(results, 0.999), UndefinedMetricError);
  }
}

TEST_CASE("original log perplexity splits by outcome") {
  std::vector<AttackResult> results;
  results.push_back(make_result(true, 0.99, 2.0, 3.0));
  results.push_back(make_result(true, 0.99, 2.0, 5.0));
  results.push_back(make_result(false, 0.0, 0.0, 10.0));
  CHECK(mean_original_log_ppl(results, true) == doctest::Approx(4.0));
  CHECK(mean_original_log_ppl(results, false) == doctest::Approx(10.0));
}

TEST_CASE("identical ablation configs give identical curves") {
  const auto world = rr::testing::make_linear_world();
  std::vector<LabeledExample> subset(world.examples.begin(), world.examples.begin() + 4);

  AttackConfig config;
  config.batch_size = 6;
  config.max_iterations = 25;
  config.seed = 13;
  const std::vector<AttackConfig> configs{config, config};
  const std::vector<double> thresholds{0.80, 0.90, 0.95};

  const AblationCurves out = ablation_run(subset, configs, *world.gateway, thresholds);
  REQUIRE(out.curves.size() == 2);
  CHECK(out.curves[0] == out.curves[1]);
}

TEST_CASE("ablation configs may differ only in the ablated knobs") {
  const auto world = rr::testing::make_linear_world();
  std::vector<LabeledExample> empty_dataset;
  const std::vector<double> thresholds{0.95};

  AttackConfig a;
  AttackConfig b;
  b.decision_mode = DecisionMode::kGreedy;  // allowed to differ
  b.span_m = 2;                             // allowed to differ
  // passes the config check, then fails on the empty result set
  CHECK_THROWS_AS(
      ablation_run(empty_dataset, std::vector<AttackConfig>{a, b}, *world.gateway, thresholds),
      UndefinedMetricError);

  AttackConfig c = a;
  c.weights.w_sim = 7.0;  // weights may not differ
  CHECK_THROWS_AS(
      ablation_run(empty_dataset, std::vector<AttackConfig>{a, c}, *world.gateway, thresholds),
      std::invalid_argument);
}

}  // TEST_SUITE
