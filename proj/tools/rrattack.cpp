// rrattack: rewrite-and-rollback adversarial attacks on text classifiers.
// Subcommands: attack, adapt, eval, plot.

#include <CLI11.hpp>

#include <optional>
#include <string>

#include "rr/commands.hpp"

namespace {

// Environment overrides mirror the flag names with an RRATTACK_ prefix.
template <typename T>
void add_override(CLI::App* cmd, const std::string& flag, std::optional<T>& slot,
                  const std::string& env, const std::string& help) {
  cmd->add_option_function<T>(
         flag, [&slot](const T& v) { slot = v; }, help)
      ->envname(env);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rewrite-and-rollback adversarial attack toolkit"};
  app.require_subcommand(1);

  rr::AttackCommand attack_cmd;
  auto* attack = app.add_subcommand("attack", "attack every example in a dataset");
  attack->add_option("--config", attack_cmd.config_path, "flat key-value config file")
      ->envname("RRATTACK_CONFIG");
  attack->add_option("--dataset", attack_cmd.dataset_path, "JSONL dataset ({text, label} per line)")
      ->required()
      ->envname("RRATTACK_DATASET");
  attack->add_option("--output", attack_cmd.output_path, "JSONL result file")
      ->required()
      ->envname("RRATTACK_OUTPUT");
  add_override<std::uint64_t>(attack, "--seed", attack_cmd.overrides.seed, "RRATTACK_SEED",
                              "master random seed");
  add_override<int>(attack, "--workers", attack_cmd.overrides.workers, "RRATTACK_WORKERS",
                    "parallel examples");
  add_override<double>(attack, "--sim-threshold", attack_cmd.overrides.sim_threshold,
                       "RRATTACK_SIM_THRESHOLD", "similarity threshold echoed to evaluation");
  add_override<std::string>(attack, "--decision", attack_cmd.overrides.decision,
                            "RRATTACK_DECISION", "decision rule: stochastic|greedy");
  add_override<std::string>(attack, "--rollback", attack_cmd.overrides.rollback,
                            "RRATTACK_ROLLBACK", "rollback schedule: periodic|single|none");
  add_override<int>(attack, "--span-m", attack_cmd.overrides.span_m, "RRATTACK_SPAN_M",
                    "rewrite span size");

  rr::AdaptCommand adapt_cmd;
  auto* adapt = app.add_subcommand("adapt", "transfer word embeddings onto a subword vocabulary");
  adapt->add_option("--config", adapt_cmd.config_path, "flat key-value config file")
      ->envname("RRATTACK_CONFIG");
  adapt->add_option("--corpus", adapt_cmd.corpus_path, "plain text corpus")->required();
  adapt->add_option("--embeddings-in", adapt_cmd.embeddings_in, "source embedding table")
      ->required();
  adapt->add_option("--embeddings-out", adapt_cmd.embeddings_out, "adapted table destination")
      ->required();

  rr::EvalCommand eval_cmd;
  std::string thresholds_arg;
  auto* eval = app.add_subcommand("eval", "compute ASR curves and metric summaries");
  eval->add_option("--results", eval_cmd.results_path, "JSONL result file from attack")
      ->required();
  eval->add_option("--report", eval_cmd.report_path, "JSON report destination")->required();
  eval->add_option("--curve", eval_cmd.curve_path, "curve TSV destination");
  eval->add_option("--thresholds", thresholds_arg,
                   "comma-separated similarity thresholds, ascending");
  eval->add_option("--sim-threshold", eval_cmd.sim_threshold,
                   "threshold for the headline ASR and metric summary")
      ->envname("RRATTACK_SIM_THRESHOLD");

  rr::PlotCommand plot_cmd;
  auto* plot = app.add_subcommand("plot", "render curve TSV files to SVG");
  plot->add_option("--input", plot_cmd.inputs, "curve TSV file(s)")->required();
  plot->add_option("--output", plot_cmd.output_path, "SVG destination")->required();
  plot->add_option("--title", plot_cmd.title, "plot title");

  CLI11_PARSE(app, argc, argv);

  if (attack->parsed()) return rr::run_attack_command(attack_cmd);
  if (adapt->parsed()) return rr::run_adapt_command(adapt_cmd);
  if (eval->parsed()) {
    if (!thresholds_arg.empty()) {
      std::size_t start = 0;
      while (start <= thresholds_arg.size()) {
        const auto comma = thresholds_arg.find(',', start);
        const std::string piece = thresholds_arg.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!piece.empty()) {
          try {
            eval_cmd.thresholds.push_back(std::stod(piece));
          } catch (const std::exception&) {
            std::cerr << "eval: bad threshold '" << piece << "'\n";
            return 1;
          }
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    }
    return rr::run_eval_command(eval_cmd);
  }
  if (plot->parsed()) return rr::run_plot_command(plot_cmd);
  return 1;
}
