#pragma once

#include <string>
#include <vector>

#include "rr/app_config.hpp"

namespace rr {

struct AttackCommand {
  std::string config_path;
  std::string dataset_path;
  std::string output_path;
  ConfigOverrides overrides;
};

struct AdaptCommand {
  std::string config_path;
  std::string corpus_path;
  std::string embeddings_in;
  std::string embeddings_out;
};

struct EvalCommand {
  std::string results_path;
  std::vector<double> thresholds;  // empty selects the default grid
  std::string report_path;
  std::string curve_path;          // empty derives <report>.curve.tsv
  double sim_threshold = 0.95;     // metric-summary filter
};

struct PlotCommand {
  std::vector<std::string> inputs;  // curve TSV files
  std::string output_path;
  std::string title = "Attack success rate";
};

// Each command returns a process exit status and reports failures on stderr.
int run_attack_command(const AttackCommand& cmd);
int run_adapt_command(const AdaptCommand& cmd);
int run_eval_command(const EvalCommand& cmd);
int run_plot_command(const PlotCommand& cmd);

}  // namespace rr
