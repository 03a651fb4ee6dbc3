#include "rr/commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "rr/attack_engine.hpp"
#include "rr/embedding_io.hpp"
#include "rr/evaluation.hpp"
#include "rr/records.hpp"
#include "rr/rng.hpp"
#include "rr/svg_plot.hpp"
#include "rr/tokenize.hpp"

namespace rr {

namespace {

using nlohmann::json;

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<double> default_threshold_grid() {
  std::vector<double> grid;
  for (int i = 50; i <= 100; i += 5) grid.push_back(static_cast<double>(i) / 100.0);
  return grid;
}

}  // namespace

int run_attack_command(const AttackCommand& cmd) {
  try {
    AppConfig app = load_app_config(cmd.config_path);
    apply_overrides(app, cmd.overrides);
    app.attack.validate();
    if (app.workers < 1) throw std::runtime_error("workers must be >= 1");

    const auto gateway = build_gateway(app.gateway);
    const auto dataset = load_dataset_jsonl(cmd.dataset_path);

    std::vector<std::string> lines(dataset.size() + 1);
    lines[0] = header_json(app.attack).dump();

    std::atomic<std::size_t> cursor{0};
    std::atomic<int> attacked{0};
    std::atomic<int> skipped{0};
    std::mutex error_mutex;
    std::string first_error;

    auto worker = [&] {
      for (;;) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= dataset.size()) return;
        try {
          const auto& example = dataset[i];
          const int predicted = gateway->classify(example.sentence).predicted();
          if (predicted != example.label) {
            lines[i + 1] = skip_json(example, predicted).dump();
            skipped.fetch_add(1);
            continue;
          }
          Rng example_rng = Rng(app.attack.seed).substream(i);
          const AttackResult result = attack(example, app.attack, *gateway, example_rng);
          lines[i + 1] = result_to_json(result).dump();
          attacked.fetch_add(1);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (first_error.empty()) {
            first_error = "example " + dataset[i].id + ": " + e.what();
          }
          return;
        }
      }
    };

    const auto n_workers = static_cast<std::size_t>(
        std::min<std::size_t>(static_cast<std::size_t>(app.workers),
                              std::max<std::size_t>(dataset.size(), 1)));
    std::vector<std::thread> threads;
    threads.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (!first_error.empty()) throw std::runtime_error(first_error);

    write_jsonl(cmd.output_path, lines);
    std::cout << "attacked " << attacked.load() << " example(s), skipped " << skipped.load()
              << " misclassified original(s); results in " << cmd.output_path << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "attack: " << e.what() << "\n";
    return 1;
  }
}

int run_adapt_command(const AdaptCommand& cmd) {
  try {
    AppConfig app = load_app_config(cmd.config_path);

    std::vector<std::string> words;
    for (const auto& line : read_lines(cmd.corpus_path)) {
      auto tokens = word_tokenize(line);
      words.insert(words.end(), tokens.begin(), tokens.end());
    }
    AdaptationCorpus corpus(std::move(words));
    const EmbeddingTable source = load_embeddings_text(cmd.embeddings_in);

    SubwordTokenizer tokenize;
    std::vector<std::string> target_tokens;
    if (!app.adapt.subword_vocab.empty()) {
      std::vector<std::string> pieces;
      for (const auto& line : read_lines(app.adapt.subword_vocab)) {
        if (!line.empty()) pieces.push_back(line);
      }
      auto wp = std::make_shared<WordPieceTokenizer>(pieces);
      if (std::find(pieces.begin(), pieces.end(), wp->unknown_token()) == pieces.end()) {
        pieces.push_back(wp->unknown_token());
      }
      target_tokens = std::move(pieces);
      tokenize = [wp](const std::string& word) { return wp->tokenize(word); };
    } else {
      // No piece inventory: character fallback over the corpus alphabet.
      std::set<std::string> pieces;
      for (const auto& word : corpus.words()) {
        for (auto& piece : character_subwords(word)) pieces.insert(std::move(piece));
      }
      target_tokens.assign(pieces.begin(), pieces.end());
      tokenize = [](const std::string& word) { return character_subwords(word); };
    }
    const Vocabulary target(target_tokens);

    const EmbeddingTable initial = initialize_adapted(source, target);
    const double initial_error = reconstruction_error(corpus, source, initial, tokenize);
    const EmbeddingTable adapted =
        adapt_embeddings(corpus, source, tokenize, target, app.adapt.options);
    const double final_error = reconstruction_error(corpus, source, adapted, tokenize);

    save_embeddings_text(adapted, cmd.embeddings_out);
    std::cout << "adapted " << corpus.size() << " corpus word(s) onto " << target.size()
              << " subword token(s); reconstruction error " << initial_error << " -> "
              << final_error << "; table in " << cmd.embeddings_out << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "adapt: " << e.what() << "\n";
    return 1;
  }
}

int run_eval_command(const EvalCommand& cmd) {
  try {
    const LoadedResults loaded = load_results_jsonl(cmd.results_path);
    const std::vector<double> thresholds =
        cmd.thresholds.empty() ? default_threshold_grid() : cmd.thresholds;

    const std::string curve_path =
        cmd.curve_path.empty() ? cmd.report_path + ".curve.tsv" : cmd.curve_path;

    json report{{"record", "eval_report"},
                {"schema_version", kResultSchemaVersion},
                {"results", loaded.results.size()},
                {"skipped", loaded.skipped},
                {"sim_threshold", cmd.sim_threshold},
                {"source_header", loaded.header}};

    if (loaded.results.empty()) {
      report["asr"] = nullptr;
      report["curve"] = nullptr;
      report["summary"] = nullptr;
      std::cout << "no attack results; ASR undefined\n";
    } else {
      const auto curve = asr_curve(loaded.results, thresholds);
      std::ostringstream tsv;
      json curve_json = json::array();
      for (const auto& [t, asr] : curve) {
        tsv << t << '\t' << asr << '\n';
        curve_json.push_back(json{{"threshold", t}, {"asr", asr}});
      }
      std::ofstream curve_out(curve_path, std::ios::binary);
      if (!curve_out) throw std::runtime_error("cannot write curve: " + curve_path);
      curve_out << tsv.str();

      report["asr"] = attack_success_rate(loaded.results, cmd.sim_threshold);
      report["curve"] = curve_json;
      report["curve_file"] = curve_path;
      try {
        const MetricSummary summary = metric_summary(loaded.results, cmd.sim_threshold);
        report["summary"] = json{{"mean_log_ppl", summary.mean_log_ppl},
                                 {"mean_similarity", summary.mean_similarity},
                                 {"mean_queries", summary.mean_queries},
                                 {"mean_edit_count", summary.mean_edit_count},
                                 {"count", summary.count}};
      } catch (const UndefinedMetricError&) {
        report["summary"] = nullptr;
      }
      std::cout << "ASR@" << cmd.sim_threshold << " = " << report["asr"].get<double>() << " over "
                << loaded.results.size() << " result(s), " << loaded.skipped
                << " skip(s); curve in " << curve_path << "\n";
    }

    std::ofstream out(cmd.report_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report: " + cmd.report_path);
    out << report.dump(2) << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "eval: " << e.what() << "\n";
    return 1;
  }
}

int run_plot_command(const PlotCommand& cmd) {
  try {
    if (cmd.inputs.empty()) throw std::runtime_error("no curve files given");
    std::vector<CurveSeries> series;
    for (const auto& path : cmd.inputs) {
      CurveSeries s;
      s.label = std::filesystem::path(path).stem().string();
      for (const auto& line : read_lines(path)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        double x = 0.0;
        double y = 0.0;
        if (!(ss >> x >> y)) throw std::runtime_error(path + ": expected 'threshold asr' lines");
        s.points.emplace_back(x, y);
      }
      if (s.points.empty()) throw std::runtime_error(path + ": no curve points");
      series.push_back(std::move(s));
    }
    write_curve_svg(cmd.output_path, series, cmd.title, "similarity threshold", "ASR");
    std::cout << "plot written to " << cmd.output_path << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "plot: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace rr
