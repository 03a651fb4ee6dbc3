#include <doctest.h>

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rr/app_config.hpp"
#include "rr/commands.hpp"
#include "rr/embedding_io.hpp"
#include "rr/records.hpp"
#include "support/toy_world.hpp"

using namespace rr;

namespace {

struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) {
    const auto ticks = std::chrono::steady_clock::now().time_since_epoch().count();
    path = std::filesystem::temp_directory_path() /
           ("rrattack_test_" + tag + "_" + std::to_string(ticks));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << content;
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const std::string& blob) {
  int n = 0;
  for (const char c : blob) {
    if (c == '\n') ++n;
  }
  return n;
}

// Writes the linear toy world to disk as a mock-gateway fixture and returns
// the config path.
std::string write_world_fixture(const TempDir& dir, const rr::testing::ToyWorld& world,
                                const std::string& engine_section) {
  std::string corpus;
  for (const auto& line : world.corpus_lines) corpus += line + "\n";
  write_text(dir.file("corpus.txt"), corpus);
  save_embeddings_text(*world.embeddings, dir.file("embeddings.txt"));
  write_text(dir.file("classifier.json"), world.classifier_json);

  std::string config;
  config += "[gateway]\n";
  config += "backend = mock\n";
  config += "lm_corpus = " + dir.file("corpus.txt") + "\n";
  config += "embeddings = " + dir.file("embeddings.txt") + "\n";
  config += "classifier = " + dir.file("classifier.json") + "\n";
  config += "smoothing_k = 0.05\n";
  config += engine_section;
  write_text(dir.file("config.ini"), config);
  return dir.file("config.ini");
}

std::string dataset_json(const rr::testing::ToyWorld& world, bool flip_labels) {
  std::string out;
  for (const auto& ex : world.examples) {
    nlohmann::json j{{"text", ex.sentence.text()},
                     {"label", flip_labels ? 1 - ex.label : ex.label},
                     {"id", ex.id}};
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("flat config parsing") {
  const auto cfg = FlatConfig::parse_string(
      "top = 1\n"
      "[engine]\n"
      "seed = 42   # trailing comment\n"
      "; full-line comment\n"
      "[weights]\n"
      "w_ppl = 7.5\n");
  CHECK(cfg.get_or("top", "") == "1");
  CHECK(cfg.get_u64("engine.seed", 0) == 42);
  CHECK(cfg.get_double("weights.w_ppl", 0) == 7.5);
  CHECK_FALSE(cfg.get("engine.missing"));
  CHECK(cfg.get_int("engine.missing", -3) == -3);

  CHECK_THROWS(FlatConfig::parse_string("[unterminated\n"));
  CHECK_THROWS(FlatConfig::parse_string("no equals sign\n"));
  CHECK_THROWS(FlatConfig::parse_string("[s]\nkey = notanumber\n").get_int("s.key", 0));
}

TEST_CASE("config precedence: flags over file over defaults") {
  TempDir dir("precedence");
  write_text(dir.file("c.ini"),
             "[engine]\nseed = 5\nspan_m = 2\n[weights]\nw_sim = 11\n");

  SUBCASE("built-in defaults when no file is given") {
    const AppConfig app = load_app_config("");
    CHECK(app.attack.seed == 0);
    CHECK(app.attack.span_m == 3);
    CHECK(app.attack.weights.w_sim == 20.0);
  }
  SUBCASE("file values override defaults") {
    const AppConfig app = load_app_config(dir.file("c.ini"));
    CHECK(app.attack.seed == 5);
    CHECK(app.attack.span_m == 2);
    CHECK(app.attack.weights.w_sim == 11.0);
    CHECK(app.attack.batch_size == 50);  // untouched default
  }
  SUBCASE("flag overrides beat the file") {
    AppConfig app = load_app_config(dir.file("c.ini"));
    ConfigOverrides ov;
    ov.seed = 9;
    ov.span_m = 4;
    ov.decision = "greedy";
    apply_overrides(app, ov);
    CHECK(app.attack.seed == 9);
    CHECK(app.attack.span_m == 4);
    CHECK(app.attack.decision_mode == DecisionMode::kGreedy);
    CHECK(app.attack.weights.w_sim == 11.0);  // file value survives
  }
}

TEST_CASE("gateway construction rejects non-mock backends") {
  GatewayFileConfig cfg;
  cfg.backend = "bert";
  CHECK_THROWS_AS(build_gateway(cfg), BackendUnavailableError);
}

TEST_CASE("attack command end to end") {
  const auto world = rr::testing::make_linear_world();
  TempDir dir("attack");
  const std::string config = write_world_fixture(
      dir, world, "[engine]\nbatch_size = 6\nmax_iterations = 30\nseed = 5\n");

  SUBCASE("empty dataset writes a header-only file") {
    write_text(dir.file("empty.jsonl"), "");
    AttackCommand cmd{config, dir.file("empty.jsonl"), dir.file("out.jsonl"), {}};
    CHECK(run_attack_command(cmd) == 0);
    const std::string out = read_bytes(dir.file("out.jsonl"));
    CHECK(count_lines(out) == 1);
    CHECK(out.find("\"record\":\"header\"") != std::string::npos);
    CHECK(out.find("\"config_hash\"") != std::string::npos);
  }

  SUBCASE("misclassified originals become skip records") {
    write_text(dir.file("flipped.jsonl"), dataset_json(world, /*flip_labels=*/true));
    AttackCommand cmd{config, dir.file("flipped.jsonl"), dir.file("skips.jsonl"), {}};
    CHECK(run_attack_command(cmd) == 0);
    const LoadedResults loaded = load_results_jsonl(dir.file("skips.jsonl"));
    CHECK(loaded.results.empty());
    CHECK(loaded.skipped == static_cast<int>(world.examples.size()));
  }

  SUBCASE("results persist, reload, and reproduce byte for byte") {
    write_text(dir.file("data.jsonl"), dataset_json(world, false));
    AttackCommand cmd{config, dir.file("data.jsonl"), dir.file("run1.jsonl"), {}};
    CHECK(run_attack_command(cmd) == 0);

    AttackCommand again = cmd;
    again.output_path = dir.file("run2.jsonl");
    CHECK(run_attack_command(again) == 0);
    CHECK(read_bytes(dir.file("run1.jsonl")) == read_bytes(dir.file("run2.jsonl")));

    // a different seed changes the file
    AttackCommand reseeded = cmd;
    reseeded.output_path = dir.file("run3.jsonl");
    reseeded.overrides.seed = 77;
    CHECK(run_attack_command(reseeded) == 0);
    CHECK(read_bytes(dir.file("run1.jsonl")) != read_bytes(dir.file("run3.jsonl")));

    const LoadedResults loaded = load_results_jsonl(dir.file("run1.jsonl"));
    CHECK(loaded.results.size() + loaded.skipped == world.examples.size());
    CHECK(loaded.header.at("config").at("batch_size").get<int>() == 6);
  }

  SUBCASE("worker parallelism does not change the output bytes") {
    write_text(dir.file("data.jsonl"), dataset_json(world, false));
    AttackCommand serial{config, dir.file("data.jsonl"), dir.file("serial.jsonl"), {}};
    CHECK(run_attack_command(serial) == 0);
    AttackCommand parallel = serial;
    parallel.output_path = dir.file("parallel.jsonl");
    parallel.overrides.workers = 4;
    CHECK(run_attack_command(parallel) == 0);
    CHECK(read_bytes(dir.file("serial.jsonl")) == read_bytes(dir.file("parallel.jsonl")));
  }

  SUBCASE("missing dataset fails with a nonzero status") {
    AttackCommand cmd{config, dir.file("absent.jsonl"), dir.file("out.jsonl"), {}};
    CHECK(run_attack_command(cmd) != 0);
  }
}

TEST_CASE("adapt command") {
  TempDir dir("adapt");
  write_text(dir.file("corpus.txt"), "alpha beta alpha\nbeta alpha\n");
  write_text(dir.file("emb.txt"), "alpha 1.5 -0.5\nbeta 0.25 2\n");

  SUBCASE("identity vocabulary ends at zero error") {
    write_text(dir.file("pieces.txt"), "alpha\nbeta\n");
    write_text(dir.file("cfg.ini"),
               "[adapt]\nsteps = 5\nsample_size = 4\nstep_size = 0.01\nsubword_vocab = " +
                   dir.file("pieces.txt") + "\n");
    AdaptCommand cmd{dir.file("cfg.ini"), dir.file("corpus.txt"), dir.file("emb.txt"),
                     dir.file("adapted.txt")};
    CHECK(run_adapt_command(cmd) == 0);
    const EmbeddingTable adapted = load_embeddings_text(dir.file("adapted.txt"));
    CHECK((*adapted.vector_for("alpha") - Vector{{1.5, -0.5}}).norm() == 0.0);
    CHECK((*adapted.vector_for("beta") - Vector{{0.25, 2.0}}).norm() == 0.0);
  }

  SUBCASE("character fallback reduces the error on split words") {
    write_text(dir.file("cfg.ini"), "[adapt]\nsteps = 4000\nsample_size = 4\nstep_size = 0.001\n");
    AdaptCommand cmd{dir.file("cfg.ini"), dir.file("corpus.txt"), dir.file("emb.txt"),
                     dir.file("adapted2.txt")};
    CHECK(run_adapt_command(cmd) == 0);
    const EmbeddingTable adapted = load_embeddings_text(dir.file("adapted2.txt"));
    // "alpha" splits into a ##l ##p ##h ##a: the piece sums approach the source
    Vector sum = Vector::Zero(2);
    for (const auto& piece : character_subwords("alpha")) {
      sum += *adapted.vector_for(piece);
    }
    CHECK((sum - Vector{{1.5, -0.5}}).lpNorm<1>() < 0.2);
  }

  SUBCASE("missing corpus file fails") {
    AdaptCommand cmd{"", dir.file("nope.txt"), dir.file("emb.txt"), dir.file("x.txt")};
    CHECK(run_adapt_command(cmd) != 0);
  }
}

TEST_CASE("eval and plot commands") {
  const auto world = rr::testing::make_linear_world();
  TempDir dir("eval");
  const std::string config = write_world_fixture(
      dir, world, "[engine]\nbatch_size = 8\nmax_iterations = 40\nseed = 11\n");
  write_text(dir.file("data.jsonl"), dataset_json(world, false));
  AttackCommand attack_cmd{config, dir.file("data.jsonl"), dir.file("results.jsonl"), {}};
  REQUIRE(run_attack_command(attack_cmd) == 0);

  SUBCASE("round trip into a report with an explicit threshold list") {
    EvalCommand cmd;
    cmd.results_path = dir.file("results.jsonl");
    cmd.report_path = dir.file("report.json");
    cmd.thresholds = {0.90, 0.95};
    CHECK(run_eval_command(cmd) == 0);

    const std::string curve = read_bytes(dir.file("report.json") + ".curve.tsv");
    CHECK(count_lines(curve) == 2);

    const auto report = nlohmann::json::parse(read_bytes(dir.file("report.json")));
    CHECK(report.at("record") == "eval_report");
    CHECK(report.at("curve").size() == 2);
    CHECK(report.at("asr").is_number());

    // plot the emitted curve
    PlotCommand plot;
    plot.inputs = {dir.file("report.json") + ".curve.tsv"};
    plot.output_path = dir.file("curve.svg");
    CHECK(run_plot_command(plot) == 0);
    const std::string svg = read_bytes(dir.file("curve.svg"));
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("polyline") != std::string::npos);
  }

  SUBCASE("corrupted records name the line") {
    std::string blob = read_bytes(dir.file("results.jsonl"));
    blob += "this is not json\n";
    write_text(dir.file("broken.jsonl"), blob);

    EvalCommand cmd;
    cmd.results_path = dir.file("broken.jsonl");
    cmd.report_path = dir.file("report2.json");
    CHECK(run_eval_command(cmd) != 0);

    const int bad_line = count_lines(blob);
    try {
      load_results_jsonl(dir.file("broken.jsonl"));
      FAIL("expected a parse failure");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find(":" + std::to_string(bad_line) + ":") !=
            std::string::npos);
    }
  }
}

}  // TEST_SUITE
