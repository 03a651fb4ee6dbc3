#include "rr/records.hpp"

#include <cstdio>
#include <fstream>

#include "rr/tokenize.hpp"

namespace rr {

using nlohmann::json;

namespace {

[[noreturn]] void fail_line(const std::string& path, std::size_t line_no, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

Sentence sentence_from_stored(const json& j, const char* key) {
  auto tokens = split_tokens(j.at(key).get<std::string>());
  if (tokens.empty()) throw std::runtime_error(std::string(key) + " is empty");
  return Sentence(std::move(tokens));
}

}  // namespace

std::vector<LabeledExample> load_dataset_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  std::vector<LabeledExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      fail_line(path, line_no, std::string("invalid JSON: ") + e.what());
    }
    try {
      const auto text = j.at("text").get<std::string>();
      const int label = j.at("label").get<int>();
      std::string id =
          j.contains("id") ? j.at("id").get<std::string>() : std::to_string(line_no);
      out.emplace_back(sentence_from_text(text), label, std::move(id));
    } catch (const std::exception& e) {
      fail_line(path, line_no, e.what());
    }
  }
  return out;
}

json config_to_json(const AttackConfig& config) {
  return json{{"span_m", config.span_m},
              {"batch_size", config.batch_size},
              {"max_iterations", config.max_iterations},
              {"rollback_period", config.rollback_period},
              {"early_stop_fraction", config.early_stop_fraction},
              {"seed", config.seed},
              {"decision", to_string(config.decision_mode)},
              {"rollback", to_string(config.rollback_mode)},
              {"weights",
               json{{"w_ppl", config.weights.w_ppl},
                    {"w_sim", config.weights.w_sim},
                    {"phi_sim", config.weights.phi_sim},
                    {"w_clf", config.weights.w_clf},
                    {"w_enforce", config.weights.w_enforce}}}};
}

AttackConfig config_from_json(const json& j) {
  AttackConfig config;
  config.span_m = j.at("span_m").get<int>();
  config.batch_size = j.at("batch_size").get<int>();
  config.max_iterations = j.at("max_iterations").get<int>();
  config.rollback_period = j.at("rollback_period").get<int>();
  config.early_stop_fraction = j.at("early_stop_fraction").get<double>();
  config.seed = j.at("seed").get<std::uint64_t>();
  config.decision_mode = decision_mode_from_string(j.at("decision").get<std::string>());
  config.rollback_mode = rollback_mode_from_string(j.at("rollback").get<std::string>());
  const auto& w = j.at("weights");
  config.weights.w_ppl = w.at("w_ppl").get<double>();
  config.weights.w_sim = w.at("w_sim").get<double>();
  config.weights.phi_sim = w.at("phi_sim").get<double>();
  config.weights.w_clf = w.at("w_clf").get<double>();
  config.weights.w_enforce = w.at("w_enforce").get<double>();
  config.validate();
  return config;
}

std::string config_hash(const AttackConfig& config) {
  const std::string canonical = config_to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : canonical) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

json result_to_json(const AttackResult& r) {
  json j{{"record", "result"},
         {"id", r.original.id},
         {"success", r.success},
         {"original_text", r.original.sentence.text()},
         {"original_label", r.original.label},
         {"similarity", r.similarity},
         {"log_ppl_original", r.log_ppl_original},
         {"log_ppl_adversarial", r.log_ppl_adversarial},
         {"log_ppl_ratio", r.log_ppl_ratio},
         {"critique", r.critique},
         {"iterations_used", r.iterations_used},
         {"classifier_queries", r.classifier_queries},
         {"edit_count", r.edit_count}};
  if (r.adversarial) {
    j["adversarial_text"] = r.adversarial->text();
  } else {
    j["adversarial_text"] = nullptr;
  }
  return j;
}

AttackResult result_from_json(const json& j) {
  LabeledExample original(sentence_from_stored(j, "original_text"),
                          j.at("original_label").get<int>(), j.at("id").get<std::string>());
  std::optional<Sentence> adversarial;
  if (!j.at("adversarial_text").is_null()) {
    adversarial = sentence_from_stored(j, "adversarial_text");
  }
  return AttackResult{j.at("success").get<bool>(),
                      std::move(adversarial),
                      std::move(original),
                      j.at("similarity").get<double>(),
                      j.at("log_ppl_original").get<double>(),
                      j.at("log_ppl_adversarial").get<double>(),
                      j.at("log_ppl_ratio").get<double>(),
                      j.at("critique").get<double>(),
                      j.at("iterations_used").get<int>(),
                      j.at("classifier_queries").get<std::int64_t>(),
                      j.at("edit_count").get<int>()};
}

json header_json(const AttackConfig& config) {
  return json{{"record", "header"},
              {"schema_version", kResultSchemaVersion},
              {"seed", config.seed},
              {"config", config_to_json(config)},
              {"config_hash", config_hash(config)}};
}

json skip_json(const LabeledExample& example, int predicted) {
  return json{{"record", "skip"},
              {"id", example.id},
              {"original_text", example.sentence.text()},
              {"original_label", example.label},
              {"predicted_label", predicted}};
}

void write_jsonl(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + path);
  for (const auto& line : lines) {
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
    out.put('\n');
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

LoadedResults load_results_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open results: " + path);
  LoadedResults out;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      fail_line(path, line_no, std::string("invalid JSON: ") + e.what());
    }
    std::string record;
    try {
      record = j.at("record").get<std::string>();
    } catch (const std::exception& e) {
      fail_line(path, line_no, e.what());
    }
    if (record == "header") {
      if (saw_header) fail_line(path, line_no, "duplicate header record");
      saw_header = true;
      out.header = j;
    } else if (record == "result") {
      try {
        out.results.push_back(result_from_json(j));
      } catch (const std::exception& e) {
        fail_line(path, line_no, e.what());
      }
    } else if (record == "skip") {
      ++out.skipped;
    } else {
      fail_line(path, line_no, "unknown record type '" + record + "'");
    }
  }
  if (!saw_header) throw std::runtime_error(path + ": missing header record");
  return out;
}

}  // namespace rr
