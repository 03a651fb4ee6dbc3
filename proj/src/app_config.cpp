#include "rr/app_config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

#include "rr/embedding_io.hpp"
#include "rr/mock_models.hpp"

namespace rr {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

FlatConfig FlatConfig::parse_string(const std::string& text, const std::string& origin) {
  FlatConfig out;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": unterminated section");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": empty key");
    }
    out.entries_[section.empty() ? key : section + "." + key] = value;
  }
  return out;
}

FlatConfig FlatConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

std::optional<std::string> FlatConfig::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string FlatConfig::get_or(const std::string& key, std::string fallback) const {
  auto v = get(key);
  return v ? *v : std::move(fallback);
}

int FlatConfig::get_int(const std::string& key, int fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  try {
    return std::stoi(*v);
  } catch (const std::exception&) {
    throw std::runtime_error("config key '" + key + "': expected integer, got '" + *v + "'");
  }
}

double FlatConfig::get_double(const std::string& key, double fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  try {
    return std::stod(*v);
  } catch (const std::exception&) {
    throw std::runtime_error("config key '" + key + "': expected number, got '" + *v + "'");
  }
}

std::uint64_t FlatConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  try {
    return std::stoull(*v);
  } catch (const std::exception&) {
    throw std::runtime_error("config key '" + key + "': expected unsigned integer, got '" + *v +
                             "'");
  }
}

AppConfig load_app_config(const std::string& config_path) {
  AppConfig app;
  if (config_path.empty()) return app;
  const FlatConfig file = FlatConfig::parse_file(config_path);

  auto& a = app.attack;
  a.span_m = file.get_int("engine.span_m", a.span_m);
  a.batch_size = file.get_int("engine.batch_size", a.batch_size);
  a.max_iterations = file.get_int("engine.max_iterations", a.max_iterations);
  a.rollback_period = file.get_int("engine.rollback_period", a.rollback_period);
  a.early_stop_fraction = file.get_double("engine.early_stop_fraction", a.early_stop_fraction);
  a.seed = file.get_u64("engine.seed", a.seed);
  if (auto v = file.get("engine.decision")) a.decision_mode = decision_mode_from_string(*v);
  if (auto v = file.get("engine.rollback")) a.rollback_mode = rollback_mode_from_string(*v);
  a.weights.w_ppl = file.get_double("weights.w_ppl", a.weights.w_ppl);
  a.weights.w_sim = file.get_double("weights.w_sim", a.weights.w_sim);
  a.weights.phi_sim = file.get_double("weights.phi_sim", a.weights.phi_sim);
  a.weights.w_clf = file.get_double("weights.w_clf", a.weights.w_clf);
  a.weights.w_enforce = file.get_double("weights.w_enforce", a.weights.w_enforce);

  auto& g = app.gateway;
  g.backend = file.get_or("gateway.backend", g.backend);
  g.lm_corpus = file.get_or("gateway.lm_corpus", g.lm_corpus);
  g.embeddings = file.get_or("gateway.embeddings", g.embeddings);
  g.lm_embeddings = file.get_or("gateway.lm_embeddings", g.lm_embeddings);
  g.classifier = file.get_or("gateway.classifier", g.classifier);
  g.smoothing_k = file.get_double("gateway.smoothing_k", g.smoothing_k);
  g.model_id = file.get_or("gateway.model", g.model_id);
  g.device = file.get_or("gateway.device", g.device);

  auto& d = app.adapt;
  d.options.steps = file.get_int("adapt.steps", d.options.steps);
  d.options.sample_size = file.get_int("adapt.sample_size", d.options.sample_size);
  d.options.step_size = file.get_double("adapt.step_size", d.options.step_size);
  d.options.step_decay = file.get_double("adapt.step_decay", d.options.step_decay);
  d.options.seed = file.get_u64("adapt.seed", d.options.seed);
  d.subword_vocab = file.get_or("adapt.subword_vocab", d.subword_vocab);

  app.workers = file.get_int("engine.workers", app.workers);
  app.sim_threshold = file.get_double("engine.sim_threshold", app.sim_threshold);
  return app;
}

void apply_overrides(AppConfig& config, const ConfigOverrides& overrides) {
  if (overrides.seed) config.attack.seed = *overrides.seed;
  if (overrides.workers) config.workers = *overrides.workers;
  if (overrides.sim_threshold) config.sim_threshold = *overrides.sim_threshold;
  if (overrides.decision) config.attack.decision_mode = decision_mode_from_string(*overrides.decision);
  if (overrides.rollback) config.attack.rollback_mode = rollback_mode_from_string(*overrides.rollback);
  if (overrides.span_m) config.attack.span_m = *overrides.span_m;
}

std::shared_ptr<ModelGateway> build_gateway(const GatewayFileConfig& config) {
  if (config.backend != "mock") {
    throw BackendUnavailableError("backend '" + config.backend +
                                  "' names an external pretrained adapter; this build bundles "
                                  "only the deterministic mock backend");
  }
  if (config.lm_corpus.empty() || config.embeddings.empty() || config.classifier.empty()) {
    throw std::runtime_error(
        "mock gateway needs gateway.lm_corpus, gateway.embeddings and gateway.classifier");
  }

  auto lm = MockBigramLm::from_lines(read_lines(config.lm_corpus), config.smoothing_k);
  auto embeddings = std::make_shared<EmbeddingTable>(load_embeddings_text(config.embeddings));
  std::shared_ptr<EmbeddingTable> lm_embeddings;
  if (!config.lm_embeddings.empty()) {
    lm_embeddings = std::make_shared<EmbeddingTable>(load_embeddings_text(config.lm_embeddings));
  }
  auto encoder = std::make_shared<BagOfEmbeddingsEncoder>(embeddings);

  std::ifstream in(config.classifier);
  if (!in) throw std::runtime_error("cannot open classifier spec: " + config.classifier);
  nlohmann::json spec;
  try {
    in >> spec;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(config.classifier + ": invalid JSON: " + e.what());
  }
  const int classes = spec.at("num_classes").get<int>();
  Vector bias = Vector::Zero(classes);
  if (spec.contains("bias")) {
    const auto& b = spec.at("bias");
    if (static_cast<int>(b.size()) != classes) {
      throw std::runtime_error(config.classifier + ": bias size must equal num_classes");
    }
    for (int c = 0; c < classes; ++c) bias[c] = b.at(static_cast<std::size_t>(c)).get<double>();
  }
  std::unordered_map<std::string, Vector> coefficients;
  for (const auto& [token, values] : spec.at("coefficients").items()) {
    if (static_cast<int>(values.size()) != classes) {
      throw std::runtime_error(config.classifier + ": coefficient size mismatch for '" + token +
                               "'");
    }
    Vector coef(classes);
    for (int c = 0; c < classes; ++c) coef[c] = values.at(static_cast<std::size_t>(c)).get<double>();
    coefficients.emplace(token, std::move(coef));
  }
  auto victim =
      std::make_shared<BagOfWordsLogisticClassifier>(classes, std::move(coefficients), std::move(bias));

  return std::make_shared<ModelGateway>(lm, lm, encoder, embeddings, victim, lm_embeddings);
}

}  // namespace rr
