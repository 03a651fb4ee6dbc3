#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "rr/gateway.hpp"
#include "rr/types.hpp"
#include "rr/vocab_adaptation.hpp"

namespace rr {

/// Flat key-value config with [section] headers; keys are "section.key".
/// '#' and ';' start comments. Values keep interior whitespace.
class FlatConfig {
 public:
  static FlatConfig parse_file(const std::string& path);
  static FlatConfig parse_string(const std::string& text, const std::string& origin = "<config>");

  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, std::string fallback) const;
  int get_int(const std::string& key, int fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;

  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

struct GatewayFileConfig {
  std::string backend = "mock";
  std::string lm_corpus;      // text, one sentence per line
  std::string embeddings;     // GloVe-style table
  std::string lm_embeddings;  // optional adapted table over the LM vocabulary
  std::string classifier;     // JSON coefficients for the mock victim
  double smoothing_k = 0.1;
  std::string model_id;       // adapter fields, carried for diagnostics
  std::string device;
};

struct AdaptFileConfig {
  AdaptationOptions options;
  std::string subword_vocab;  // optional piece inventory; character fallback otherwise
};

struct AppConfig {
  AttackConfig attack;
  GatewayFileConfig gateway;
  AdaptFileConfig adapt;
  int workers = 1;
  double sim_threshold = 0.95;
};

/// Built-in defaults, overlaid with the config file when path is non-empty.
AppConfig load_app_config(const std::string& config_path);

/// Flag/environment overrides; only set fields apply. Flags have already won
/// over environment values by the time this is called.
struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<double> sim_threshold;
  std::optional<std::string> decision;
  std::optional<std::string> rollback;
  std::optional<int> span_m;
};

void apply_overrides(AppConfig& config, const ConfigOverrides& overrides);

/// Instantiates the mock model stack described by the config. Backends other
/// than "mock" name pretrained adapters that are not bundled; requesting one
/// throws BackendUnavailableError.
std::shared_ptr<ModelGateway> build_gateway(const GatewayFileConfig& config);

}  // namespace rr
