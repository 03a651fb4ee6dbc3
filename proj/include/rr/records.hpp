#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rr/types.hpp"

namespace rr {

inline constexpr int kResultSchemaVersion = 1;

/// Loads a JSON-lines dataset: one {"text": ..., "label": ...} per line; an
/// optional "id" field defaults to the 1-based line number. Parse errors name
/// the offending line.
std::vector<LabeledExample> load_dataset_jsonl(const std::string& path);

nlohmann::json config_to_json(const AttackConfig& config);
AttackConfig config_from_json(const nlohmann::json& j);

/// Stable FNV-1a hash of the canonical config serialization, hex-encoded.
std::string config_hash(const AttackConfig& config);

nlohmann::json result_to_json(const AttackResult& result);
AttackResult result_from_json(const nlohmann::json& j);

/// Self-describing header record carrying the resolved config and its hash.
nlohmann::json header_json(const AttackConfig& config);

/// Skip record for an originally misclassified example.
nlohmann::json skip_json(const LabeledExample& example, int predicted);

/// Writes lines verbatim, each terminated by '\n'.
void write_jsonl(const std::string& path, const std::vector<std::string>& lines);

struct LoadedResults {
  nlohmann::json header;
  std::vector<AttackResult> results;
  int skipped = 0;
};

/// Reads a result file back; diagnostics carry 1-based line numbers.
LoadedResults load_results_jsonl(const std::string& path);

}  // namespace rr
