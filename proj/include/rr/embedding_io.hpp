#pragma once

#include <string>

#include "rr/gateway.hpp"

namespace rr {

/// Reads a text embedding table: one token per line, "token v1 v2 ... vd",
/// space-separated. All rows must share one dimension.
EmbeddingTable load_embeddings_text(const std::string& path);

/// Writes the table in the same format with round-trip precision.
void save_embeddings_text(const EmbeddingTable& table, const std::string& path);

}  // namespace rr
