#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rr/types.hpp"

namespace rr {

/// Word-level tokenization: splits on whitespace and breaks ASCII punctuation
/// out as standalone tokens ("don't stop." -> don ' t stop .). Bytes >= 0x80
/// are treated as word characters.
std::vector<std::string> word_tokenize(std::string_view text);

/// Tokenizes raw text into a Sentence, preserving the raw form.
/// Throws std::invalid_argument when no tokens survive.
Sentence sentence_from_text(std::string text);

/// Inverse of Sentence::text(): split on single spaces, no punctuation logic.
std::vector<std::string> split_tokens(std::string_view text);

}  // namespace rr
