#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rr/types.hpp"

namespace rr {

enum class EditKind { kInsert, kDelete, kReplace };

/// One single-word step that moves the current sentence toward the original.
/// position indexes the current sentence as it was when the script was built.
///   replace: current[position] becomes original_word
///   delete:  current[position] (an added word) is removed
///   insert:  original_word is restored before current[position]
struct Edit {
  EditKind kind;
  std::size_t position;
  std::optional<std::string> current_word;
  std::optional<std::string> original_word;

  friend bool operator==(const Edit&, const Edit&) = default;
};

/// Minimum script of single-word edits transforming current into original;
/// its length is the word-level Levenshtein distance (unit costs, no
/// transpositions). Edits are ordered by ascending position; ties between
/// minimal scripts break replace over delete over insert, deterministically.
/// Applying the script back to front yields the original exactly.
std::vector<Edit> edit_script(const Sentence& current, const Sentence& original);

/// Word-level Levenshtein distance (distance only, two-row DP).
std::size_t edit_distance(const Sentence& current, const Sentence& original);

/// Applies one edit to a token list.
void apply_edit(std::vector<std::string>& tokens, const Edit& edit);

/// Applies a whole script (in reverse order, so recorded positions stay
/// valid) and returns the resulting sentence.
Sentence apply_script(const Sentence& current, const std::vector<Edit>& script);

}  // namespace rr
