#include "rr/edit_script.hpp"

#include <algorithm>

namespace rr {

std::vector<Edit> edit_script(const Sentence& current, const Sentence& original) {
  const auto& c = current.tokens();
  const auto& o = original.tokens();
  const std::size_t n = c.size();
  const std::size_t m = o.size();

  // Full DP table; sentences are short enough that quadratic memory is fine.
  std::vector<std::vector<std::size_t>> dp(n + 1, std::vector<std::size_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) dp[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) dp[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = dp[i - 1][j - 1] + (c[i - 1] == o[j - 1] ? 0 : 1);
      dp[i][j] = std::min({sub, dp[i - 1][j] + 1, dp[i][j - 1] + 1});
    }
  }

  // Backtrace, preferring match, then replace, delete, insert.
  std::vector<Edit> script;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && c[i - 1] == o[j - 1] && dp[i][j] == dp[i - 1][j - 1]) {
      --i;
      --j;
    } else if (i > 0 && j > 0 && dp[i][j] == dp[i - 1][j - 1] + 1) {
      script.push_back(Edit{EditKind::kReplace, i - 1, c[i - 1], o[j - 1]});
      --i;
      --j;
    } else if (i > 0 && dp[i][j] == dp[i - 1][j] + 1) {
      script.push_back(Edit{EditKind::kDelete, i - 1, c[i - 1], std::nullopt});
      --i;
    } else {
      script.push_back(Edit{EditKind::kInsert, i, std::nullopt, o[j - 1]});
      --j;
    }
  }
  std::reverse(script.begin(), script.end());
  return script;
}

std::size_t edit_distance(const Sentence& current, const Sentence& original) {
  const auto& c = current.tokens();
  const auto& o = original.tokens();
  std::vector<std::size_t> row(o.size() + 1);
  for (std::size_t j = 0; j <= o.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= c.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= o.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t sub = diagonal + (c[i - 1] == o[j - 1] ? 0 : 1);
      row[j] = std::min({sub, up + 1, row[j - 1] + 1});
      diagonal = up;
    }
  }
  return row[o.size()];
}

void apply_edit(std::vector<std::string>& tokens, const Edit& edit) {
  switch (edit.kind) {
    case EditKind::kReplace:
      tokens[edit.position] = *edit.original_word;
      break;
    case EditKind::kDelete:
      tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(edit.position));
      break;
    case EditKind::kInsert:
      tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(edit.position),
                    *edit.original_word);
      break;
  }
}

Sentence apply_script(const Sentence& current, const std::vector<Edit>& script) {
  std::vector<std::string> tokens = current.tokens();
  for (auto it = script.rbegin(); it != script.rend(); ++it) {
    apply_edit(tokens, *it);
  }
  return Sentence(std::move(tokens));
}

}  // namespace rr
