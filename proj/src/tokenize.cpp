#include "rr/tokenize.hpp"

#include <cctype>

namespace rr {

namespace {

bool is_space(unsigned char c) { return std::isspace(c) != 0; }
bool is_punct(unsigned char c) { return c < 0x80 && std::ispunct(c) != 0; }

}  // namespace

std::vector<std::string> word_tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  };
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_space(c)) {
      flush();
    } else if (is_punct(c)) {
      flush();
      tokens.emplace_back(1, ch);
    } else {
      current += ch;
    }
  }
  flush();
  return tokens;
}

Sentence sentence_from_text(std::string text) {
  auto tokens = word_tokenize(text);
  if (tokens.empty()) {
    throw std::invalid_argument("sentence_from_text: no tokens in input text");
  }
  return Sentence(std::move(tokens), std::move(text));
}

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t pos = text.find(' ', start);
    if (pos == std::string_view::npos) {
      if (start < text.size()) tokens.emplace_back(text.substr(start));
      break;
    }
    if (pos > start) tokens.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return tokens;
}

}  // namespace rr
