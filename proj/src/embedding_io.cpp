#include "rr/embedding_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace rr {

EmbeddingTable load_embeddings_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embedding file: " + path);

  std::vector<std::string> vocab;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  Eigen::Index dim = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string token;
    ss >> token;
    std::vector<double> values;
    double v;
    while (ss >> v) values.push_back(v);
    if (token.empty() || values.empty()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 'token v1 ... vd'");
    }
    if (dim < 0) {
      dim = static_cast<Eigen::Index>(values.size());
    } else if (static_cast<Eigen::Index>(values.size()) != dim) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": inconsistent embedding dimension");
    }
    vocab.push_back(std::move(token));
    rows.push_back(std::move(values));
  }
  if (vocab.empty()) throw std::runtime_error("embedding file is empty: " + path);

  Matrix vectors(static_cast<Eigen::Index>(rows.size()), dim);
  for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      vectors(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return EmbeddingTable(std::move(vocab), std::move(vectors));
}

void save_embeddings_text(const EmbeddingTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write embedding file: " + path);
  char buf[64];
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.vocab()[i];
    for (Eigen::Index j = 0; j < table.vectors().cols(); ++j) {
      const double v = table.vectors()(static_cast<Eigen::Index>(i), j);
      auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
      if (ec != std::errc()) throw std::runtime_error("embedding serialization failed");
      out << ' ';
      out.write(buf, end - buf);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace rr
