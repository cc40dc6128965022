#pragma once

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lexforge/embed.hpp"
#include "lexforge/util.hpp"

namespace lexforge {

struct SimMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;  // row-major

  SimMatrix() = default;
  SimMatrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

  double& at(int i, int j) { return data[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)]; }
  double at(int i, int j) const { return data[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)]; }
};

using AlignEdge = std::pair<int, int>;
using Alignment = std::set<AlignEdge>;

inline SimMatrix similarity_matrix(const std::vector<Vector>& src_vecs, const std::vector<Vector>& tgt_vecs) {
  if (src_vecs.empty() || tgt_vecs.empty()) throw std::runtime_error("similarity_matrix: empty vector list");
  SimMatrix m(static_cast<int>(src_vecs.size()), static_cast<int>(tgt_vecs.size()));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      m.at(i, j) = cosine(src_vecs[static_cast<std::size_t>(i)], tgt_vecs[static_cast<std::size_t>(j)]);
  return m;
}

// Positions that are simultaneously row-wise and column-wise maxima. Cells
// tied for both maxima all qualify.
inline Alignment argmax_align(const SimMatrix& m) {
  std::vector<double> row_max(static_cast<std::size_t>(m.rows), -std::numeric_limits<double>::infinity());
  std::vector<double> col_max(static_cast<std::size_t>(m.cols), -std::numeric_limits<double>::infinity());
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) {
      double v = m.at(i, j);
      row_max[static_cast<std::size_t>(i)] = std::max(row_max[static_cast<std::size_t>(i)], v);
      col_max[static_cast<std::size_t>(j)] = std::max(col_max[static_cast<std::size_t>(j)], v);
    }
  Alignment out;
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) {
      double v = m.at(i, j);
      if (v == row_max[static_cast<std::size_t>(i)] && v == col_max[static_cast<std::size_t>(j)]) out.emplace(i, j);
    }
  return out;
}

// Iterative argmax: each round after the first masks every row and column
// that already carries an edge and reruns argmax on what is left. Stops
// early once a round adds nothing.
inline Alignment itermax_align(const SimMatrix& m, int iterations = 2) {
  if (iterations < 1) throw std::runtime_error("itermax_align: iterations must be >= 1");
  Alignment edges = argmax_align(m);
  for (int iter = 1; iter < iterations; ++iter) {
    std::vector<bool> row_used(static_cast<std::size_t>(m.rows), false);
    std::vector<bool> col_used(static_cast<std::size_t>(m.cols), false);
    for (const AlignEdge& e : edges) {
      row_used[static_cast<std::size_t>(e.first)] = true;
      col_used[static_cast<std::size_t>(e.second)] = true;
    }
    const double neg_inf = -std::numeric_limits<double>::infinity();
    std::vector<double> row_max(static_cast<std::size_t>(m.rows), neg_inf);
    std::vector<double> col_max(static_cast<std::size_t>(m.cols), neg_inf);
    for (int i = 0; i < m.rows; ++i) {
      if (row_used[static_cast<std::size_t>(i)]) continue;
      for (int j = 0; j < m.cols; ++j) {
        if (col_used[static_cast<std::size_t>(j)]) continue;
        double v = m.at(i, j);
        row_max[static_cast<std::size_t>(i)] = std::max(row_max[static_cast<std::size_t>(i)], v);
        col_max[static_cast<std::size_t>(j)] = std::max(col_max[static_cast<std::size_t>(j)], v);
      }
    }
    std::size_t before = edges.size();
    for (int i = 0; i < m.rows; ++i) {
      if (row_used[static_cast<std::size_t>(i)]) continue;
      for (int j = 0; j < m.cols; ++j) {
        if (col_used[static_cast<std::size_t>(j)]) continue;
        double v = m.at(i, j);
        if (v == row_max[static_cast<std::size_t>(i)] && v == col_max[static_cast<std::size_t>(j)]) edges.emplace(i, j);
      }
    }
    if (edges.size() == before) break;
  }
  return edges;
}

// Ensemble label for one token pair: membership in argmax plus membership in
// itermax. Since argmax edges are always itermax edges, the result is 0, 1
// or 2 and argmax members never get label 1.
inline int gold_label(int i, int j, const Alignment& a_argmax, const Alignment& a_itermax) {
  AlignEdge e{i, j};
  return static_cast<int>(a_argmax.count(e)) + static_cast<int>(a_itermax.count(e));
}

// Pharaoh format: space-separated "i-j" tokens, 0-based, one sentence pair
// per line.
inline std::string alignment_to_pharaoh(const Alignment& alignment) {
  std::string out;
  for (const AlignEdge& e : alignment) {
    if (!out.empty()) out += ' ';
    out += std::to_string(e.first) + "-" + std::to_string(e.second);
  }
  return out;
}

inline Alignment pharaoh_to_alignment(const std::string& line) {
  Alignment out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    std::size_t dash = tok.find('-');
    if (dash == std::string::npos || dash == 0 || dash + 1 >= tok.size())
      throw ValidationError("bad pharaoh token '" + tok + "'");
    try {
      std::size_t used_i = 0;
      std::size_t used_j = 0;
      int i = std::stoi(tok.substr(0, dash), &used_i);
      int j = std::stoi(tok.substr(dash + 1), &used_j);
      if (used_i != dash || used_j != tok.size() - dash - 1 || i < 0 || j < 0)
        throw std::invalid_argument(tok);
      out.emplace(i, j);
    } catch (const std::exception&) {
      throw ValidationError("bad pharaoh token '" + tok + "'");
    }
  }
  return out;
}

inline void save_pharaoh(const std::string& path, const std::vector<Alignment>& alignments) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write alignment file: " + path);
  for (const Alignment& a : alignments) out << alignment_to_pharaoh(a) << '\n';
}

inline std::vector<Alignment> load_pharaoh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open alignment file: " + path);
  std::vector<Alignment> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    try {
      out.push_back(pharaoh_to_alignment(line));
    } catch (const ValidationError& e) {
      throw ValidationError(path + ": line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace lexforge
