#pragma once

#include <fstream>
#include <map>
#include <string>

#include "lexforge/corpus.hpp"
#include "lexforge/util.hpp"

namespace lexforge {

// Set of (source word, target word) pairs, each with an optional score
// (matched ratio, classifier probability, or 1.0 for plain gold lists).
struct Lexicon {
  std::map<WordPair, double> entries;
  bool scored = false;

  void add(const std::string& src, const std::string& tgt, double score = 1.0) {
    entries[{src, tgt}] = score;
  }
  bool contains(const std::string& src, const std::string& tgt) const {
    return entries.count({src, tgt}) != 0;
  }
  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
};

// Lexicon TSV: source<TAB>target[<TAB>score], UTF-8, lowercased.
inline Lexicon load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open lexicon file: " + path);
  Lexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols = detail::split_char(line, '\t');
    if (cols.size() < 2 || cols.size() > 3 || cols[0].empty() || cols[1].empty())
      throw ValidationError(path + ": line " + std::to_string(lineno) + ": expected 'source<TAB>target[<TAB>score]'");
    double score = 1.0;
    if (cols.size() == 3) {
      try {
        score = std::stod(cols[2]);
      } catch (const std::exception&) {
        throw ValidationError(path + ": line " + std::to_string(lineno) + ": bad score field '" + cols[2] + "'");
      }
      lex.scored = true;
    }
    lex.add(ascii_lower(cols[0]), ascii_lower(cols[1]), score);
  }
  return lex;
}

inline void save_lexicon(const std::string& path, const Lexicon& lex) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write lexicon file: " + path);
  char buf[64];
  for (const auto& [pair, score] : lex.entries) {
    out << pair.first << '\t' << pair.second;
    if (lex.scored) {
      std::snprintf(buf, sizeof(buf), "%.6f", score);
      out << '\t' << buf;
    }
    out << '\n';
  }
}

}  // namespace lexforge
