#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lexforge/util.hpp"

namespace lexforge {

using Sentence = std::vector<std::string>;
using WordPair = std::pair<std::string, std::string>;

struct BitextPair {
  Sentence source;
  Sentence target;
  double score = 1.0;
};

using Bitext = std::vector<BitextPair>;

// word type -> occurrence count; only types with count >= 1 are stored
using FreqTable = std::map<std::string, std::int64_t>;

inline bool is_ascii_punct(unsigned char c) { return c < 128 && std::ispunct(c) != 0; }

inline std::string ascii_lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Lowercases and splits on whitespace; leading/trailing ASCII punctuation of
// each token becomes separate single-char tokens. Interior punctuation
// ("don't", "e.g.") is left alone except at the edges. Whitespace-only input
// yields an empty sentence; callers decide whether to skip it.
inline Sentence tokenize(const std::string& text) {
  Sentence out;
  std::istringstream in(text);
  std::string w;
  while (in >> w) {
    w = ascii_lower(w);
    std::size_t begin = 0;
    std::size_t end = w.size();
    while (begin < end && is_ascii_punct(static_cast<unsigned char>(w[begin]))) {
      out.push_back(std::string(1, w[begin]));
      ++begin;
    }
    std::size_t core_end = end;
    while (core_end > begin && is_ascii_punct(static_cast<unsigned char>(w[core_end - 1]))) --core_end;
    if (core_end > begin) out.push_back(w.substr(begin, core_end - begin));
    for (std::size_t i = core_end; i < end; ++i) out.push_back(std::string(1, w[i]));
  }
  return out;
}

inline std::string join_tokens(const Sentence& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ' ';
    out += s[i];
  }
  return out;
}

namespace detail {

inline std::vector<std::string> split_char(const std::string& line, char sep) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return cols;
}

// splits a pre-tokenized sentence field on spaces, lowercasing each token
inline Sentence split_tokens(const std::string& field) {
  Sentence s;
  std::istringstream in(field);
  std::string tok;
  while (in >> tok) s.push_back(ascii_lower(tok));
  return s;
}

}  // namespace detail

// Bitext TSV: source_sentence<TAB>target_sentence[<TAB>score], tokens
// space-separated within each field. Missing score defaults to 1.0.
inline Bitext load_bitext(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open bitext file: " + path);
  Bitext out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols = detail::split_char(line, '\t');
    if (cols.size() < 2 || cols.size() > 3)
      throw ValidationError(path + ": line " + std::to_string(lineno) + ": expected 2 or 3 tab-separated columns, got " +
                            std::to_string(cols.size()));
    BitextPair pair;
    pair.source = detail::split_tokens(cols[0]);
    pair.target = detail::split_tokens(cols[1]);
    if (pair.source.empty() || pair.target.empty())
      throw ValidationError(path + ": line " + std::to_string(lineno) + ": empty sentence field");
    if (cols.size() == 3) {
      try {
        std::size_t used = 0;
        pair.score = std::stod(cols[2], &used);
        if (used != cols[2].size()) throw std::invalid_argument("trailing junk");
      } catch (const std::exception&) {
        throw ValidationError(path + ": line " + std::to_string(lineno) + ": bad score field '" + cols[2] + "'");
      }
      if (!std::isfinite(pair.score))
        throw ValidationError(path + ": line " + std::to_string(lineno) + ": non-finite score");
    }
    out.push_back(std::move(pair));
  }
  return out;
}

inline void save_bitext(const std::string& path, const Bitext& bitext) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write bitext file: " + path);
  char buf[64];
  for (const BitextPair& p : bitext) {
    std::snprintf(buf, sizeof(buf), "%.6f", p.score);
    out << join_tokens(p.source) << '\t' << join_tokens(p.target) << '\t' << buf << '\n';
  }
}

// Raw monolingual corpus: one sentence per line, tokenized here.
// Whitespace-only lines are skipped.
inline std::vector<Sentence> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open corpus file: " + path);
  std::vector<Sentence> out;
  std::string line;
  while (std::getline(in, line)) {
    Sentence s = tokenize(line);
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

inline void save_corpus(const std::string& path, const std::vector<Sentence>& sentences) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write corpus file: " + path);
  for (const Sentence& s : sentences) out << join_tokens(s) << '\n';
}

inline FreqTable count_frequencies(const std::vector<Sentence>& sentences) {
  FreqTable table;
  for (const Sentence& s : sentences)
    for (const std::string& tok : s) ++table[tok];
  return table;
}

// associative and commutative, so counting may shard by sentence
inline void merge_frequencies(FreqTable& into, const FreqTable& from) {
  for (const auto& [tok, count] : from) into[tok] += count;
}

}  // namespace lexforge
