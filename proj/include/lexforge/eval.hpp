#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lexforge/lexicon.hpp"
#include "lexforge/simalign.hpp"
#include "lexforge/util.hpp"

namespace lexforge {

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Two recall conventions are in circulation for lexicon F1; both are
// provided. per_source (default): a gold source word counts as recalled when
// any of its gold targets is predicted. per_pair: recall over gold pairs.
enum class RecallMode { per_source, per_pair };

// Precision/recall/F1 of a predicted lexicon against gold, restricted to
// source words that appear in gold.
inline Prf bli_f1(const Lexicon& pred, const Lexicon& gold, RecallMode mode = RecallMode::per_source) {
  if (gold.empty()) throw std::runtime_error("bli_f1: empty gold lexicon");
  std::set<std::string> gold_sources;
  for (const auto& [pair, score] : gold.entries) gold_sources.insert(pair.first);

  std::size_t restricted = 0;
  std::size_t hits = 0;
  std::set<std::string> recalled;
  for (const auto& [pair, score] : pred.entries) {
    if (!gold_sources.count(pair.first)) continue;
    ++restricted;
    if (gold.entries.count(pair)) {
      ++hits;
      recalled.insert(pair.first);
    }
  }

  Prf out;
  out.precision = restricted == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(restricted);
  if (mode == RecallMode::per_source)
    out.recall = static_cast<double>(recalled.size()) / static_cast<double>(gold_sources.size());
  else
    out.recall = static_cast<double>(hits) / static_cast<double>(gold.size());
  out.f1 = out.precision + out.recall == 0.0 ? 0.0
                                             : 2.0 * out.precision * out.recall / (out.precision + out.recall);
  return out;
}

// Fraction of gold source words whose single predicted translation is among
// the gold targets; unpredicted source words count as wrong.
inline double p_at_1(const std::map<std::string, std::string>& pred_top1, const Lexicon& gold) {
  if (gold.empty()) throw std::runtime_error("p_at_1: empty gold lexicon");
  std::set<std::string> gold_sources;
  for (const auto& [pair, score] : gold.entries) gold_sources.insert(pair.first);
  std::size_t correct = 0;
  for (const std::string& src : gold_sources) {
    auto it = pred_top1.find(src);
    if (it != pred_top1.end() && gold.contains(src, it->second)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(gold_sources.size());
}

struct GoldAlignment {
  Alignment sure;
  Alignment possible;  // superset of sure
};

inline void validate_gold(const GoldAlignment& gold) {
  for (const AlignEdge& e : gold.sure)
    if (!gold.possible.count(e)) throw std::runtime_error("gold alignment: sure edge not in possible set");
}

// Och-Ney alignment error rate: 1 - (|A & S| + |A & P|) / (|A| + |S|).
inline double aer(const Alignment& pred, const GoldAlignment& gold) {
  validate_gold(gold);
  std::size_t in_sure = 0;
  std::size_t in_possible = 0;
  for (const AlignEdge& e : pred) {
    if (gold.sure.count(e)) ++in_sure;
    if (gold.possible.count(e)) ++in_possible;
  }
  std::size_t denom = pred.size() + gold.sure.size();
  if (denom == 0) return 0.0;
  return 1.0 - static_cast<double>(in_sure + in_possible) / static_cast<double>(denom);
}

// Corpus-level AER with counts pooled over all sentence pairs.
inline double corpus_aer(const std::vector<Alignment>& pred, const std::vector<GoldAlignment>& gold) {
  if (pred.size() != gold.size()) throw std::runtime_error("corpus_aer: prediction and gold counts differ");
  std::size_t in_sure = 0;
  std::size_t in_possible = 0;
  std::size_t n_pred = 0;
  std::size_t n_sure = 0;
  for (std::size_t p = 0; p < pred.size(); ++p) {
    validate_gold(gold[p]);
    for (const AlignEdge& e : pred[p]) {
      if (gold[p].sure.count(e)) ++in_sure;
      if (gold[p].possible.count(e)) ++in_possible;
    }
    n_pred += pred[p].size();
    n_sure += gold[p].sure.size();
  }
  std::size_t denom = n_pred + n_sure;
  if (denom == 0) return 0.0;
  return 1.0 - static_cast<double>(in_sure + in_possible) / static_cast<double>(denom);
}

// Gold alignment file: lines "pair_id i j S" or "pair_id i j P", 0-based.
// S edges are sure and implicitly possible.
inline std::vector<GoldAlignment> load_gold_alignments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open gold alignment file: " + path);
  std::vector<GoldAlignment> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    long pair_id = -1;
    int i = -1;
    int j = -1;
    std::string kind;
    if (!(row >> pair_id >> i >> j >> kind) || pair_id < 0 || i < 0 || j < 0 || (kind != "S" && kind != "P"))
      throw ValidationError(path + ": line " + std::to_string(lineno) + ": expected 'pair_id i j S|P'");
    if (static_cast<std::size_t>(pair_id) >= out.size()) out.resize(static_cast<std::size_t>(pair_id) + 1);
    GoldAlignment& g = out[static_cast<std::size_t>(pair_id)];
    g.possible.emplace(i, j);
    if (kind == "S") g.sure.emplace(i, j);
  }
  return out;
}

}  // namespace lexforge
