#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lexforge/eval.hpp"
#include "lexforge/lexicon.hpp"
#include "lexforge/nn.hpp"
#include "lexforge/stats.hpp"
#include "lexforge/util.hpp"

namespace lexforge {

struct Thresholds {
  double delta = 0.5;  // prediction threshold, in (0,1)
  int n = 1;           // maximum translations per source word
};

// Smoothed matched ratio rho(s,t) = mat / (coc + lambda).
inline double matched_ratio(std::int64_t mat, std::int64_t coc, double lambda = 20.0) {
  if (mat < 0 || coc < 0) throw std::runtime_error("matched_ratio: negative count");
  if (lambda < 0.0) throw std::runtime_error("matched_ratio: negative lambda");
  double denom = static_cast<double>(coc) + lambda;
  if (denom == 0.0) throw std::runtime_error("matched_ratio: division by zero (coc = 0, lambda = 0)");
  return static_cast<double>(mat) / denom;
}

// Fully unsupervised induction: for every source word in the stats table,
// the target with the highest matched ratio. Ties break toward higher
// co-occurrence, then lexicographically smaller target.
inline Lexicon induce_unsupervised(const StatsTable& stats, double lambda = 20.0) {
  if (stats.pairs.empty()) throw std::runtime_error("induce_unsupervised: empty stats table");
  Lexicon out;
  out.scored = true;
  auto it = stats.pairs.begin();
  while (it != stats.pairs.end()) {
    const std::string& src = it->first.first;
    const std::string* best_tgt = nullptr;
    double best_rho = 0.0;
    std::int64_t best_coc = 0;
    for (; it != stats.pairs.end() && it->first.first == src; ++it) {
      double rho = matched_ratio(it->second.mat_one2one, it->second.coc, lambda);
      bool better = best_tgt == nullptr || rho > best_rho ||
                    (rho == best_rho && (it->second.coc > best_coc ||
                                         (it->second.coc == best_coc && it->first.second < *best_tgt)));
      if (better) {
        best_tgt = &it->first.second;
        best_rho = rho;
        best_coc = it->second.coc;
      }
    }
    out.add(src, *best_tgt, best_rho);
  }
  return out;
}

struct TrainingSet {
  std::vector<WordPair> positives;
  std::vector<WordPair> negatives;
  // seed pairs without stats cannot be trained on; surfaced, not fatal
  std::size_t dropped_seed_pairs = 0;
};

// Positives are the seed pairs that have stats; negatives are every
// co-occurring pair outside the seed. max_negatives > 0 subsamples the
// negatives with the run seed.
inline TrainingSet build_training_set(const StatsTable& stats, const Lexicon& seed, std::size_t max_negatives = 0,
                                      std::uint64_t seed_value = 1) {
  if (seed.empty()) throw std::runtime_error("build_training_set: empty seed lexicon");
  TrainingSet out;
  for (const auto& [pair, score] : seed.entries) {
    if (stats.pairs.count(pair))
      out.positives.push_back(pair);
    else
      ++out.dropped_seed_pairs;
  }
  if (out.positives.empty()) throw std::runtime_error("build_training_set: no seed pair has stats");
  for (const auto& [pair, counts] : stats.pairs) {
    if (counts.coc >= 1 && !seed.entries.count(pair)) out.negatives.push_back(pair);
  }
  if (max_negatives > 0 && out.negatives.size() > max_negatives) {
    SplitMix64 gen(combine_seed(seed_value, 0x4e65));
    for (std::size_t i = 0; i < max_negatives; ++i) {
      std::size_t j = i + gen.below(out.negatives.size() - i);
      std::swap(out.negatives[i], out.negatives[j]);
    }
    out.negatives.resize(max_negatives);
    std::sort(out.negatives.begin(), out.negatives.end());
  }
  return out;
}

// Per-source candidate probabilities, each list sorted by (P desc, target
// asc). This is the precomputed input to threshold tuning and inference.
using CandidateProbs = std::map<std::string, std::vector<std::pair<std::string, double>>>;

// Scores every co-occurring pair in the stats table with the binary filter.
inline CandidateProbs score_candidates(const MlpParams& model, const StatsTable& stats,
                                       const EmbeddingProvider& src_provider, const EmbeddingProvider& tgt_provider) {
  if (model.head != Head::binary) throw std::runtime_error("score_candidates: binary head required");
  CandidateProbs probs;
  for (const auto& [pair, counts] : stats.pairs) {
    if (counts.coc < 1) continue;
    PairStats ps = pair_stats(stats, pair, src_provider, tgt_provider);
    double p = forward_binary(model, features(ps, model.transform));
    probs[pair.first].emplace_back(pair.second, p);
  }
  for (auto& [src, cands] : probs)
    std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
  return probs;
}

// Keeps, per source word, the top-scored candidates with P >= delta, at most
// n of them.
inline Lexicon infer_lexicon(const CandidateProbs& probs, double delta, int n) {
  if (n < 1) throw std::runtime_error("infer_lexicon: n must be >= 1");
  Lexicon out;
  out.scored = true;
  for (const auto& [src, cands] : probs) {
    int kept = 0;
    for (const auto& [tgt, p] : cands) {
      if (p < delta || kept >= n) break;
      out.add(src, tgt, p);
      ++kept;
    }
  }
  return out;
}

struct TuneGrid {
  std::vector<double> deltas;
  std::vector<int> ns;

  static TuneGrid defaults() {
    TuneGrid g;
    for (int i = 1; i <= 19; ++i) g.deltas.push_back(0.05 * i);
    for (int n = 1; n <= 5; ++n) g.ns.push_back(n);
    return g;
  }
};

struct TuneResult {
  Thresholds thresholds;
  double f1 = 0.0;
};

// Grid search over (delta, n) maximizing F1 of the inferred lexicon against
// the reference (normally the seed). Ties prefer higher delta, then lower n.
inline TuneResult tune_thresholds(const CandidateProbs& probs, const Lexicon& reference,
                                  const TuneGrid& grid = TuneGrid::defaults(),
                                  RecallMode recall_mode = RecallMode::per_source) {
  if (reference.empty()) throw std::runtime_error("tune_thresholds: empty reference lexicon");
  if (grid.deltas.empty() || grid.ns.empty()) throw std::runtime_error("tune_thresholds: empty grid");
  TuneResult best;
  bool first = true;
  for (double delta : grid.deltas) {
    for (int n : grid.ns) {
      Lexicon pred = infer_lexicon(probs, delta, n);
      double f1 = bli_f1(pred, reference, recall_mode).f1;
      bool better = first || f1 > best.f1 || (f1 == best.f1 && delta > best.thresholds.delta) ||
                    (f1 == best.f1 && delta == best.thresholds.delta && n < best.thresholds.n);
      if (better) {
        best.f1 = f1;
        best.thresholds = Thresholds{delta, n};
        first = false;
      }
    }
  }
  return best;
}

// Convenience wrapper: score, tune on the seed, then infer with the tuned
// thresholds.
inline Lexicon infer_lexicon_with_model(const MlpParams& model, const StatsTable& stats,
                                        const EmbeddingProvider& src_provider, const EmbeddingProvider& tgt_provider,
                                        const Thresholds& thresholds) {
  CandidateProbs probs = score_candidates(model, stats, src_provider, tgt_provider);
  return infer_lexicon(probs, thresholds.delta, thresholds.n);
}

}  // namespace lexforge
