#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lexforge/corpus.hpp"
#include "lexforge/embed.hpp"
#include "lexforge/nn.hpp"
#include "lexforge/simalign.hpp"
#include "lexforge/stats.hpp"
#include "lexforge/util.hpp"

namespace lexforge {

// Raw features of one token pair (i, j): the five global counts of the
// underlying word-type pair and the contextualized cosine / dot similarity
// of the two token vectors. Unseen type pairs keep zero counts; the
// log(c + theta) transform stays defined.
inline TrainExample align_features(int i, int j, const BitextPair& pair, const StatsTable& stats,
                                   const std::vector<Vector>& src_vecs, const std::vector<Vector>& tgt_vecs) {
  if (i < 0 || j < 0 || i >= static_cast<int>(pair.source.size()) || j >= static_cast<int>(pair.target.size()))
    throw std::runtime_error("align_features: token index out of range");
  if (src_vecs.size() != pair.source.size() || tgt_vecs.size() != pair.target.size())
    throw std::runtime_error("align_features: token vector count mismatch");

  TrainExample ex;
  WordPair types{pair.source[static_cast<std::size_t>(i)], pair.target[static_cast<std::size_t>(j)]};
  auto it = stats.pairs.find(types);
  if (it != stats.pairs.end()) {
    ex.counts[0] = it->second.mat_one2one;
    ex.counts[1] = it->second.mat_many2one;
    ex.counts[2] = it->second.coc;
  }
  auto fs = stats.src_freq.find(types.first);
  if (fs != stats.src_freq.end()) ex.counts[3] = fs->second;
  auto ft = stats.tgt_freq.find(types.second);
  if (ft != stats.tgt_freq.end()) ex.counts[4] = ft->second;
  const Vector& vs = src_vecs[static_cast<std::size_t>(i)];
  const Vector& vt = tgt_vecs[static_cast<std::size_t>(j)];
  ex.cos_sim = cosine(vs, vt);
  ex.dot_sim = dot(vs, vt);
  return ex;
}

// Training examples for the ternary classifier: every token pair of every
// sentence pair, labeled by argmax/itermax membership. With
// max_label0_ratio > 0 the dominant label-0 pairs are subsampled to that
// ratio against labels > 0 (seeded, off by default).
inline std::vector<TrainExample> build_alignment_examples(
    const Bitext& bitext, const std::vector<Alignment>& alignments_argmax,
    const std::vector<Alignment>& alignments_itermax, const StatsTable& stats,
    const std::vector<std::vector<Vector>>& src_token_vecs, const std::vector<std::vector<Vector>>& tgt_token_vecs,
    double max_label0_ratio = 0.0, std::uint64_t seed = 1) {
  if (bitext.empty()) throw std::runtime_error("build_alignment_examples: empty bitext");
  if (alignments_argmax.size() != bitext.size() || alignments_itermax.size() != bitext.size() ||
      src_token_vecs.size() != bitext.size() || tgt_token_vecs.size() != bitext.size())
    throw std::runtime_error("build_alignment_examples: per-pair inputs must parallel the bitext");

  std::vector<TrainExample> zeros;
  std::vector<TrainExample> rest;
  for (std::size_t p = 0; p < bitext.size(); ++p) {
    const BitextPair& pair = bitext[p];
    for (int i = 0; i < static_cast<int>(pair.source.size()); ++i) {
      for (int j = 0; j < static_cast<int>(pair.target.size()); ++j) {
        TrainExample ex = align_features(i, j, pair, stats, src_token_vecs[p], tgt_token_vecs[p]);
        ex.label = gold_label(i, j, alignments_argmax[p], alignments_itermax[p]);
        (ex.label == 0 ? zeros : rest).push_back(ex);
      }
    }
  }
  if (max_label0_ratio > 0.0 && !rest.empty()) {
    std::size_t cap = static_cast<std::size_t>(max_label0_ratio * static_cast<double>(rest.size()));
    if (zeros.size() > cap) {
      SplitMix64 gen(combine_seed(seed, 0xa110));
      for (std::size_t i = 0; i < cap; ++i) {
        std::size_t j = i + gen.below(zeros.size() - i);
        std::swap(zeros[i], zeros[j]);
      }
      zeros.resize(cap);
    }
  }
  std::vector<TrainExample> out = std::move(rest);
  out.insert(out.end(), zeros.begin(), zeros.end());
  return out;
}

inline MlpParams train_alignment_classifier(const Bitext& bitext, const std::vector<Alignment>& alignments_argmax,
                                            const std::vector<Alignment>& alignments_itermax, const StatsTable& stats,
                                            const std::vector<std::vector<Vector>>& src_token_vecs,
                                            const std::vector<std::vector<Vector>>& tgt_token_vecs,
                                            const TrainConfig& config, double max_label0_ratio = 0.0) {
  std::vector<TrainExample> examples =
      build_alignment_examples(bitext, alignments_argmax, alignments_itermax, stats, src_token_vecs, tgt_token_vecs,
                               max_label0_ratio, config.seed);
  return train(examples, Head::ternary, config);
}

// E[y] under the predicted label distribution; edges with E[y] > 1 are kept.
// A one-hot label-1 prediction sits exactly on the boundary and is excluded.
inline double expected_label(const std::array<double, 3>& probs) { return probs[1] + 2.0 * probs[2]; }

inline bool keep_edge(const std::array<double, 3>& probs) { return expected_label(probs) > 1.0; }

inline Alignment infer_alignment(const MlpParams& model, const BitextPair& pair, const StatsTable& stats,
                                 const std::vector<Vector>& src_vecs, const std::vector<Vector>& tgt_vecs) {
  if (model.head != Head::ternary) throw std::runtime_error("infer_alignment: ternary head required");
  Alignment out;
  for (int i = 0; i < static_cast<int>(pair.source.size()); ++i) {
    for (int j = 0; j < static_cast<int>(pair.target.size()); ++j) {
      TrainExample ex = align_features(i, j, pair, stats, src_vecs, tgt_vecs);
      auto probs = forward_ternary(model, example_features(ex, model.transform));
      if (keep_edge(probs)) out.emplace(i, j);
    }
  }
  return out;
}

}  // namespace lexforge
