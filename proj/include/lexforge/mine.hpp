#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "lexforge/corpus.hpp"
#include "lexforge/embed.hpp"
#include "lexforge/util.hpp"

namespace lexforge {

struct Neighbor {
  int id;
  double cos;
};

// sorted by (cosine desc, id asc)
using NeighborList = std::vector<Neighbor>;

struct MinedPair {
  int src_id;
  int tgt_id;
  double score;
};

// Exact top-k by cosine similarity over the whole index. k larger than the
// index returns the full sorted list.
inline NeighborList knn(const Vector& query, const std::vector<Vector>& index, int k) {
  if (k < 1) throw std::runtime_error("knn: k must be >= 1");
  if (index.empty()) throw std::runtime_error("knn: empty index");
  NeighborList all;
  all.reserve(index.size());
  for (std::size_t j = 0; j < index.size(); ++j)
    all.push_back(Neighbor{static_cast<int>(j), cosine(query, index[j])});
  auto better = [](const Neighbor& a, const Neighbor& b) {
    if (a.cos != b.cos) return a.cos > b.cos;
    return a.id < b.id;
  };
  std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(k), all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(), better);
  all.resize(keep);
  return all;
}

namespace detail {

// floor with a small epsilon so keep_fraction values like 0.3 * 10 land on
// the intended integer; clamped to [0, n]
inline std::size_t keep_count(double keep_fraction, std::size_t n) {
  if (keep_fraction <= 0.0) return 0;
  if (keep_fraction >= 1.0) return n;
  double raw = keep_fraction * static_cast<double>(n);
  return std::min(n, static_cast<std::size_t>(std::floor(raw + 1e-9)));
}

inline double margin_denominator(const NeighborList& nn_s, const NeighborList& nn_t, int k) {
  double denom = 0.0;
  for (const Neighbor& n : nn_s) denom += n.cos;
  for (const Neighbor& n : nn_t) denom += n.cos;
  return denom / (2.0 * static_cast<double>(k));
}

}  // namespace detail

// Margin score of a candidate pair: cosine normalized by the average
// similarity to each side's k nearest neighbors. nn_s holds the neighbors of
// s in the target space, nn_t the neighbors of t in the source space; both
// sums are divided by 2k even when fewer than k neighbors exist.
inline double margin_score(const Vector& s, const Vector& t, const NeighborList& nn_s, const NeighborList& nn_t,
                           int k) {
  if (k < 1) throw std::runtime_error("margin_score: k must be >= 1");
  double denom = detail::margin_denominator(nn_s, nn_t, k);
  if (denom == 0.0) throw std::runtime_error("margin_score: zero denominator (degenerate geometry)");
  return cosine(s, t) / denom;
}

// Margin-based mining: each source sentence retrieves its best target among
// its k nearest neighbors, pairs scoring <= min_score are dropped, and only
// the top keep_fraction of the survivors (by score) is kept. With
// bidirectional set, the same retrieval also runs target->source and the
// union is filtered once.
inline std::vector<MinedPair> mine_bitext(const std::vector<Vector>& src_vectors,
                                          const std::vector<Vector>& tgt_vectors, int k,
                                          double keep_fraction = 0.2, double min_score = 1.0, int threads = 1,
                                          bool bidirectional = false) {
  if (src_vectors.empty() || tgt_vectors.empty()) throw ValidationError("mine_bitext: empty corpus");

  std::vector<NeighborList> nn_src(src_vectors.size());  // neighbors of each source in target space
  std::vector<NeighborList> nn_tgt(tgt_vectors.size());  // neighbors of each target in source space
  parallel_for(src_vectors.size(), threads, [&](std::size_t i) { nn_src[i] = knn(src_vectors[i], tgt_vectors, k); });
  parallel_for(tgt_vectors.size(), threads, [&](std::size_t j) { nn_tgt[j] = knn(tgt_vectors[j], src_vectors, k); });

  std::vector<MinedPair> forward(src_vectors.size());
  parallel_for(src_vectors.size(), threads, [&](std::size_t i) {
    MinedPair best{static_cast<int>(i), -1, 0.0};
    for (const Neighbor& cand : nn_src[i]) {
      // rows with degenerate geometry carry no signal; skip instead of erroring
      if (detail::margin_denominator(nn_src[i], nn_tgt[static_cast<std::size_t>(cand.id)], k) == 0.0) continue;
      double score = margin_score(src_vectors[i], tgt_vectors[static_cast<std::size_t>(cand.id)], nn_src[i],
                                  nn_tgt[static_cast<std::size_t>(cand.id)], k);
      if (best.tgt_id < 0 || score > best.score || (score == best.score && cand.id < best.tgt_id)) {
        best.tgt_id = cand.id;
        best.score = score;
      }
    }
    forward[i] = best;
  });

  std::vector<MinedPair> survivors;
  for (const MinedPair& p : forward)
    if (p.tgt_id >= 0 && p.score > min_score) survivors.push_back(p);

  if (bidirectional) {
    std::vector<MinedPair> backward(tgt_vectors.size());
    parallel_for(tgt_vectors.size(), threads, [&](std::size_t j) {
      MinedPair best{-1, static_cast<int>(j), 0.0};
      for (const Neighbor& cand : nn_tgt[j]) {
        if (detail::margin_denominator(nn_src[static_cast<std::size_t>(cand.id)], nn_tgt[j], k) == 0.0) continue;
        double score = margin_score(src_vectors[static_cast<std::size_t>(cand.id)], tgt_vectors[j],
                                    nn_src[static_cast<std::size_t>(cand.id)], nn_tgt[j], k);
        if (best.src_id < 0 || score > best.score || (score == best.score && cand.id < best.src_id)) {
          best.src_id = cand.id;
          best.score = score;
        }
      }
      backward[j] = best;
    });
    for (const MinedPair& p : backward) {
      if (p.src_id < 0 || p.score <= min_score) continue;
      bool duplicate = false;
      for (const MinedPair& q : survivors)
        if (q.src_id == p.src_id && q.tgt_id == p.tgt_id) {
          duplicate = true;
          break;
        }
      if (!duplicate) survivors.push_back(p);
    }
  }

  std::sort(survivors.begin(), survivors.end(), [](const MinedPair& a, const MinedPair& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.src_id != b.src_id) return a.src_id < b.src_id;
    return a.tgt_id < b.tgt_id;
  });
  survivors.resize(detail::keep_count(keep_fraction, survivors.size()));
  return survivors;
}

// Sizes of n_tiers contiguous partitions of n items, remainder spread to the
// earliest tiers: 11 items over 5 tiers -> [3,2,2,2,2].
inline std::vector<std::size_t> tier_sizes(std::size_t n, int n_tiers) {
  if (n_tiers < 1) throw std::runtime_error("tier_sizes: n_tiers must be >= 1");
  std::vector<std::size_t> sizes(static_cast<std::size_t>(n_tiers));
  std::size_t base = n / static_cast<std::size_t>(n_tiers);
  std::size_t rem = n % static_cast<std::size_t>(n_tiers);
  for (std::size_t t = 0; t < sizes.size(); ++t) sizes[t] = base + (t < rem ? 1 : 0);
  return sizes;
}

// Splits score-sorted pairs into equal contiguous quality tiers, tier 1
// holding the highest scores. Input must already be sorted by descending
// score.
inline std::vector<Bitext> tier_bitext(const Bitext& pairs, int n_tiers = 5) {
  for (std::size_t i = 1; i < pairs.size(); ++i)
    if (pairs[i - 1].score < pairs[i].score)
      throw std::runtime_error("tier_bitext: pairs must be sorted by descending score");
  std::vector<std::size_t> sizes = tier_sizes(pairs.size(), n_tiers);
  std::vector<Bitext> tiers(sizes.size());
  std::size_t offset = 0;
  for (std::size_t t = 0; t < sizes.size(); ++t) {
    tiers[t].assign(pairs.begin() + static_cast<std::ptrdiff_t>(offset),
                    pairs.begin() + static_cast<std::ptrdiff_t>(offset + sizes[t]));
    offset += sizes[t];
  }
  return tiers;
}

}  // namespace lexforge
