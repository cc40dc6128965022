#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lexforge/corpus.hpp"
#include "lexforge/embed.hpp"
#include "lexforge/simalign.hpp"
#include "lexforge/util.hpp"

namespace lexforge {

struct PairCounts {
  std::int64_t mat_one2one = 0;
  std::int64_t mat_many2one = 0;
  std::int64_t coc = 0;
};

// How co-occurrence is counted per sentence pair: min of the two occurrence
// counts (keeps mat <= coc provable), or 1 per co-occurring sentence pair.
enum class CocMode { min_count, binary };

struct StatsTable {
  std::map<WordPair, PairCounts> pairs;
  FreqTable src_freq;
  FreqTable tgt_freq;

  // associative and commutative; sharded accumulation merges through here
  void merge(const StatsTable& other) {
    for (const auto& [key, counts] : other.pairs) {
      PairCounts& mine = pairs[key];
      mine.mat_one2one += counts.mat_one2one;
      mine.mat_many2one += counts.mat_many2one;
      mine.coc += counts.coc;
    }
    merge_frequencies(src_freq, other.src_freq);
    merge_frequencies(tgt_freq, other.tgt_freq);
  }
};

// One fully resolved feature row for a word-type pair.
struct PairStats {
  std::int64_t mat_one2one = 0;
  std::int64_t mat_many2one = 0;
  std::int64_t coc = 0;
  std::int64_t freq_src = 0;
  std::int64_t freq_tgt = 0;
  double cos_sim = 0.0;
  double dot_sim = 0.0;
};

// Partitions the edges of one alignment: an edge is one-to-one iff both its
// endpoints occur in exactly one edge, many-to-one otherwise.
inline std::pair<Alignment, Alignment> classify_edges(const Alignment& alignment) {
  std::map<int, int> src_degree;
  std::map<int, int> tgt_degree;
  for (const AlignEdge& e : alignment) {
    ++src_degree[e.first];
    ++tgt_degree[e.second];
  }
  Alignment one2one;
  Alignment many2one;
  for (const AlignEdge& e : alignment) {
    if (src_degree[e.first] == 1 && tgt_degree[e.second] == 1)
      one2one.insert(e);
    else
      many2one.insert(e);
  }
  return {one2one, many2one};
}

namespace detail {

inline void accumulate_one_pair(StatsTable& table, const BitextPair& pair, const Alignment& alignment,
                                CocMode coc_mode) {
  FreqTable src_counts;
  FreqTable tgt_counts;
  for (const std::string& tok : pair.source) ++src_counts[tok];
  for (const std::string& tok : pair.target) ++tgt_counts[tok];
  merge_frequencies(table.src_freq, src_counts);
  merge_frequencies(table.tgt_freq, tgt_counts);

  for (const auto& [s, cs] : src_counts)
    for (const auto& [t, ct] : tgt_counts)
      table.pairs[{s, t}].coc += coc_mode == CocMode::min_count ? std::min(cs, ct) : 1;

  auto [one2one, many2one] = classify_edges(alignment);
  auto edge_types = [&](const AlignEdge& e) -> WordPair {
    if (e.first < 0 || e.first >= static_cast<int>(pair.source.size()) || e.second < 0 ||
        e.second >= static_cast<int>(pair.target.size()))
      throw std::runtime_error("accumulate_stats: alignment edge out of sentence range");
    return {pair.source[static_cast<std::size_t>(e.first)], pair.target[static_cast<std::size_t>(e.second)]};
  };
  for (const AlignEdge& e : one2one) ++table.pairs[edge_types(e)].mat_one2one;
  for (const AlignEdge& e : many2one) ++table.pairs[edge_types(e)].mat_many2one;
}

}  // namespace detail

// Corpus-level aggregation: for every sentence pair, co-occurrence counts
// for all type pairs plus alignment-match counts split by edge class, and
// word frequencies of both bitext sides.
inline StatsTable accumulate_stats(const Bitext& bitext, const std::vector<Alignment>& alignments,
                                   CocMode coc_mode = CocMode::min_count, int threads = 1) {
  if (bitext.size() != alignments.size())
    throw std::runtime_error("accumulate_stats: bitext and alignment counts differ (" +
                             std::to_string(bitext.size()) + " vs " + std::to_string(alignments.size()) + ")");
  int workers = std::max(1, threads);
  if (workers == 1 || bitext.size() < 2) {
    StatsTable table;
    for (std::size_t p = 0; p < bitext.size(); ++p)
      detail::accumulate_one_pair(table, bitext[p], alignments[p], coc_mode);
    return table;
  }
  std::size_t shards = std::min<std::size_t>(static_cast<std::size_t>(workers), bitext.size());
  std::vector<StatsTable> partial(shards);
  std::size_t chunk = (bitext.size() + shards - 1) / shards;
  parallel_for(shards, workers, [&](std::size_t w) {
    std::size_t begin = w * chunk;
    std::size_t end = std::min(bitext.size(), begin + chunk);
    for (std::size_t p = begin; p < end; ++p)
      detail::accumulate_one_pair(partial[w], bitext[p], alignments[p], coc_mode);
  });
  StatsTable table = std::move(partial[0]);
  for (std::size_t w = 1; w < shards; ++w) table.merge(partial[w]);
  return table;
}

// Learnable positive offsets for the five counting features, stored as logs
// so that theta stays positive under unconstrained optimization. theta = 1
// at init, i.e. the plain smoothed log count.
struct FeatureTransform {
  static constexpr int kCountFeatures = 5;
  std::array<double, kCountFeatures> log_theta{0.0, 0.0, 0.0, 0.0, 0.0};

  double theta(int c) const { return std::exp(log_theta[static_cast<std::size_t>(c)]); }
};

using FeatureVector = std::array<double, 7>;

// [log(mat11+t1), log(matM1+t2), log(coc+t3), log(freq_src+t4),
//  log(freq_tgt+t5), cos_sim, dot_sim]
inline FeatureVector features(const PairStats& stats, const FeatureTransform& transform) {
  std::array<std::int64_t, FeatureTransform::kCountFeatures> counts{stats.mat_one2one, stats.mat_many2one, stats.coc,
                                                                    stats.freq_src, stats.freq_tgt};
  FeatureVector x{};
  for (int c = 0; c < FeatureTransform::kCountFeatures; ++c)
    x[static_cast<std::size_t>(c)] = std::log(static_cast<double>(counts[static_cast<std::size_t>(c)]) + transform.theta(c));
  x[5] = stats.cos_sim;
  x[6] = stats.dot_sim;
  return x;
}

// Resolves one word-type pair against the table: counts fall back to zero
// for unseen pairs, similarity features come from the providers'
// non-contextualized type vectors.
inline PairStats pair_stats(const StatsTable& table, const WordPair& pair, const EmbeddingProvider& src_provider,
                            const EmbeddingProvider& tgt_provider) {
  PairStats out;
  auto it = table.pairs.find(pair);
  if (it != table.pairs.end()) {
    out.mat_one2one = it->second.mat_one2one;
    out.mat_many2one = it->second.mat_many2one;
    out.coc = it->second.coc;
  }
  auto fs = table.src_freq.find(pair.first);
  if (fs != table.src_freq.end()) out.freq_src = fs->second;
  auto ft = table.tgt_freq.find(pair.second);
  if (ft != table.tgt_freq.end()) out.freq_tgt = ft->second;
  Vector vs = src_provider.token_vector(pair.first);
  Vector vt = tgt_provider.token_vector(pair.second);
  out.dot_sim = dot(vs, vt);
  // zero type vectors (possible in real embedding files) get cosine 0 so a
  // single degenerate word cannot abort a corpus-scale feature pass
  out.cos_sim = norm(vs) == 0.0 || norm(vt) == 0.0 ? 0.0 : cosine(vs, vt);
  return out;
}

// TSV dump: s<TAB>t<TAB>mat11<TAB>matM1<TAB>coc<TAB>fs<TAB>ft
inline void save_stats(const std::string& path, const StatsTable& table) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write stats file: " + path);
  for (const auto& [key, counts] : table.pairs) {
    std::int64_t fs = 0;
    std::int64_t ft = 0;
    auto fs_it = table.src_freq.find(key.first);
    if (fs_it != table.src_freq.end()) fs = fs_it->second;
    auto ft_it = table.tgt_freq.find(key.second);
    if (ft_it != table.tgt_freq.end()) ft = ft_it->second;
    out << key.first << '\t' << key.second << '\t' << counts.mat_one2one << '\t' << counts.mat_many2one << '\t'
        << counts.coc << '\t' << fs << '\t' << ft << '\n';
  }
}

}  // namespace lexforge
