#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lexforge/corpus.hpp"
#include "lexforge/lexicon.hpp"
#include "lexforge/util.hpp"

namespace lexforge {

// Synthetic cipher-lexicon fixture: two pseudoword vocabularies joined by a
// shared concept id per index. Paired sentences express the same concept
// multiset on both sides, so together with the synthetic embedder the whole
// pipeline can run offline against a known gold lexicon.
struct DemoConfig {
  int n_concepts = 200;
  int n_pairs = 500;        // planted parallel sentence pairs
  int n_distractors = 200;  // unpaired sentences per side
  int min_len = 5;
  int max_len = 12;
  int dim = 64;
  std::uint64_t seed = 13;
  double noise = 0.0;  // per-token probability of corrupting the target side
};

struct DemoFixture {
  std::vector<Sentence> src_corpus;  // shuffled: planted sources + distractors
  std::vector<Sentence> tgt_corpus;  // shuffled with a different permutation
  std::vector<std::string> src_vocab;
  std::vector<std::string> tgt_vocab;
  std::map<std::string, std::string> concept_map;  // token -> concept id, both sides
  Lexicon gold;                                    // planted cipher lexicon
};

namespace detail {

inline std::string pseudo_word(SplitMix64& gen, const std::string& consonants, const std::string& vowels) {
  int syllables = 2 + static_cast<int>(gen.below(2));
  std::string w;
  for (int s = 0; s < syllables; ++s) {
    w += consonants[static_cast<std::size_t>(gen.below(consonants.size()))];
    w += vowels[static_cast<std::size_t>(gen.below(vowels.size()))];
  }
  return w;
}

inline std::vector<std::string> pseudo_vocab(std::uint64_t seed, int count, const std::string& consonants,
                                             const std::string& vowels) {
  SplitMix64 gen(seed);
  std::set<std::string> used;
  std::vector<std::string> vocab;
  while (static_cast<int>(vocab.size()) < count) {
    std::string w = pseudo_word(gen, consonants, vowels);
    if (used.insert(w).second) vocab.push_back(w);
  }
  return vocab;
}

// concept index with a mild power-law bias toward low indices, so word
// frequencies spread out the way real corpora do
inline int biased_concept(SplitMix64& gen, int n_concepts) {
  double u = gen.uniform();
  int idx = static_cast<int>(static_cast<double>(n_concepts) * u * std::sqrt(u));
  return std::min(idx, n_concepts - 1);
}

template <typename T>
inline void seeded_shuffle(std::vector<T>& items, SplitMix64& gen) {
  for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[gen.below(i)]);
}

}  // namespace detail

inline DemoFixture make_demo_fixture(const DemoConfig& config) {
  if (config.n_concepts < 2 || config.n_pairs < 1) throw std::runtime_error("make_demo_fixture: fixture too small");
  if (config.min_len < 1 || config.max_len < config.min_len)
    throw std::runtime_error("make_demo_fixture: bad sentence length range");

  DemoFixture fx;
  fx.src_vocab = detail::pseudo_vocab(combine_seed(config.seed, 0x50c), config.n_concepts, "bdgklmnprst", "aeiou");
  fx.tgt_vocab = detail::pseudo_vocab(combine_seed(config.seed, 0x717), config.n_concepts, "cfhjqvwxyz", "aeiou");
  for (int c = 0; c < config.n_concepts; ++c) {
    std::string concept_id = "c" + std::to_string(c);
    fx.concept_map[fx.src_vocab[static_cast<std::size_t>(c)]] = concept_id;
    fx.concept_map[fx.tgt_vocab[static_cast<std::size_t>(c)]] = concept_id;
    fx.gold.add(fx.src_vocab[static_cast<std::size_t>(c)], fx.tgt_vocab[static_cast<std::size_t>(c)]);
  }

  SplitMix64 gen(combine_seed(config.seed, 0x5e27));
  auto sample_concepts = [&](int first_concept) {
    int len = config.min_len + static_cast<int>(gen.below(static_cast<std::uint64_t>(config.max_len - config.min_len + 1)));
    std::vector<int> concepts;
    concepts.reserve(static_cast<std::size_t>(len));
    if (first_concept >= 0) concepts.push_back(first_concept);
    while (static_cast<int>(concepts.size()) < len) concepts.push_back(detail::biased_concept(gen, config.n_concepts));
    return concepts;
  };

  std::vector<Sentence> src_planted;
  std::vector<Sentence> tgt_planted;
  for (int p = 0; p < config.n_pairs; ++p) {
    // round-robin first concept guarantees every gold entry occurs
    std::vector<int> concepts = sample_concepts(p % config.n_concepts);
    Sentence src;
    Sentence tgt;
    for (int c : concepts) src.push_back(fx.src_vocab[static_cast<std::size_t>(c)]);
    std::vector<int> tgt_concepts = concepts;
    detail::seeded_shuffle(tgt_concepts, gen);
    for (int c : tgt_concepts) {
      bool corrupt = config.noise > 0.0 && gen.uniform() < config.noise;
      int idx = corrupt ? static_cast<int>(gen.below(static_cast<std::uint64_t>(config.n_concepts))) : c;
      tgt.push_back(fx.tgt_vocab[static_cast<std::size_t>(idx)]);
    }
    src_planted.push_back(std::move(src));
    tgt_planted.push_back(std::move(tgt));
  }

  fx.src_corpus = src_planted;
  fx.tgt_corpus = tgt_planted;
  for (int d = 0; d < config.n_distractors; ++d) {
    std::vector<int> concepts = sample_concepts(-1);
    Sentence s;
    for (int c : concepts) s.push_back(fx.src_vocab[static_cast<std::size_t>(c)]);
    fx.src_corpus.push_back(std::move(s));
  }
  for (int d = 0; d < config.n_distractors; ++d) {
    std::vector<int> concepts = sample_concepts(-1);
    Sentence s;
    for (int c : concepts) s.push_back(fx.tgt_vocab[static_cast<std::size_t>(c)]);
    fx.tgt_corpus.push_back(std::move(s));
  }

  SplitMix64 shuffle_src(combine_seed(config.seed, 0xf1e1d));
  SplitMix64 shuffle_tgt(combine_seed(config.seed, 0xf1e2d));
  detail::seeded_shuffle(fx.src_corpus, shuffle_src);
  detail::seeded_shuffle(fx.tgt_corpus, shuffle_tgt);
  return fx;
}

// Pre-scored bitext whose alignment quality degrades tier by tier: block b
// carries corruption rate noise_rates[b] on the target side and strictly
// descending scores, so score-based tiering reproduces the blocks.
inline Bitext make_tiered_bitext(const DemoConfig& config, const std::vector<double>& noise_rates,
                                 int pairs_per_tier, const DemoFixture& fx) {
  if (noise_rates.empty() || pairs_per_tier < 1) throw std::runtime_error("make_tiered_bitext: bad tier shape");
  SplitMix64 gen(combine_seed(config.seed, 0x7133));
  Bitext out;
  double score = 4.0;
  for (std::size_t tier = 0; tier < noise_rates.size(); ++tier) {
    for (int p = 0; p < pairs_per_tier; ++p) {
      int len = config.min_len + static_cast<int>(gen.below(static_cast<std::uint64_t>(config.max_len - config.min_len + 1)));
      std::vector<int> concepts;
      int anchor = (static_cast<int>(tier) * pairs_per_tier + p) % config.n_concepts;
      concepts.push_back(anchor);
      while (static_cast<int>(concepts.size()) < len) concepts.push_back(detail::biased_concept(gen, config.n_concepts));
      BitextPair pair;
      for (int c : concepts) pair.source.push_back(fx.src_vocab[static_cast<std::size_t>(c)]);
      std::vector<int> tgt_concepts = concepts;
      detail::seeded_shuffle(tgt_concepts, gen);
      for (int c : tgt_concepts) {
        bool corrupt = gen.uniform() < noise_rates[tier];
        int idx = corrupt ? static_cast<int>(gen.below(static_cast<std::uint64_t>(config.n_concepts))) : c;
        pair.target.push_back(fx.tgt_vocab[static_cast<std::size_t>(idx)]);
      }
      pair.score = score;
      score -= 1e-4;
      out.push_back(std::move(pair));
    }
  }
  return out;
}

}  // namespace lexforge
