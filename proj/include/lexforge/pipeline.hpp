#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lexforge/alignmlp.hpp"
#include "lexforge/corpus.hpp"
#include "lexforge/demo.hpp"
#include "lexforge/embed.hpp"
#include "lexforge/eval.hpp"
#include "lexforge/induce.hpp"
#include "lexforge/lexicon.hpp"
#include "lexforge/mine.hpp"
#include "lexforge/nn.hpp"
#include "lexforge/simalign.hpp"
#include "lexforge/stats.hpp"
#include "lexforge/util.hpp"

namespace lexforge {

// ---------------------------------------------------------------------------
// provider construction
// ---------------------------------------------------------------------------

struct ProviderOptions {
  bool synthetic = false;
  std::uint64_t synthetic_seed = 13;
  int synthetic_dim = 64;
  std::string concept_map_path;  // optional, synthetic mode
  std::string src_embeddings;    // word-embedding text format
  std::string tgt_embeddings;
};

struct Providers {
  std::unique_ptr<EmbeddingProvider> src;
  std::unique_ptr<EmbeddingProvider> tgt;
};

inline Providers make_providers(const ProviderOptions& opts) {
  Providers p;
  if (opts.synthetic) {
    std::map<std::string, std::string> concepts;
    if (!opts.concept_map_path.empty()) concepts = load_concept_map(opts.concept_map_path);
    p.src = std::make_unique<SyntheticEmbedder>(opts.synthetic_seed, opts.synthetic_dim, concepts, "src");
    p.tgt = std::make_unique<SyntheticEmbedder>(opts.synthetic_seed, opts.synthetic_dim, concepts, "tgt");
  } else {
    if (opts.src_embeddings.empty() || opts.tgt_embeddings.empty())
      throw ValidationError("embedding files required (or use synthetic mode)");
    p.src = std::make_unique<FileEmbeddings>(FileEmbeddings::load(opts.src_embeddings));
    p.tgt = std::make_unique<FileEmbeddings>(FileEmbeddings::load(opts.tgt_embeddings));
  }
  return p;
}

// ---------------------------------------------------------------------------
// mining
// ---------------------------------------------------------------------------

struct MineOptions {
  int k = 4;
  double keep_fraction = 0.2;
  double min_score = 1.0;
  bool bidirectional = false;
  int threads = 1;
};

struct MineResult {
  Bitext bitext;  // sorted by (score desc, src id asc)
  std::size_t n_src = 0;
  std::size_t n_tgt = 0;
  std::size_t survivors = 0;           // pairs passing the min_score filter
  std::vector<double> score_quantiles;  // min, q25, median, q75, max of kept pairs
};

inline std::vector<Vector> embed_sentences(const std::vector<Sentence>& sentences, const EmbeddingProvider& provider,
                                           int threads) {
  std::vector<Vector> out(sentences.size());
  parallel_for(sentences.size(), threads,
               [&](std::size_t i) { out[i] = sentence_embedding(token_embeddings(provider, sentences[i])); });
  for (std::size_t i = 0; i < out.size(); ++i)
    if (norm(out[i]) == 0.0)
      throw ValidationError("sentence " + std::to_string(i) + " embeds to a zero vector; cosine retrieval undefined");
  return out;
}

inline MineResult run_mine(const std::vector<Sentence>& src_corpus, const std::vector<Sentence>& tgt_corpus,
                           const Providers& providers, const MineOptions& opts) {
  if (src_corpus.empty() || tgt_corpus.empty()) throw ValidationError("empty corpus");
  MineResult result;
  result.n_src = src_corpus.size();
  result.n_tgt = tgt_corpus.size();
  std::vector<Vector> src_vecs = embed_sentences(src_corpus, *providers.src, opts.threads);
  std::vector<Vector> tgt_vecs = embed_sentences(tgt_corpus, *providers.tgt, opts.threads);

  // count survivors separately so the report can show the filter effect
  std::vector<MinedPair> all_kept = mine_bitext(src_vecs, tgt_vecs, opts.k, 1.0, opts.min_score, opts.threads,
                                                opts.bidirectional);
  result.survivors = all_kept.size();
  std::size_t keep = detail::keep_count(opts.keep_fraction, all_kept.size());
  all_kept.resize(keep);

  result.bitext.reserve(all_kept.size());
  for (const MinedPair& p : all_kept) {
    BitextPair pair;
    pair.source = src_corpus[static_cast<std::size_t>(p.src_id)];
    pair.target = tgt_corpus[static_cast<std::size_t>(p.tgt_id)];
    pair.score = p.score;
    result.bitext.push_back(std::move(pair));
  }
  if (!result.bitext.empty()) {
    std::vector<double> scores;
    for (const BitextPair& p : result.bitext) scores.push_back(p.score);
    std::sort(scores.begin(), scores.end());
    auto quantile = [&](double q) { return scores[static_cast<std::size_t>(q * static_cast<double>(scores.size() - 1))]; };
    result.score_quantiles = {quantile(0.0), quantile(0.25), quantile(0.5), quantile(0.75), quantile(1.0)};
  }
  return result;
}

// ---------------------------------------------------------------------------
// alignment
// ---------------------------------------------------------------------------

enum class AlignAlgo { argmax, itermax };

struct AlignOptions {
  AlignAlgo algo = AlignAlgo::itermax;
  int iterations = 2;
  int threads = 1;
};

struct PairVectors {
  std::vector<std::vector<Vector>> src;
  std::vector<std::vector<Vector>> tgt;
};

inline PairVectors compute_token_vectors(const Bitext& bitext, const Providers& providers, int threads) {
  PairVectors out;
  out.src.resize(bitext.size());
  out.tgt.resize(bitext.size());
  parallel_for(bitext.size(), threads, [&](std::size_t p) {
    out.src[p] = token_embeddings(*providers.src, bitext[p].source);
    out.tgt[p] = token_embeddings(*providers.tgt, bitext[p].target);
  });
  return out;
}

// Token vectors taken from contextual JSONL files instead of a provider.
// Records must parallel the bitext and carry the same tokens; the comparison
// ignores case since bitext tokens are lowercased at load.
inline PairVectors contextual_token_vectors(const Bitext& bitext, const std::string& src_jsonl,
                                            const std::string& tgt_jsonl) {
  std::vector<ContextualSentence> src = load_contextual_jsonl(src_jsonl);
  std::vector<ContextualSentence> tgt = load_contextual_jsonl(tgt_jsonl);
  if (src.size() != bitext.size() || tgt.size() != bitext.size())
    throw ValidationError("contextual embeddings must have one record per bitext pair");
  auto lowered = [](const Sentence& s) {
    Sentence out = s;
    for (std::string& tok : out) tok = ascii_lower(tok);
    return out;
  };
  PairVectors out;
  out.src.resize(bitext.size());
  out.tgt.resize(bitext.size());
  for (std::size_t p = 0; p < bitext.size(); ++p) {
    if (lowered(src[p].tokens) != bitext[p].source || lowered(tgt[p].tokens) != bitext[p].target)
      throw ValidationError("contextual embeddings disagree with bitext tokens at pair " + std::to_string(p));
    out.src[p] = std::move(src[p].vectors);
    out.tgt[p] = std::move(tgt[p].vectors);
  }
  return out;
}

inline std::vector<Alignment> align_bitext(const Bitext& bitext, const PairVectors& vecs, AlignAlgo algo,
                                           int iterations, int threads) {
  std::vector<Alignment> out(bitext.size());
  parallel_for(bitext.size(), threads, [&](std::size_t p) {
    SimMatrix m = similarity_matrix(vecs.src[p], vecs.tgt[p]);
    out[p] = algo == AlignAlgo::argmax ? argmax_align(m) : itermax_align(m, iterations);
  });
  return out;
}

// ---------------------------------------------------------------------------
// induction
// ---------------------------------------------------------------------------

struct InduceOptions {
  double lambda = 20.0;
  AlignAlgo algo = AlignAlgo::itermax;
  int iterations = 2;
  CocMode coc_mode = CocMode::min_count;
  int threads = 1;
  // frequency features come from the bitext sides unless external corpora
  // are supplied here
  std::string freq_source_corpus;
  std::string freq_target_corpus;
};

inline void apply_frequency_overrides(StatsTable& stats, const InduceOptions& opts) {
  if (!opts.freq_source_corpus.empty()) stats.src_freq = count_frequencies(load_corpus(opts.freq_source_corpus));
  if (!opts.freq_target_corpus.empty()) stats.tgt_freq = count_frequencies(load_corpus(opts.freq_target_corpus));
}

struct UnsupResult {
  StatsTable stats;
  Lexicon lexicon;
};

inline UnsupResult run_induce_unsupervised(const Bitext& bitext, const Providers& providers,
                                           const InduceOptions& opts) {
  if (bitext.empty()) throw ValidationError("empty bitext");
  PairVectors vecs = compute_token_vectors(bitext, providers, opts.threads);
  std::vector<Alignment> alignments = align_bitext(bitext, vecs, opts.algo, opts.iterations, opts.threads);
  UnsupResult result;
  result.stats = accumulate_stats(bitext, alignments, opts.coc_mode, opts.threads);
  apply_frequency_overrides(result.stats, opts);
  result.lexicon = induce_unsupervised(result.stats, opts.lambda);
  return result;
}

struct WeakOptions {
  InduceOptions induce;
  TrainConfig train;
  TuneGrid grid = TuneGrid::defaults();
  std::size_t max_negatives = 0;  // 0 = keep all
  double dev_split = 0.0;         // fraction of the seed held out for tuning; 0 tunes on the full seed
  RecallMode recall_mode = RecallMode::per_source;

  WeakOptions() {
    // 50 full-batch Adam steps at lr 5e-4 cannot move the filter away from
    // its random init; the pipeline default trains in mini-batches for many
    // more steps at the same learning rate (still configurable)
    train.epochs = 600;
    train.batch_size = 256;
  }
};

struct WeakResult {
  StatsTable stats;
  MlpParams model;
  Thresholds thresholds;
  double tune_f1 = 0.0;
  Lexicon lexicon;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t dropped_seed_pairs = 0;
};

// Splits a lexicon into (kept, held_out) with held_fraction of entries in
// the second part; deterministic for a given seed.
inline std::pair<Lexicon, Lexicon> split_lexicon(const Lexicon& lex, double held_fraction, std::uint64_t seed) {
  std::vector<WordPair> pairs;
  for (const auto& [pair, score] : lex.entries) pairs.push_back(pair);
  SplitMix64 gen(combine_seed(seed, 0x5711));
  for (std::size_t i = pairs.size(); i > 1; --i) std::swap(pairs[i - 1], pairs[gen.below(i)]);
  std::size_t held = static_cast<std::size_t>(held_fraction * static_cast<double>(pairs.size()) + 0.5);
  held = std::min(held, pairs.size());
  std::pair<Lexicon, Lexicon> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    double score = lex.entries.at(p);
    if (i < pairs.size() - held)
      out.first.add(p.first, p.second, score);
    else
      out.second.add(p.first, p.second, score);
  }
  out.first.scored = lex.scored;
  out.second.scored = lex.scored;
  return out;
}

inline WeakResult run_induce_weak(const Bitext& bitext, const Providers& providers, const Lexicon& seed,
                                  const WeakOptions& opts) {
  if (bitext.empty()) throw ValidationError("empty bitext");
  if (seed.empty()) throw ValidationError("weak mode requires a non-empty seed lexicon");

  PairVectors vecs = compute_token_vectors(bitext, providers, opts.induce.threads);
  std::vector<Alignment> alignments =
      align_bitext(bitext, vecs, opts.induce.algo, opts.induce.iterations, opts.induce.threads);

  WeakResult result;
  result.stats = accumulate_stats(bitext, alignments, opts.induce.coc_mode, opts.induce.threads);
  apply_frequency_overrides(result.stats, opts.induce);

  Lexicon train_seed = seed;
  Lexicon tune_seed = seed;
  if (opts.dev_split > 0.0) {
    auto [kept, held] = split_lexicon(seed, opts.dev_split, opts.train.seed);
    if (!kept.empty() && !held.empty()) {
      train_seed = kept;
      tune_seed = held;
    }
  }

  TrainingSet ts = build_training_set(result.stats, train_seed, opts.max_negatives, opts.train.seed);
  result.positives = ts.positives.size();
  result.negatives = ts.negatives.size();
  result.dropped_seed_pairs = ts.dropped_seed_pairs;

  std::vector<TrainExample> examples;
  examples.reserve(ts.positives.size() + ts.negatives.size());
  auto to_example = [&](const WordPair& pair, int label) {
    PairStats ps = pair_stats(result.stats, pair, *providers.src, *providers.tgt);
    TrainExample ex;
    ex.counts = {ps.mat_one2one, ps.mat_many2one, ps.coc, ps.freq_src, ps.freq_tgt};
    ex.cos_sim = ps.cos_sim;
    ex.dot_sim = ps.dot_sim;
    ex.label = label;
    return ex;
  };
  for (const WordPair& p : ts.positives) examples.push_back(to_example(p, 1));
  for (const WordPair& p : ts.negatives) examples.push_back(to_example(p, 0));

  result.model = train(examples, Head::binary, opts.train);

  CandidateProbs probs = score_candidates(result.model, result.stats, *providers.src, *providers.tgt);
  TuneResult tuned = tune_thresholds(probs, tune_seed, opts.grid, opts.recall_mode);
  result.thresholds = tuned.thresholds;
  result.tune_f1 = tuned.f1;
  result.lexicon = infer_lexicon(probs, tuned.thresholds.delta, tuned.thresholds.n);
  return result;
}

// ---------------------------------------------------------------------------
// quality tiers
// ---------------------------------------------------------------------------

struct TierRow {
  int tier = 0;
  std::size_t pairs = 0;
  Prf metrics;
};

inline std::vector<TierRow> run_tiered_induction(const Bitext& sorted_bitext, const Providers& providers,
                                                 const Lexicon& gold, int n_tiers, const InduceOptions& opts,
                                                 RecallMode recall_mode = RecallMode::per_source) {
  std::vector<Bitext> tiers = tier_bitext(sorted_bitext, n_tiers);
  std::vector<TierRow> rows;
  for (std::size_t t = 0; t < tiers.size(); ++t) {
    TierRow row;
    row.tier = static_cast<int>(t) + 1;
    row.pairs = tiers[t].size();
    if (!tiers[t].empty()) {
      UnsupResult induced = run_induce_unsupervised(tiers[t], providers, opts);
      row.metrics = bli_f1(induced.lexicon, gold, recall_mode);
    }
    rows.push_back(row);
  }
  return rows;
}

// top-1 predictions by score for P@1: highest score per source, ties toward
// the lexicographically smaller target
inline std::map<std::string, std::string> top1_predictions(const Lexicon& pred) {
  std::map<std::string, std::pair<std::string, double>> best;
  for (const auto& [pair, score] : pred.entries) {
    auto it = best.find(pair.first);
    if (it == best.end() || score > it->second.second)
      best[pair.first] = {pair.second, score};
  }
  std::map<std::string, std::string> out;
  for (const auto& [src, entry] : best) out[src] = entry.first;
  return out;
}

}  // namespace lexforge
