// lexforge command-line pipeline: mine bitext from monolingual corpora,
// align it, induce and filter bilingual lexicons, and score the results.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lexforge/pipeline.hpp"

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void write_report(const std::string& path, const json& report) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw lexforge::ValidationError("cannot write report: " + path);
  out << report.dump(2) << '\n';
}

struct ProviderCli {
  lexforge::ProviderOptions opts;

  void attach(CLI::App* cmd) {
    cmd->add_flag("--synthetic", opts.synthetic, "use the deterministic synthetic embedder");
    cmd->add_option("--synthetic-seed", opts.synthetic_seed, "seed for the synthetic embedder");
    cmd->add_option("--dim", opts.synthetic_dim, "synthetic embedding dimension");
    cmd->add_option("--concept-map", opts.concept_map_path, "token<TAB>concept file for the synthetic embedder");
    cmd->add_option("--emb-src", opts.src_embeddings, "source word embeddings (text format)");
    cmd->add_option("--emb-tgt", opts.tgt_embeddings, "target word embeddings (text format)");
  }
};

// --config is handled before CLI11 sees the argument list: each key=value
// line becomes --key=value unless the same option was given explicitly, so
// command-line flags always win. The registered option below only provides
// the help text.
void add_config_option(CLI::App* cmd) {
  static std::string sink;
  cmd->add_option("--config", sink, "plain key=value config file; explicit flags override it");
}

std::string strip_ws(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  std::size_t end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

void expand_config_args(std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw lexforge::ValidationError("cannot open config file: " + path);

  std::set<std::string> given;
  for (const std::string& a : args)
    if (a.rfind("--", 0) == 0) given.insert(a.substr(0, a.find('=')));

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_ws(line);
    if (line.empty() || line[0] == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos || eq == 0)
      throw lexforge::ValidationError(path + ": line " + std::to_string(lineno) + ": expected key=value");
    std::string key = strip_ws(line.substr(0, eq));
    std::string value = strip_ws(line.substr(eq + 1));
    if (key.empty())
      throw lexforge::ValidationError(path + ": line " + std::to_string(lineno) + ": empty key");
    if (given.count("--" + key)) continue;
    args.push_back("--" + key + "=" + value);
  }
}

lexforge::AlignAlgo parse_algo(const std::string& name) {
  if (name == "argmax") return lexforge::AlignAlgo::argmax;
  if (name == "itermax") return lexforge::AlignAlgo::itermax;
  throw lexforge::ValidationError("unknown alignment algorithm '" + name + "' (use argmax or itermax)");
}

lexforge::CocMode parse_coc_mode(const std::string& name) {
  if (name == "min") return lexforge::CocMode::min_count;
  if (name == "binary") return lexforge::CocMode::binary;
  throw lexforge::ValidationError("unknown coc mode '" + name + "' (use min or binary)");
}

lexforge::RecallMode parse_recall(const std::string& name) {
  if (name == "per-source") return lexforge::RecallMode::per_source;
  if (name == "per-pair") return lexforge::RecallMode::per_pair;
  throw lexforge::ValidationError("unknown recall mode '" + name + "' (use per-source or per-pair)");
}

int threads_or_default(int threads) { return threads < 1 ? 1 : threads; }

// ---------------------------------------------------------------------------
// mine
// ---------------------------------------------------------------------------

struct MineCmd {
  std::string src_path, tgt_path, out_path, report_path;
  ProviderCli provider;
  lexforge::MineOptions opts;

  void run() {
    auto start = Clock::now();
    std::vector<lexforge::Sentence> src = lexforge::load_corpus(src_path);
    std::vector<lexforge::Sentence> tgt = lexforge::load_corpus(tgt_path);
    if (src.empty() || tgt.empty()) throw lexforge::ValidationError("empty corpus");
    lexforge::Providers providers = lexforge::make_providers(provider.opts);
    opts.threads = threads_or_default(opts.threads);
    lexforge::MineResult result = lexforge::run_mine(src, tgt, providers, opts);
    lexforge::save_bitext(out_path, result.bitext);

    std::cout << "mined " << result.bitext.size() << " pairs (" << result.survivors << " above min-score) from "
              << result.n_src << " x " << result.n_tgt << " sentences\n";
    if (!result.score_quantiles.empty()) {
      std::cout << "score quantiles (min/q25/median/q75/max):";
      for (double q : result.score_quantiles) std::cout << ' ' << q;
      std::cout << '\n';
    }
    json report = {{"command", "mine"},
                   {"source_sentences", result.n_src},
                   {"target_sentences", result.n_tgt},
                   {"survivors", result.survivors},
                   {"retained_pairs", result.bitext.size()},
                   {"score_quantiles", result.score_quantiles},
                   {"k", opts.k},
                   {"keep_fraction", opts.keep_fraction},
                   {"min_score", opts.min_score},
                   {"output", out_path},
                   {"elapsed_ms", elapsed_ms(start)}};
    write_report(report_path, report);
  }
};

// ---------------------------------------------------------------------------
// align
// ---------------------------------------------------------------------------

struct AlignCmd {
  std::string bitext_path, out_path, algo = "itermax";
  std::string contextual_src, contextual_tgt;
  ProviderCli provider;
  int iterations = 2;
  int threads = 1;

  void run() {
    lexforge::Bitext bitext = lexforge::load_bitext(bitext_path);
    if (bitext.empty()) throw lexforge::ValidationError("empty bitext");
    lexforge::PairVectors vecs;
    if (!contextual_src.empty() || !contextual_tgt.empty()) {
      if (contextual_src.empty() || contextual_tgt.empty())
        throw lexforge::ValidationError("contextual embeddings must be given for both sides");
      vecs = lexforge::contextual_token_vectors(bitext, contextual_src, contextual_tgt);
    } else {
      lexforge::Providers providers = lexforge::make_providers(provider.opts);
      vecs = lexforge::compute_token_vectors(bitext, providers, threads_or_default(threads));
    }
    std::vector<lexforge::Alignment> alignments =
        lexforge::align_bitext(bitext, vecs, parse_algo(algo), iterations, threads_or_default(threads));
    lexforge::save_pharaoh(out_path, alignments);
    std::size_t edges = 0;
    for (const auto& a : alignments) edges += a.size();
    std::cout << "aligned " << alignments.size() << " pairs, " << edges << " edges (" << algo << ")\n";
  }
};

// ---------------------------------------------------------------------------
// induce
// ---------------------------------------------------------------------------

struct InduceCmd {
  std::string bitext_path, out_path, mode = "unsup", seed_lexicon_path, checkpoint_path, report_path;
  std::string stats_out;
  std::string algo = "itermax", coc_mode = "min";
  ProviderCli provider;
  lexforge::InduceOptions opts;
  lexforge::TrainConfig train;
  double dev_split = 0.0;
  std::size_t max_negatives = 0;
  int n_max = 5;
  int epochs = 600;
  int batch_size = 256;

  void run() {
    auto start = Clock::now();
    lexforge::Bitext bitext = lexforge::load_bitext(bitext_path);
    if (bitext.empty()) throw lexforge::ValidationError("empty bitext");
    lexforge::Providers providers = lexforge::make_providers(provider.opts);
    opts.algo = parse_algo(algo);
    opts.coc_mode = parse_coc_mode(coc_mode);
    opts.threads = threads_or_default(opts.threads);

    json report = {{"command", "induce"}, {"mode", mode}, {"bitext", bitext_path}, {"pairs", bitext.size()}};
    if (mode == "unsup") {
      lexforge::UnsupResult result = lexforge::run_induce_unsupervised(bitext, providers, opts);
      lexforge::save_lexicon(out_path, result.lexicon);
      if (!stats_out.empty()) lexforge::save_stats(stats_out, result.stats);
      std::cout << "induced " << result.lexicon.size() << " entries (unsupervised, lambda=" << opts.lambda << ")\n";
      report["entries"] = result.lexicon.size();
      report["lambda"] = opts.lambda;
      report["stat_pairs"] = result.stats.pairs.size();
    } else if (mode == "weak") {
      if (seed_lexicon_path.empty()) throw lexforge::ValidationError("weak mode requires --seed-lexicon");
      lexforge::Lexicon seed = lexforge::load_lexicon(seed_lexicon_path);
      lexforge::WeakOptions weak;
      weak.induce = opts;
      weak.train = train;
      weak.train.epochs = epochs;
      weak.train.batch_size = batch_size;
      weak.max_negatives = max_negatives;
      weak.dev_split = dev_split;
      weak.grid = lexforge::TuneGrid::defaults();
      weak.grid.ns.clear();
      for (int n = 1; n <= n_max; ++n) weak.grid.ns.push_back(n);
      lexforge::WeakResult result = lexforge::run_induce_weak(bitext, providers, seed, weak);
      lexforge::save_lexicon(out_path, result.lexicon);
      if (!stats_out.empty()) lexforge::save_stats(stats_out, result.stats);
      if (!checkpoint_path.empty()) lexforge::save_mlp(checkpoint_path, result.model);
      std::cout << "induced " << result.lexicon.size() << " entries (weakly supervised)\n"
                << "tuned delta=" << result.thresholds.delta << " n=" << result.thresholds.n
                << " (seed F1=" << result.tune_f1 << ")\n";
      report["entries"] = result.lexicon.size();
      report["delta"] = result.thresholds.delta;
      report["n"] = result.thresholds.n;
      report["seed_f1"] = result.tune_f1;
      report["positives"] = result.positives;
      report["negatives"] = result.negatives;
      report["dropped_seed_pairs"] = result.dropped_seed_pairs;
      report["epochs"] = epochs;
    } else {
      throw lexforge::ValidationError("unknown mode '" + mode + "' (use unsup or weak)");
    }
    report["output"] = out_path;
    report["elapsed_ms"] = elapsed_ms(start);
    write_report(report_path, report);
  }
};

// ---------------------------------------------------------------------------
// train-filter
// ---------------------------------------------------------------------------

struct TrainFilterCmd {
  std::string bitext_path, seed_lexicon_path, out_path, report_path;
  std::string algo = "itermax", coc_mode = "min";
  ProviderCli provider;
  lexforge::InduceOptions opts;
  lexforge::TrainConfig train;
  double dev_split = 0.0;
  std::size_t max_negatives = 0;
  int epochs = 600;
  int batch_size = 256;

  void run() {
    auto start = Clock::now();
    lexforge::Bitext bitext = lexforge::load_bitext(bitext_path);
    if (bitext.empty()) throw lexforge::ValidationError("empty bitext");
    lexforge::Providers providers = lexforge::make_providers(provider.opts);
    lexforge::Lexicon seed = lexforge::load_lexicon(seed_lexicon_path);
    lexforge::WeakOptions weak;
    weak.induce = opts;
    weak.induce.algo = parse_algo(algo);
    weak.induce.coc_mode = parse_coc_mode(coc_mode);
    weak.induce.threads = threads_or_default(opts.threads);
    weak.train = train;
    weak.train.epochs = epochs;
    weak.train.batch_size = batch_size;
    weak.max_negatives = max_negatives;
    weak.dev_split = dev_split;
    lexforge::WeakResult result = lexforge::run_induce_weak(bitext, providers, seed, weak);
    lexforge::save_mlp(out_path, result.model);
    std::cout << "trained filter on " << result.positives << " positives / " << result.negatives << " negatives\n"
              << "tuned delta=" << result.thresholds.delta << " n=" << result.thresholds.n
              << " (seed F1=" << result.tune_f1 << ")\n";
    json report = {{"command", "train-filter"},
                   {"positives", result.positives},
                   {"negatives", result.negatives},
                   {"dropped_seed_pairs", result.dropped_seed_pairs},
                   {"delta", result.thresholds.delta},
                   {"n", result.thresholds.n},
                   {"seed_f1", result.tune_f1},
                   {"epochs", epochs},
                   {"checkpoint", out_path},
                   {"elapsed_ms", elapsed_ms(start)}};
    write_report(report_path, report);
  }
};

// ---------------------------------------------------------------------------
// align-mlp
// ---------------------------------------------------------------------------

struct AlignMlpCmd {
  std::string bitext_path, out_path, checkpoint_path, report_path;
  std::string contextual_src, contextual_tgt;
  ProviderCli provider;
  lexforge::TrainConfig train;
  int iterations = 2;
  int threads = 1;
  int epochs = 400;
  int batch_size = 256;
  double label0_ratio = 0.0;

  void run() {
    auto start = Clock::now();
    lexforge::Bitext bitext = lexforge::load_bitext(bitext_path);
    if (bitext.empty()) throw lexforge::ValidationError("empty bitext");
    lexforge::PairVectors vecs;
    lexforge::Providers providers;
    if (!contextual_src.empty() || !contextual_tgt.empty()) {
      if (contextual_src.empty() || contextual_tgt.empty())
        throw lexforge::ValidationError("contextual embeddings must be given for both sides");
      vecs = lexforge::contextual_token_vectors(bitext, contextual_src, contextual_tgt);
    } else {
      providers = lexforge::make_providers(provider.opts);
      vecs = lexforge::compute_token_vectors(bitext, providers, threads_or_default(threads));
    }
    int workers = threads_or_default(threads);
    std::vector<lexforge::Alignment> amax =
        lexforge::align_bitext(bitext, vecs, lexforge::AlignAlgo::argmax, iterations, workers);
    std::vector<lexforge::Alignment> imax =
        lexforge::align_bitext(bitext, vecs, lexforge::AlignAlgo::itermax, iterations, workers);
    lexforge::StatsTable stats = lexforge::accumulate_stats(bitext, imax, lexforge::CocMode::min_count, workers);

    lexforge::TrainConfig config = train;
    config.epochs = epochs;
    config.batch_size = batch_size;
    lexforge::MlpParams model =
        lexforge::train_alignment_classifier(bitext, amax, imax, stats, vecs.src, vecs.tgt, config, label0_ratio);

    std::vector<lexforge::Alignment> refined(bitext.size());
    lexforge::parallel_for(bitext.size(), workers, [&](std::size_t p) {
      refined[p] = lexforge::infer_alignment(model, bitext[p], stats, vecs.src[p], vecs.tgt[p]);
    });
    lexforge::save_pharaoh(out_path, refined);
    if (!checkpoint_path.empty()) lexforge::save_mlp(checkpoint_path, model);

    std::size_t edges = 0;
    for (const auto& a : refined) edges += a.size();
    std::cout << "align-mlp: " << refined.size() << " pairs, " << edges << " edges\n";
    json report = {{"command", "align-mlp"}, {"pairs", bitext.size()},  {"edges", edges},
                   {"epochs", epochs},       {"output", out_path},      {"checkpoint", checkpoint_path},
                   {"elapsed_ms", elapsed_ms(start)}};
    write_report(report_path, report);
  }
};

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalCmd {
  std::string metric, pred_path, gold_path, json_path;
  std::string recall = "per-source";

  void run() {
    json report = {{"command", "eval"}, {"metric", metric}, {"pred", pred_path}, {"gold", gold_path}};
    char line[160];
    if (metric == "bli-f1") {
      lexforge::Lexicon pred = lexforge::load_lexicon(pred_path);
      lexforge::Lexicon gold = lexforge::load_lexicon(gold_path);
      lexforge::Prf prf = lexforge::bli_f1(pred, gold, parse_recall(recall));
      std::snprintf(line, sizeof(line), "precision %.4f  recall %.4f  f1 %.4f", prf.precision, prf.recall, prf.f1);
      std::cout << line << '\n';
      report["precision"] = prf.precision;
      report["recall"] = prf.recall;
      report["f1"] = prf.f1;
    } else if (metric == "p1") {
      lexforge::Lexicon pred = lexforge::load_lexicon(pred_path);
      lexforge::Lexicon gold = lexforge::load_lexicon(gold_path);
      double p1 = lexforge::p_at_1(lexforge::top1_predictions(pred), gold);
      std::snprintf(line, sizeof(line), "p@1 %.4f", p1);
      std::cout << line << '\n';
      report["p_at_1"] = p1;
    } else if (metric == "aer") {
      std::vector<lexforge::Alignment> pred = lexforge::load_pharaoh(pred_path);
      std::vector<lexforge::GoldAlignment> gold = lexforge::load_gold_alignments(gold_path);
      if (gold.size() < pred.size()) gold.resize(pred.size());
      if (pred.size() != gold.size())
        throw lexforge::ValidationError("prediction has " + std::to_string(pred.size()) + " pairs but gold has " +
                                        std::to_string(gold.size()));
      double score = lexforge::corpus_aer(pred, gold);
      std::snprintf(line, sizeof(line), "aer %.4f", score);
      std::cout << line << '\n';
      report["aer"] = score;
    } else {
      throw lexforge::ValidationError("unknown metric '" + metric + "' (use bli-f1, p1 or aer)");
    }
    std::cout << report.dump(2) << '\n';
    write_report(json_path, report);
  }
};

// ---------------------------------------------------------------------------
// tier
// ---------------------------------------------------------------------------

struct TierCmd {
  std::string bitext_path, gold_path, out_path;
  std::string algo = "itermax";
  ProviderCli provider;
  lexforge::InduceOptions opts;
  int n_tiers = 5;

  void run() {
    lexforge::Bitext bitext = lexforge::load_bitext(bitext_path);
    if (bitext.empty()) throw lexforge::ValidationError("empty bitext");
    lexforge::Lexicon gold = lexforge::load_lexicon(gold_path);
    lexforge::Providers providers = lexforge::make_providers(provider.opts);
    opts.algo = parse_algo(algo);
    opts.threads = threads_or_default(opts.threads);
    std::vector<lexforge::TierRow> rows = lexforge::run_tiered_induction(bitext, providers, gold, n_tiers, opts);

    std::cout << "tier  pairs  precision  recall  f1\n";
    json tiers = json::array();
    for (const lexforge::TierRow& row : rows) {
      char line[120];
      std::snprintf(line, sizeof(line), "%4d  %5zu  %9.4f  %6.4f  %6.4f", row.tier, row.pairs, row.metrics.precision,
                    row.metrics.recall, row.metrics.f1);
      std::cout << line << '\n';
      tiers.push_back({{"tier", row.tier},
                       {"pairs", row.pairs},
                       {"precision", row.metrics.precision},
                       {"recall", row.metrics.recall},
                       {"f1", row.metrics.f1}});
    }
    // no timings here: the per-tier report is a primary artifact and must be
    // byte-identical across reruns
    json report = {{"command", "tier"}, {"tiers", tiers}};
    write_report(out_path, report);
  }
};

// ---------------------------------------------------------------------------
// demo
// ---------------------------------------------------------------------------

struct DemoCmd {
  std::string out_dir;
  lexforge::DemoConfig config;
  double seed_fraction = 0.3;
  double keep_fraction = 1.0;
  int k = 4;
  int threads = 1;
  int epochs = 600;

  void run() {
    auto start = Clock::now();
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto path = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };

    lexforge::DemoFixture fx = lexforge::make_demo_fixture(config);
    lexforge::save_corpus(path("src.txt"), fx.src_corpus);
    lexforge::save_corpus(path("tgt.txt"), fx.tgt_corpus);
    lexforge::save_concept_map(path("concept_map.tsv"), fx.concept_map);
    lexforge::save_lexicon(path("gold_lexicon.tsv"), fx.gold);
    auto [seed, holdout] = lexforge::split_lexicon(fx.gold, 1.0 - seed_fraction, config.seed);
    lexforge::save_lexicon(path("seed_lexicon.tsv"), seed);
    lexforge::save_lexicon(path("holdout_lexicon.tsv"), holdout);

    lexforge::ProviderOptions popts;
    popts.synthetic = true;
    popts.synthetic_seed = config.seed;
    popts.synthetic_dim = config.dim;
    popts.concept_map_path = path("concept_map.tsv");
    lexforge::Providers providers = lexforge::make_providers(popts);

    lexforge::MineOptions mine_opts;
    mine_opts.k = k;
    mine_opts.keep_fraction = keep_fraction;
    mine_opts.threads = threads_or_default(threads);
    lexforge::MineResult mined = lexforge::run_mine(fx.src_corpus, fx.tgt_corpus, providers, mine_opts);
    lexforge::save_bitext(path("mined_bitext.tsv"), mined.bitext);

    lexforge::InduceOptions iopts;
    iopts.threads = mine_opts.threads;
    lexforge::UnsupResult unsup = lexforge::run_induce_unsupervised(mined.bitext, providers, iopts);
    lexforge::save_lexicon(path("lexicon_unsup.tsv"), unsup.lexicon);
    lexforge::Prf unsup_gold = lexforge::bli_f1(unsup.lexicon, fx.gold);
    lexforge::Prf unsup_holdout = lexforge::bli_f1(unsup.lexicon, holdout);

    lexforge::WeakOptions wopts;
    wopts.induce = iopts;
    wopts.train.epochs = epochs;
    wopts.train.seed = config.seed;
    lexforge::WeakResult weak = lexforge::run_induce_weak(mined.bitext, providers, seed, wopts);
    lexforge::save_lexicon(path("lexicon_weak.tsv"), weak.lexicon);
    lexforge::save_mlp(path("filter_checkpoint.json"), weak.model);
    lexforge::Prf weak_holdout = lexforge::bli_f1(weak.lexicon, holdout);

    char line[160];
    std::cout << "demo fixture: " << fx.gold.size() << " gold pairs, " << fx.src_corpus.size() << "+"
              << fx.tgt_corpus.size() << " sentences\n";
    std::cout << "mined pairs: " << mined.bitext.size() << " (" << mined.survivors << " survivors)\n";
    std::snprintf(line, sizeof(line), "unsupervised F1 vs gold:    %.4f", unsup_gold.f1);
    std::cout << line << '\n';
    std::snprintf(line, sizeof(line), "unsupervised F1 vs holdout: %.4f", unsup_holdout.f1);
    std::cout << line << '\n';
    std::snprintf(line, sizeof(line), "weak F1 vs holdout:         %.4f (delta=%.2f n=%d)", weak_holdout.f1,
                  weak.thresholds.delta, weak.thresholds.n);
    std::cout << line << '\n';

    json report = {{"command", "demo"},
                   {"gold_pairs", fx.gold.size()},
                   {"mined_pairs", mined.bitext.size()},
                   {"survivors", mined.survivors},
                   {"unsup_f1_gold", unsup_gold.f1},
                   {"unsup_f1_holdout", unsup_holdout.f1},
                   {"weak_f1_holdout", weak_holdout.f1},
                   {"delta", weak.thresholds.delta},
                   {"n", weak.thresholds.n},
                   {"elapsed_ms", elapsed_ms(start)}};
    write_report(path("report.json"), report);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lexforge: bilingual lexicon induction via bitext mining and word alignment"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  MineCmd mine;
  CLI::App* mine_cmd = app.add_subcommand("mine", "mine bitext from two monolingual corpora");
  add_config_option(mine_cmd);
  mine_cmd->add_option("--src", mine.src_path, "source monolingual corpus, one sentence per line")->required();
  mine_cmd->add_option("--tgt", mine.tgt_path, "target monolingual corpus")->required();
  mine_cmd->add_option("--out", mine.out_path, "output bitext TSV")->required();
  mine_cmd->add_option("--k", mine.opts.k, "nearest neighbors for the margin score");
  mine_cmd->add_option("--keep-fraction", mine.opts.keep_fraction, "fraction of surviving pairs to keep");
  mine_cmd->add_option("--min-score", mine.opts.min_score, "margin score filter");
  mine_cmd->add_flag("--bidirectional", mine.opts.bidirectional, "also retrieve target->source and union");
  mine_cmd->add_option("--threads", mine.opts.threads, "worker threads")->envname("LEXFORGE_THREADS");
  mine_cmd->add_option("--report", mine.report_path, "write a JSON run report");
  mine.provider.attach(mine_cmd);

  AlignCmd align;
  CLI::App* align_cmd = app.add_subcommand("align", "word-align a bitext file");
  add_config_option(align_cmd);
  align_cmd->add_option("--bitext", align.bitext_path, "input bitext TSV")->required();
  align_cmd->add_option("--out", align.out_path, "output alignments (pharaoh format)")->required();
  align_cmd->add_option("--algo", align.algo, "argmax or itermax");
  align_cmd->add_option("--iterations", align.iterations, "itermax iterations");
  align_cmd->add_option("--contextual-src", align.contextual_src, "source contextual embeddings (JSONL)");
  align_cmd->add_option("--contextual-tgt", align.contextual_tgt, "target contextual embeddings (JSONL)");
  align_cmd->add_option("--threads", align.threads, "worker threads")->envname("LEXFORGE_THREADS");
  align.provider.attach(align_cmd);

  InduceCmd induce;
  CLI::App* induce_cmd = app.add_subcommand("induce", "induce a lexicon from a bitext file");
  add_config_option(induce_cmd);
  induce_cmd->add_option("--bitext", induce.bitext_path, "input bitext TSV")->required();
  induce_cmd->add_option("--out", induce.out_path, "output lexicon TSV")->required();
  induce_cmd->add_option("--mode", induce.mode, "unsup or weak");
  induce_cmd->add_option("--lambda", induce.opts.lambda, "matched-ratio smoothing");
  induce_cmd->add_option("--algo", induce.algo, "alignment algorithm feeding the stats (argmax or itermax)");
  induce_cmd->add_option("--iterations", induce.opts.iterations, "itermax iterations");
  induce_cmd->add_option("--coc", induce.coc_mode, "co-occurrence counting: min or binary");
  induce_cmd->add_option("--stats-out", induce.stats_out, "also dump the pair statistics TSV");
  induce_cmd->add_option("--freq-src-corpus", induce.opts.freq_source_corpus,
                         "take source word frequencies from this corpus instead of the bitext");
  induce_cmd->add_option("--freq-tgt-corpus", induce.opts.freq_target_corpus,
                         "take target word frequencies from this corpus instead of the bitext");
  induce_cmd->add_option("--seed-lexicon", induce.seed_lexicon_path, "seed lexicon TSV (weak mode)");
  induce_cmd->add_option("--epochs", induce.epochs, "filter training epochs (weak mode)");
  induce_cmd->add_option("--lr", induce.train.learning_rate, "filter learning rate");
  induce_cmd->add_option("--batch-size", induce.batch_size, "filter batch size (0 = auto full batch)");
  induce_cmd->add_option("--train-seed", induce.train.seed, "training seed");
  induce_cmd->add_option("--dev-split", induce.dev_split, "fraction of the seed held out for threshold tuning");
  induce_cmd->add_option("--max-negatives", induce.max_negatives, "subsample negatives to this many (0 = all)");
  induce_cmd->add_option("--n-max", induce.n_max, "largest n in the tuning grid");
  induce_cmd->add_option("--checkpoint", induce.checkpoint_path, "write the trained filter (weak mode)");
  induce_cmd->add_option("--threads", induce.opts.threads, "worker threads")->envname("LEXFORGE_THREADS");
  induce_cmd->add_option("--report", induce.report_path, "write a JSON run report");
  induce.provider.attach(induce_cmd);

  TrainFilterCmd train_filter;
  CLI::App* tf_cmd = app.add_subcommand("train-filter", "train the binary lexicon filter and save a checkpoint");
  add_config_option(tf_cmd);
  tf_cmd->add_option("--bitext", train_filter.bitext_path, "input bitext TSV")->required();
  tf_cmd->add_option("--seed-lexicon", train_filter.seed_lexicon_path, "seed lexicon TSV")->required();
  tf_cmd->add_option("--out", train_filter.out_path, "output checkpoint JSON")->required();
  tf_cmd->add_option("--algo", train_filter.algo, "alignment algorithm (argmax or itermax)");
  tf_cmd->add_option("--coc", train_filter.coc_mode, "co-occurrence counting: min or binary");
  tf_cmd->add_option("--epochs", train_filter.epochs, "training epochs");
  tf_cmd->add_option("--lr", train_filter.train.learning_rate, "learning rate");
  tf_cmd->add_option("--batch-size", train_filter.batch_size, "batch size (0 = auto full batch)");
  tf_cmd->add_option("--train-seed", train_filter.train.seed, "training seed");
  tf_cmd->add_option("--dev-split", train_filter.dev_split, "fraction of the seed held out for tuning");
  tf_cmd->add_option("--max-negatives", train_filter.max_negatives, "subsample negatives (0 = all)");
  tf_cmd->add_option("--threads", train_filter.opts.threads, "worker threads")->envname("LEXFORGE_THREADS");
  tf_cmd->add_option("--report", train_filter.report_path, "write a JSON run report");
  train_filter.provider.attach(tf_cmd);

  AlignMlpCmd align_mlp;
  CLI::App* am_cmd = app.add_subcommand("align-mlp", "train the ternary alignment classifier and realign");
  add_config_option(am_cmd);
  am_cmd->add_option("--bitext", align_mlp.bitext_path, "input bitext TSV")->required();
  am_cmd->add_option("--out", align_mlp.out_path, "output alignments (pharaoh format)")->required();
  am_cmd->add_option("--checkpoint", align_mlp.checkpoint_path, "write the trained classifier");
  am_cmd->add_option("--iterations", align_mlp.iterations, "itermax iterations");
  am_cmd->add_option("--epochs", align_mlp.epochs, "training epochs");
  am_cmd->add_option("--lr", align_mlp.train.learning_rate, "learning rate");
  am_cmd->add_option("--batch-size", align_mlp.batch_size, "batch size (0 = auto full batch)");
  am_cmd->add_option("--train-seed", align_mlp.train.seed, "training seed");
  am_cmd->add_option("--label0-ratio", align_mlp.label0_ratio,
                     "subsample label-0 pairs to this ratio against labels > 0 (0 = keep all)");
  am_cmd->add_option("--contextual-src", align_mlp.contextual_src, "source contextual embeddings (JSONL)");
  am_cmd->add_option("--contextual-tgt", align_mlp.contextual_tgt, "target contextual embeddings (JSONL)");
  am_cmd->add_option("--threads", align_mlp.threads, "worker threads")->envname("LEXFORGE_THREADS");
  am_cmd->add_option("--report", align_mlp.report_path, "write a JSON run report");
  align_mlp.provider.attach(am_cmd);

  EvalCmd eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "score predictions against gold");
  add_config_option(eval_cmd);
  eval_cmd->add_option("--metric", eval.metric, "bli-f1, p1 or aer")->required();
  eval_cmd->add_option("--pred", eval.pred_path, "predicted lexicon TSV or pharaoh alignments")->required();
  eval_cmd->add_option("--gold", eval.gold_path, "gold lexicon TSV or gold alignment file")->required();
  eval_cmd->add_option("--recall", eval.recall, "bli-f1 recall convention: per-source or per-pair");
  eval_cmd->add_option("--json", eval.json_path, "also write the JSON report to this path");

  TierCmd tier;
  CLI::App* tier_cmd = app.add_subcommand("tier", "split mined bitext into quality tiers and induce per tier");
  add_config_option(tier_cmd);
  tier_cmd->add_option("--bitext", tier.bitext_path, "mined bitext TSV, sorted by descending score")->required();
  tier_cmd->add_option("--gold", tier.gold_path, "gold lexicon TSV")->required();
  tier_cmd->add_option("--tiers", tier.n_tiers, "number of tiers");
  tier_cmd->add_option("--lambda", tier.opts.lambda, "matched-ratio smoothing");
  tier_cmd->add_option("--algo", tier.algo, "alignment algorithm (argmax or itermax)");
  tier_cmd->add_option("--threads", tier.opts.threads, "worker threads")->envname("LEXFORGE_THREADS");
  tier_cmd->add_option("--out", tier.out_path, "write the per-tier JSON report");
  tier.provider.attach(tier_cmd);

  DemoCmd demo;
  CLI::App* demo_cmd = app.add_subcommand("demo", "generate the synthetic fixture and run the full pipeline");
  add_config_option(demo_cmd);
  demo_cmd->add_option("--out-dir", demo.out_dir, "directory for fixture files and outputs")->required();
  demo_cmd->add_option("--concepts", demo.config.n_concepts, "concept vocabulary size");
  demo_cmd->add_option("--pairs", demo.config.n_pairs, "planted parallel sentence pairs");
  demo_cmd->add_option("--distractors", demo.config.n_distractors, "unpaired sentences per side");
  demo_cmd->add_option("--dim", demo.config.dim, "synthetic embedding dimension");
  demo_cmd->add_option("--seed", demo.config.seed, "fixture and training seed");
  demo_cmd->add_option("--noise", demo.config.noise, "target-side corruption rate");
  demo_cmd->add_option("--seed-fraction", demo.seed_fraction, "fraction of gold used as the weak seed");
  demo_cmd->add_option("--keep-fraction", demo.keep_fraction, "mining keep fraction");
  demo_cmd->add_option("--k", demo.k, "mining nearest neighbors");
  demo_cmd->add_option("--epochs", demo.epochs, "filter training epochs");
  demo_cmd->add_option("--threads", demo.threads, "worker threads")->envname("LEXFORGE_THREADS");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    expand_config_args(args);
    std::reverse(args.begin(), args.end());  // CLI11 vector parse expects reversed args
    app.parse(std::move(args));
    if (mine_cmd->parsed()) mine.run();
    if (align_cmd->parsed()) align.run();
    if (induce_cmd->parsed()) induce.run();
    if (tf_cmd->parsed()) train_filter.run();
    if (am_cmd->parsed()) align_mlp.run();
    if (eval_cmd->parsed()) eval.run();
    if (tier_cmd->parsed()) tier.run();
    if (demo_cmd->parsed()) demo.run();
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const lexforge::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
