// Acceptance suite: one pass/fail line per criterion. Exercises the library
// end to end and drives the installed CLI binary for the determinism checks.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lexforge/pipeline.hpp"

#ifndef LEXFORGE_CLI_PATH
#define LEXFORGE_CLI_PATH "lexforge"
#endif

using namespace lexforge;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void criterion(const std::string& name, const std::function<bool(std::string&)>& body) {
  auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream line;
  line << (ok ? "PASS" : "FAIL") << "  " << name << "  (" << secs << " s)";
  if (!detail.empty()) line << "  [" << detail << "]";
  std::cout << line.str() << std::endl;
  if (!ok) ++g_failures;
}

double elapsed_s(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Vector random_unit(std::mt19937& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(static_cast<std::size_t>(dim));
  double n2 = 0.0;
  for (double& x : v) {
    x = gauss(rng);
    n2 += x * x;
  }
  for (double& x : v) x /= std::sqrt(n2);
  return v;
}

NeighborList knn_oracle(const Vector& query, const std::vector<Vector>& index, int k) {
  NeighborList all;
  for (std::size_t j = 0; j < index.size(); ++j) all.push_back({static_cast<int>(j), cosine(query, index[j])});
  std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.cos != b.cos) return a.cos > b.cos;
    return a.id < b.id;
  });
  if (all.size() > static_cast<std::size_t>(k)) all.resize(static_cast<std::size_t>(k));
  return all;
}

// literal Eq-style transcription: cosine over the averaged neighborhoods
double margin_oracle(std::size_t si, std::size_t ti, const std::vector<Vector>& src, const std::vector<Vector>& tgt,
                     int k) {
  NeighborList nn_of_s = knn_oracle(src[si], tgt, k);
  NeighborList nn_of_t = knn_oracle(tgt[ti], src, k);
  double denom = 0.0;
  for (const Neighbor& n : nn_of_s) denom += cosine(src[si], tgt[static_cast<std::size_t>(n.id)]) / (2.0 * k);
  for (const Neighbor& n : nn_of_t) denom += cosine(src[static_cast<std::size_t>(n.id)], tgt[ti]) / (2.0 * k);
  return cosine(src[si], tgt[ti]) / denom;
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<missing:" + path + ">";
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

bool run_cli(const std::string& args) {
  std::string cmd = std::string(LEXFORGE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str()) == 0;
}

struct ScratchDir {
  fs::path path;
  explicit ScratchDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("lexforge_accept_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

// ---------------------------------------------------------------------------

bool formula_fidelity(std::string& detail) {
  auto start = std::chrono::steady_clock::now();
  bool ok = true;
  ok &= matched_ratio(1, 1, 20.0) == 1.0 / 21.0;

  Vector v{1, 0};
  for (int k : {1, 2, 4}) {
    NeighborList nn(static_cast<std::size_t>(k), Neighbor{0, 1.0});
    ok &= margin_score(v, v, nn, nn, k) == 1.0;
  }

  ok &= keep_edge({0.1, 0.2, 0.7});
  ok &= !keep_edge({0.5, 0.5, 0.0});

  double secs = elapsed_s(start);
  if (secs >= 1.0) {
    detail = "runtime " + std::to_string(secs) + " s exceeds 1 s";
    return false;
  }
  return ok;
}

bool oracle_equivalence(std::string& detail) {
  auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(4242);

  // knn vs full sort
  for (int round = 0; round < 100; ++round) {
    int dim = 3 + static_cast<int>(rng() % 6);
    int n = 5 + static_cast<int>(rng() % 40);
    std::vector<Vector> index;
    for (int i = 0; i < n; ++i) index.push_back(random_unit(rng, dim));
    Vector q = random_unit(rng, dim);
    int k = 1 + static_cast<int>(rng() % 8);
    NeighborList got = knn(q, index, k);
    NeighborList want = knn_oracle(q, index, k);
    if (got.size() != want.size()) {
      detail = "knn size mismatch";
      return false;
    }
    for (std::size_t i = 0; i < got.size(); ++i)
      if (got[i].id != want[i].id || got[i].cos != want[i].cos) {
        detail = "knn disagrees with full sort";
        return false;
      }
  }

  // margin vs the literal transcription
  for (int round = 0; round < 100; ++round) {
    std::vector<Vector> src;
    std::vector<Vector> tgt;
    for (int i = 0; i < 6; ++i) src.push_back(random_unit(rng, 5));
    for (int i = 0; i < 6; ++i) tgt.push_back(random_unit(rng, 5));
    std::size_t si = rng() % 6;
    std::size_t ti = rng() % 6;
    const int k = 2;
    double got = margin_score(src[si], tgt[ti], knn(src[si], tgt, k), knn(tgt[ti], src, k), k);
    if (std::abs(got - margin_oracle(si, ti, src, tgt, k)) > 1e-12) {
      detail = "margin score deviates from the transcription";
      return false;
    }
  }

  // accumulate_stats vs a nested-loop recount
  for (int round = 0; round < 100; ++round) {
    Bitext bt;
    std::vector<Alignment> alignments;
    int pairs = 5 + static_cast<int>(rng() % 15);
    for (int p = 0; p < pairs; ++p) {
      BitextPair pair;
      int ls = 1 + static_cast<int>(rng() % 5);
      int lt = 1 + static_cast<int>(rng() % 5);
      for (int i = 0; i < ls; ++i) pair.source.push_back("s" + std::to_string(rng() % 5));
      for (int j = 0; j < lt; ++j) pair.target.push_back("t" + std::to_string(rng() % 5));
      Alignment a;
      for (unsigned e = 0; e < rng() % 4; ++e)
        a.emplace(static_cast<int>(rng() % static_cast<unsigned>(ls)), static_cast<int>(rng() % static_cast<unsigned>(lt)));
      bt.push_back(pair);
      alignments.push_back(a);
    }
    StatsTable got = accumulate_stats(bt, alignments);
    // recount
    StatsTable want;
    for (std::size_t p = 0; p < bt.size(); ++p) {
      for (const std::string& tok : bt[p].source) ++want.src_freq[tok];
      for (const std::string& tok : bt[p].target) ++want.tgt_freq[tok];
      std::set<std::string> src_types(bt[p].source.begin(), bt[p].source.end());
      std::set<std::string> tgt_types(bt[p].target.begin(), bt[p].target.end());
      for (const std::string& s : src_types)
        for (const std::string& t : tgt_types) {
          std::int64_t cs = 0;
          std::int64_t ct = 0;
          for (const std::string& x : bt[p].source) cs += x == s;
          for (const std::string& x : bt[p].target) ct += x == t;
          want.pairs[{s, t}].coc += std::min(cs, ct);
        }
      for (const AlignEdge& e : alignments[p]) {
        int di = 0;
        int dj = 0;
        for (const AlignEdge& f : alignments[p]) {
          di += f.first == e.first;
          dj += f.second == e.second;
        }
        WordPair key{bt[p].source[static_cast<std::size_t>(e.first)], bt[p].target[static_cast<std::size_t>(e.second)]};
        if (di == 1 && dj == 1)
          ++want.pairs[key].mat_one2one;
        else
          ++want.pairs[key].mat_many2one;
      }
    }
    if (got.src_freq != want.src_freq || got.tgt_freq != want.tgt_freq || got.pairs.size() != want.pairs.size()) {
      detail = "stats recount mismatch";
      return false;
    }
    for (const auto& [key, counts] : want.pairs) {
      const PairCounts& g = got.pairs.at(key);
      if (g.mat_one2one != counts.mat_one2one || g.mat_many2one != counts.mat_many2one || g.coc != counts.coc) {
        detail = "stats recount mismatch";
        return false;
      }
    }
  }

  // infer_lexicon vs filter-sort-truncate
  std::uniform_real_distribution<double> prob(0.0, 1.0);
  for (int round = 0; round < 100; ++round) {
    CandidateProbs probs;
    int sources = 1 + static_cast<int>(rng() % 5);
    for (int s = 0; s < sources; ++s) {
      std::vector<std::pair<std::string, double>> cands;
      int targets = 1 + static_cast<int>(rng() % 8);
      for (int t = 0; t < targets; ++t) cands.emplace_back("t" + std::to_string(t), prob(rng));
      std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
      });
      probs["s" + std::to_string(s)] = cands;
    }
    double delta = 0.05 * static_cast<double>(1 + rng() % 19);
    int n = 1 + static_cast<int>(rng() % 5);
    Lexicon got = infer_lexicon(probs, delta, n);
    Lexicon want;
    for (const auto& [src, cands] : probs) {
      std::vector<std::pair<std::string, double>> kept;
      for (const auto& c : cands)
        if (c.second >= delta) kept.push_back(c);
      std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
      });
      if (kept.size() > static_cast<std::size_t>(n)) kept.resize(static_cast<std::size_t>(n));
      for (const auto& c : kept) want.add(src, c.first, c.second);
    }
    std::set<WordPair> got_keys;
    std::set<WordPair> want_keys;
    for (const auto& [k, v] : got.entries) got_keys.insert(k);
    for (const auto& [k, v] : want.entries) want_keys.insert(k);
    if (got_keys != want_keys) {
      detail = "infer_lexicon deviates from the oracle";
      return false;
    }
  }

  // aer and bli_f1 vs hand formulas
  for (int round = 0; round < 100; ++round) {
    GoldAlignment gold;
    Alignment pred;
    for (int e = 0; e < 8; ++e) {
      AlignEdge edge{static_cast<int>(rng() % 4), static_cast<int>(rng() % 4)};
      int kind = static_cast<int>(rng() % 3);
      if (kind == 0) {
        gold.sure.insert(edge);
        gold.possible.insert(edge);
      } else if (kind == 1) {
        gold.possible.insert(edge);
      }
      if (rng() % 2) pred.insert(edge);
    }
    std::size_t a_s = 0;
    std::size_t a_p = 0;
    for (const AlignEdge& e : pred) {
      a_s += gold.sure.count(e);
      a_p += gold.possible.count(e);
    }
    double want = pred.empty() && gold.sure.empty()
                      ? 0.0
                      : 1.0 - static_cast<double>(a_s + a_p) / static_cast<double>(pred.size() + gold.sure.size());
    if (std::abs(aer(pred, gold) - want) > 1e-12) {
      detail = "aer deviates from the formula";
      return false;
    }

    Lexicon glex;
    Lexicon plex;
    for (int i = 0; i < 6; ++i) {
      glex.add("s" + std::to_string(rng() % 4), "t" + std::to_string(rng() % 4));
      if (rng() % 2) plex.add("s" + std::to_string(rng() % 5), "t" + std::to_string(rng() % 5));
    }
    std::set<std::string> gold_sources;
    for (const auto& [pair, sc] : glex.entries) gold_sources.insert(pair.first);
    std::size_t restricted = 0;
    std::size_t hits = 0;
    std::set<std::string> recalled;
    for (const auto& [pair, sc] : plex.entries) {
      if (!gold_sources.count(pair.first)) continue;
      ++restricted;
      if (glex.entries.count(pair)) {
        ++hits;
        recalled.insert(pair.first);
      }
    }
    double wp = restricted ? static_cast<double>(hits) / static_cast<double>(restricted) : 0.0;
    double wr = static_cast<double>(recalled.size()) / static_cast<double>(gold_sources.size());
    double wf = wp + wr > 0 ? 2 * wp * wr / (wp + wr) : 0.0;
    Prf prf = bli_f1(plex, glex);
    if (std::abs(prf.precision - wp) > 1e-12 || std::abs(prf.recall - wr) > 1e-12 || std::abs(prf.f1 - wf) > 1e-12) {
      detail = "bli_f1 deviates from the hand formula";
      return false;
    }
  }

  double secs = elapsed_s(start);
  if (secs >= 30.0) {
    detail = "runtime " + std::to_string(secs) + " s exceeds 30 s";
    return false;
  }
  return true;
}

bool alignment_invariants(std::string& detail) {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int round = 0; round < 100; ++round) {
    int rows = 1 + static_cast<int>(rng() % 6);
    int cols = 1 + static_cast<int>(rng() % 6);
    SimMatrix m(rows, cols);
    for (double& v : m.data) v = dist(rng);
    Alignment amax = argmax_align(m);
    Alignment imax = itermax_align(m, 2);
    for (const AlignEdge& e : amax)
      if (!imax.count(e)) {
        detail = "argmax not a subset of itermax";
        return false;
      }
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        int label = gold_label(i, j, amax, imax);
        if (amax.count({i, j}) && label == 1) {
          detail = "label 1 assigned to an argmax member";
          return false;
        }
      }
    SimMatrix t = m;
    for (double& v : t.data) v = 2.5 * v + 0.125;
    if (argmax_align(t) != amax || itermax_align(t, 2) != imax) {
      detail = "alignment not invariant under positive affine transform";
      return false;
    }
  }
  return true;
}

bool gradient_checks(std::string& detail) {
  auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(90210);
  std::uniform_real_distribution<double> sim(-1.0, 1.0);
  std::uniform_real_distribution<double> logt(-0.4, 0.4);
  const double h = 1e-5;
  double worst = 0.0;

  for (int config = 0; config < 20; ++config) {
    Head head = config % 2 == 0 ? Head::binary : Head::ternary;
    MlpParams p = init_mlp(head, rng());
    for (double& lt : p.transform.log_theta) lt = logt(rng);
    std::vector<TrainExample> batch;
    for (int i = 0; i < 4; ++i) {
      TrainExample ex;
      for (auto& c : ex.counts) c = static_cast<std::int64_t>(rng() % 20);
      ex.cos_sim = sim(rng);
      ex.dot_sim = sim(rng);
      ex.label = static_cast<int>(rng() % (head == Head::binary ? 2 : 3));
      batch.push_back(ex);
    }
    auto [loss, g] = loss_and_gradients(p, batch, head);
    (void)loss;

    auto fd = [&](double* slot) {
      double orig = *slot;
      *slot = orig + h;
      double up = loss_and_gradients(p, batch, head).first;
      *slot = orig - h;
      double down = loss_and_gradients(p, batch, head).first;
      *slot = orig;
      return (up - down) / (2.0 * h);
    };
    auto rel = [](double a, double f) {
      double diff = std::abs(a - f);
      if (diff <= 1e-12) return 0.0;
      return diff / std::max(std::abs(a) + std::abs(f), 1e-6);
    };
    auto check = [&](double* block, const double* grad, std::size_t len) {
      for (std::size_t i = 0; i < len; ++i) worst = std::max(worst, rel(grad[i], fd(block + i)));
    };
    check(p.w1.data(), g.w1.data(), p.w1.size());
    check(p.b1.data(), g.b1.data(), p.b1.size());
    if (head == Head::binary) {
      check(p.w2.data(), g.w2.data(), p.w2.size());
      check(&p.b2, &g.b2, 1);
    } else {
      check(p.w2t.data(), g.w2t.data(), p.w2t.size());
      check(p.b2t.data(), g.b2t.data(), p.b2t.size());
    }
    check(p.transform.log_theta.data(), g.log_theta.data(), p.transform.log_theta.size());
  }

  double secs = elapsed_s(start);
  detail = "max rel err " + std::to_string(worst);
  if (secs >= 10.0) {
    detail += ", runtime " + std::to_string(secs) + " s exceeds 10 s";
    return false;
  }
  return worst < 1e-4;
}

bool synthetic_recovery(std::string& detail) {
  auto start = std::chrono::steady_clock::now();

  DemoConfig config;
  config.n_concepts = 200;
  config.n_pairs = 500;
  config.n_distractors = 200;  // 400 distractors in total
  config.dim = 64;
  config.seed = 13;
  config.noise = 0.3;
  DemoFixture fx = make_demo_fixture(config);

  Providers providers;
  providers.src = std::make_unique<SyntheticEmbedder>(config.seed, config.dim, fx.concept_map, "src");
  providers.tgt = std::make_unique<SyntheticEmbedder>(config.seed, config.dim, fx.concept_map, "tgt");

  MineOptions mine_opts;
  mine_opts.keep_fraction = 1.0;
  mine_opts.threads = 2;
  MineResult mined = run_mine(fx.src_corpus, fx.tgt_corpus, providers, mine_opts);

  InduceOptions iopts;
  iopts.threads = 2;
  UnsupResult unsup = run_induce_unsupervised(mined.bitext, providers, iopts);
  double unsup_f1 = bli_f1(unsup.lexicon, fx.gold).f1;

  auto [seed_lex, holdout] = split_lexicon(fx.gold, 0.7, config.seed);
  double unsup_holdout = bli_f1(unsup.lexicon, holdout).f1;

  WeakOptions wopts;
  wopts.induce = iopts;
  wopts.train.seed = config.seed;
  WeakResult weak = run_induce_weak(mined.bitext, providers, seed_lex, wopts);
  double weak_holdout = bli_f1(weak.lexicon, holdout).f1;

  double secs = elapsed_s(start);
  std::ostringstream d;
  d << "mined " << mined.bitext.size() << ", unsup F1 " << unsup_f1 << ", holdout unsup " << unsup_holdout
    << " vs weak " << weak_holdout << ", " << secs << " s";
  detail = d.str();
  if (secs >= 60.0) return false;
  return unsup_f1 >= 0.90 && weak_holdout >= unsup_holdout;
}

bool tier_trend(std::string& detail) {
  DemoConfig config;
  config.n_concepts = 60;
  config.n_pairs = 1;
  config.n_distractors = 0;
  config.dim = 64;
  config.seed = 13;
  DemoFixture fx = make_demo_fixture(config);
  Providers providers;
  providers.src = std::make_unique<SyntheticEmbedder>(config.seed, config.dim, fx.concept_map, "src");
  providers.tgt = std::make_unique<SyntheticEmbedder>(config.seed, config.dim, fx.concept_map, "tgt");

  Bitext tiered = make_tiered_bitext(config, {0.0, 0.25, 0.5, 0.75, 0.95}, 60, fx);
  InduceOptions iopts;
  iopts.threads = 2;
  std::vector<TierRow> rows = run_tiered_induction(tiered, providers, fx.gold, 5, iopts);
  std::ostringstream d;
  d << "per-tier F1:";
  for (const TierRow& row : rows) d << ' ' << row.metrics.f1;
  detail = d.str();
  if (rows.size() != 5) return false;
  for (std::size_t t = 1; t < rows.size(); ++t)
    if (rows[t - 1].metrics.f1 < rows[t].metrics.f1) return false;
  return true;
}

bool cli_determinism(std::string& detail) {
  ScratchDir scratch("cli");
  std::string d1 = scratch.file("demo1");
  std::string d2 = scratch.file("demo2");
  std::string d4 = scratch.file("demo4");

  std::string demo_args = "--concepts 40 --pairs 80 --distractors 40 --dim 48 --seed 13 --epochs 300";
  if (!run_cli("demo --out-dir " + d1 + " " + demo_args + " --threads 1") ||
      !run_cli("demo --out-dir " + d2 + " " + demo_args + " --threads 1") ||
      !run_cli("demo --out-dir " + d4 + " " + demo_args + " --threads 4")) {
    detail = "demo subcommand failed";
    return false;
  }
  const std::vector<std::string> demo_artifacts = {
      "src.txt",        "tgt.txt",           "concept_map.tsv",  "gold_lexicon.tsv",
      "seed_lexicon.tsv", "holdout_lexicon.tsv", "mined_bitext.tsv", "lexicon_unsup.tsv",
      "lexicon_weak.tsv", "filter_checkpoint.json"};
  for (const std::string& name : demo_artifacts) {
    std::string a = read_bytes(d1 + "/" + name);
    if (a.empty() || a.rfind("<missing:", 0) == 0) {
      detail = "demo artifact missing or empty: " + name;
      return false;
    }
    if (a != read_bytes(d2 + "/" + name) || a != read_bytes(d4 + "/" + name)) {
      detail = "demo artifact differs: " + name;
      return false;
    }
  }

  std::string fixture = d1;
  std::string prov = " --synthetic --synthetic-seed 13 --dim 48 --concept-map " + fixture + "/concept_map.tsv";

  // mine
  for (int v = 0; v < 3; ++v) {
    std::string out = scratch.file("mine" + std::to_string(v) + ".tsv");
    std::string threads = v == 2 ? "4" : "1";
    if (!run_cli("mine --src " + fixture + "/src.txt --tgt " + fixture + "/tgt.txt --out " + out +
                 " --keep-fraction 1.0 --threads " + threads + prov)) {
      detail = "mine subcommand failed";
      return false;
    }
  }
  std::string mined = read_bytes(scratch.file("mine0.tsv"));
  if (mined != read_bytes(scratch.file("mine1.tsv")) || mined != read_bytes(scratch.file("mine2.tsv"))) {
    detail = "mine artifact differs";
    return false;
  }
  std::string bitext = scratch.file("mine0.tsv");

  // align
  for (int v = 0; v < 3; ++v) {
    std::string out = scratch.file("align" + std::to_string(v) + ".txt");
    std::string threads = v == 2 ? "4" : "1";
    if (!run_cli("align --bitext " + bitext + " --out " + out + " --algo itermax --threads " + threads + prov)) {
      detail = "align subcommand failed";
      return false;
    }
  }
  std::string aligned = read_bytes(scratch.file("align0.txt"));
  if (aligned != read_bytes(scratch.file("align1.txt")) || aligned != read_bytes(scratch.file("align2.txt"))) {
    detail = "align artifact differs";
    return false;
  }

  // induce unsup + weak
  for (int v = 0; v < 3; ++v) {
    std::string threads = v == 2 ? "4" : "1";
    if (!run_cli("induce --bitext " + bitext + " --out " + scratch.file("unsup" + std::to_string(v) + ".tsv") +
                 " --mode unsup --threads " + threads + prov) ||
        !run_cli("induce --bitext " + bitext + " --out " + scratch.file("weak" + std::to_string(v) + ".tsv") +
                 " --mode weak --seed-lexicon " + fixture + "/seed_lexicon.tsv --epochs 300 --threads " + threads +
                 prov)) {
      detail = "induce subcommand failed";
      return false;
    }
  }
  if (read_bytes(scratch.file("unsup0.tsv")) != read_bytes(scratch.file("unsup1.tsv")) ||
      read_bytes(scratch.file("unsup0.tsv")) != read_bytes(scratch.file("unsup2.tsv")) ||
      read_bytes(scratch.file("weak0.tsv")) != read_bytes(scratch.file("weak1.tsv")) ||
      read_bytes(scratch.file("weak0.tsv")) != read_bytes(scratch.file("weak2.tsv"))) {
    detail = "induce artifact differs";
    return false;
  }

  // train-filter
  for (int v = 0; v < 3; ++v) {
    std::string threads = v == 2 ? "4" : "1";
    if (!run_cli("train-filter --bitext " + bitext + " --seed-lexicon " + fixture + "/seed_lexicon.tsv --out " +
                 scratch.file("filter" + std::to_string(v) + ".json") + " --epochs 300 --threads " + threads + prov)) {
      detail = "train-filter subcommand failed";
      return false;
    }
  }
  if (read_bytes(scratch.file("filter0.json")) != read_bytes(scratch.file("filter1.json")) ||
      read_bytes(scratch.file("filter0.json")) != read_bytes(scratch.file("filter2.json"))) {
    detail = "train-filter artifact differs";
    return false;
  }

  // align-mlp
  for (int v = 0; v < 3; ++v) {
    std::string threads = v == 2 ? "4" : "1";
    if (!run_cli("align-mlp --bitext " + bitext + " --out " + scratch.file("mlp" + std::to_string(v) + ".txt") +
                 " --checkpoint " + scratch.file("mlp" + std::to_string(v) + ".json") + " --epochs 200 --threads " +
                 threads + prov)) {
      detail = "align-mlp subcommand failed";
      return false;
    }
  }
  if (read_bytes(scratch.file("mlp0.txt")) != read_bytes(scratch.file("mlp1.txt")) ||
      read_bytes(scratch.file("mlp0.txt")) != read_bytes(scratch.file("mlp2.txt")) ||
      read_bytes(scratch.file("mlp0.json")) != read_bytes(scratch.file("mlp1.json")) ||
      read_bytes(scratch.file("mlp0.json")) != read_bytes(scratch.file("mlp2.json"))) {
    detail = "align-mlp artifact differs";
    return false;
  }

  // eval (JSON report is the artifact; it carries no timings)
  for (int v = 0; v < 2; ++v) {
    if (!run_cli("eval --metric bli-f1 --pred " + fixture + "/lexicon_unsup.tsv --gold " + fixture +
                 "/gold_lexicon.tsv --json " + scratch.file("eval" + std::to_string(v) + ".json"))) {
      detail = "eval subcommand failed";
      return false;
    }
  }
  if (read_bytes(scratch.file("eval0.json")) != read_bytes(scratch.file("eval1.json"))) {
    detail = "eval artifact differs";
    return false;
  }
  // the re-parsed report must carry the same numbers the library computes
  {
    nlohmann::json report = nlohmann::json::parse(read_bytes(scratch.file("eval0.json")));
    Prf direct = bli_f1(load_lexicon(fixture + "/lexicon_unsup.tsv"), load_lexicon(fixture + "/gold_lexicon.tsv"));
    if (report.at("f1").get<double>() != direct.f1 || report.at("precision").get<double>() != direct.precision ||
        report.at("recall").get<double>() != direct.recall) {
      detail = "eval report does not round-trip the computed metrics";
      return false;
    }
  }

  // tier
  for (int v = 0; v < 3; ++v) {
    std::string threads = v == 2 ? "4" : "1";
    if (!run_cli("tier --bitext " + bitext + " --gold " + fixture + "/gold_lexicon.tsv --tiers 5 --out " +
                 scratch.file("tier" + std::to_string(v) + ".json") + " --threads " + threads + prov)) {
      detail = "tier subcommand failed";
      return false;
    }
  }
  if (read_bytes(scratch.file("tier0.json")) != read_bytes(scratch.file("tier1.json")) ||
      read_bytes(scratch.file("tier0.json")) != read_bytes(scratch.file("tier2.json"))) {
    detail = "tier artifact differs";
    return false;
  }

  return true;
}

}  // namespace

int main() {
  std::cout << "lexforge acceptance suite\n";
  criterion("formula fidelity (matched ratio, margin identity, expected-label boundary)", formula_fidelity);
  criterion("oracle equivalence on >=100 random instances per operation", oracle_equivalence);
  criterion("alignment invariants (subset, labels, affine invariance)", alignment_invariants);
  criterion("gradient checks vs central finite differences", gradient_checks);
  criterion("end-to-end synthetic recovery (unsupervised + weakly supervised)", synthetic_recovery);
  criterion("quality-tier F1 trend is monotone non-increasing", tier_trend);
  criterion("CLI determinism across reruns and thread counts", cli_determinism);
  if (g_failures == 0) {
    std::cout << "all criteria passed\n";
    return 0;
  }
  std::cout << g_failures << " criteria failed\n";
  return 1;
}
