#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "lexforge/corpus.hpp"
#include "lexforge/util.hpp"

namespace lexforge {

using Vector = std::vector<double>;

inline double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::runtime_error("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

inline double cosine(const Vector& a, const Vector& b) {
  double na = norm(a);
  double nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw std::runtime_error("cosine: zero-norm vector");
  return dot(a, b) / (na * nb);
}

// Component-wise mean of the token vectors.
inline Vector sentence_embedding(const std::vector<Vector>& token_vectors) {
  if (token_vectors.empty()) throw std::runtime_error("sentence_embedding: empty token list");
  const std::size_t dim = token_vectors.front().size();
  Vector mean(dim, 0.0);
  for (const Vector& v : token_vectors) {
    if (v.size() != dim) throw std::runtime_error("sentence_embedding: dimension mismatch");
    for (std::size_t i = 0; i < dim; ++i) mean[i] += v[i];
  }
  for (double& x : mean) x /= static_cast<double>(token_vectors.size());
  return mean;
}

// Token -> vector lookup. Implementations are immutable after construction;
// the same token always yields the identical vector.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual int dim() const = 0;
  virtual Vector token_vector(const std::string& token) const = 0;
};

inline std::vector<Vector> token_embeddings(const EmbeddingProvider& provider, const Sentence& sentence) {
  std::vector<Vector> out;
  out.reserve(sentence.size());
  for (const std::string& tok : sentence) out.push_back(provider.token_vector(tok));
  return out;
}

namespace detail {

// unit vector drawn from a seeded normal stream
inline Vector seeded_unit_vector(std::uint64_t seed, int dim) {
  SplitMix64 gen(seed);
  Vector v(static_cast<std::size_t>(dim));
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (double& x : v) {
      x = gen.normal();
      n2 += x * x;
    }
  } while (n2 == 0.0);
  double inv = 1.0 / std::sqrt(n2);
  for (double& x : v) x *= inv;
  return v;
}

}  // namespace detail

// Deterministic stand-in for a pretrained encoder. Tokens mapped to the same
// concept id share a base direction, so cross-language pairs in the concept
// map come out with cosine >= 0.99; everything else is effectively random.
// A token-specific perturbation of norm 0.05 keeps distinct tokens distinct.
class SyntheticEmbedder : public EmbeddingProvider {
 public:
  SyntheticEmbedder(std::uint64_t seed, int dim, std::map<std::string, std::string> concept_map = {},
                    std::string lang_tag = {})
      : seed_(seed), dim_(dim), concept_map_(std::move(concept_map)), lang_tag_(std::move(lang_tag)) {
    if (dim_ < 2) throw std::runtime_error("SyntheticEmbedder: dim must be >= 2");
  }

  int dim() const override { return dim_; }

  Vector token_vector(const std::string& token) const override {
    auto it = concept_map_.find(token);
    const std::string& key = it == concept_map_.end() ? token : it->second;
    Vector v = detail::seeded_unit_vector(combine_seed(seed_, fnv1a64("base:" + key)), dim_);
    Vector p = detail::seeded_unit_vector(combine_seed(seed_, fnv1a64("perturb:" + lang_tag_ + ":" + token)), dim_);
    for (int i = 0; i < dim_; ++i) v[static_cast<std::size_t>(i)] += 0.05 * p[static_cast<std::size_t>(i)];
    return v;
  }

 private:
  std::uint64_t seed_;
  int dim_;
  std::map<std::string, std::string> concept_map_;
  std::string lang_tag_;
};

// Word embeddings loaded from the text format: first line "vocab_size dim",
// then one "token v1 ... vdim" row per line. Unknown tokens fall back to a
// deterministic hash-seeded unit vector instead of erroring, so large-corpus
// runs survive vocabulary gaps.
class FileEmbeddings : public EmbeddingProvider {
 public:
  FileEmbeddings(std::unordered_map<std::string, Vector> table, int dim)
      : table_(std::move(table)), dim_(dim) {
    if (dim_ < 1) throw std::runtime_error("FileEmbeddings: dim must be >= 1");
  }

  static FileEmbeddings load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open embeddings file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(path + ": missing header line");
    std::istringstream header(line);
    std::size_t vocab = 0;
    int dim = 0;
    if (!(header >> vocab >> dim) || dim < 1)
      throw ValidationError(path + ": line 1: expected header 'vocab_size dim'");
    std::unordered_map<std::string, Vector> table;
    table.reserve(vocab);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::istringstream row(line);
      std::string token;
      row >> token;
      Vector v(static_cast<std::size_t>(dim));
      for (int i = 0; i < dim; ++i) {
        if (!(row >> v[static_cast<std::size_t>(i)]))
          throw ValidationError(path + ": line " + std::to_string(lineno) + ": expected " + std::to_string(dim) +
                                " vector components");
        if (!std::isfinite(v[static_cast<std::size_t>(i)]))
          throw ValidationError(path + ": line " + std::to_string(lineno) + ": non-finite vector component");
      }
      table[ascii_lower(token)] = std::move(v);
    }
    return FileEmbeddings(std::move(table), dim);
  }

  int dim() const override { return dim_; }

  Vector token_vector(const std::string& token) const override {
    auto it = table_.find(token);
    if (it != table_.end()) return it->second;
    return detail::seeded_unit_vector(combine_seed(kFallbackSeed, fnv1a64(token)), dim_);
  }

  bool contains(const std::string& token) const { return table_.count(token) != 0; }
  std::size_t vocab_size() const { return table_.size(); }

 private:
  static constexpr std::uint64_t kFallbackSeed = 0x0ddba11c0ffee123ULL;

  std::unordered_map<std::string, Vector> table_;
  int dim_;
};

// Concept map TSV: token<TAB>concept_id, one entry per line.
inline std::map<std::string, std::string> load_concept_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open concept map file: " + path);
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
      throw ValidationError(path + ": line " + std::to_string(lineno) + ": expected 'token<TAB>concept'");
    out[ascii_lower(line.substr(0, tab))] = line.substr(tab + 1);
  }
  return out;
}

inline void save_concept_map(const std::string& path, const std::map<std::string, std::string>& map) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write concept map file: " + path);
  for (const auto& [token, concept_id] : map) out << token << '\t' << concept_id << '\n';
}

// Token-level contextual embeddings, JSON-lines:
//   {"tokens": ["guten", "tag"], "vectors": [[...], [...]]}
struct ContextualSentence {
  Sentence tokens;
  std::vector<Vector> vectors;
};

inline std::vector<ContextualSentence> load_contextual_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open contextual embeddings file: " + path);
  std::vector<ContextualSentence> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(path + ": line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!rec.contains("tokens") || !rec.contains("vectors"))
      throw ValidationError(path + ": line " + std::to_string(lineno) + ": record needs 'tokens' and 'vectors'");
    ContextualSentence cs;
    cs.tokens = rec["tokens"].get<Sentence>();
    cs.vectors = rec["vectors"].get<std::vector<Vector>>();
    if (cs.tokens.size() != cs.vectors.size())
      throw ValidationError(path + ": line " + std::to_string(lineno) + ": tokens/vectors length mismatch");
    out.push_back(std::move(cs));
  }
  return out;
}

}  // namespace lexforge
