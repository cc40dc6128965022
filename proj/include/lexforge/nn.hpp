#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lexforge/stats.hpp"
#include "lexforge/util.hpp"

namespace lexforge {

enum class Head { binary, ternary };

// Two-layer perceptron, 7 -> 8 -> {1, 3}, plus the learnable count offsets
// of the feature transform. Both head layouts live in the struct; only the
// one selected by `head` is trained, serialized and used.
struct MlpParams {
  static constexpr int kIn = 7;
  static constexpr int kHidden = 8;
  static constexpr int kTernary = 3;

  Head head = Head::binary;
  std::array<double, kHidden * kIn> w1{};       // row-major [hidden][in]
  std::array<double, kHidden> b1{};
  std::array<double, kHidden> w2{};             // binary head
  double b2 = 0.0;
  std::array<double, kTernary * kHidden> w2t{};  // ternary head, row-major [label][hidden]
  std::array<double, kTernary> b2t{};
  FeatureTransform transform;
};

struct MlpGradients {
  std::array<double, MlpParams::kHidden * MlpParams::kIn> w1{};
  std::array<double, MlpParams::kHidden> b1{};
  std::array<double, MlpParams::kHidden> w2{};
  double b2 = 0.0;
  std::array<double, MlpParams::kTernary * MlpParams::kHidden> w2t{};
  std::array<double, MlpParams::kTernary> b2t{};
  std::array<double, FeatureTransform::kCountFeatures> log_theta{};
};

struct TrainConfig {
  double learning_rate = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int epochs = 50;
  // 0 picks the default schedule: full batch up to 1e5 examples, else 1024
  int batch_size = 0;
  std::uint64_t seed = 1;
};

// Raw inputs of one training example; the theta-dependent feature transform
// is applied inside the loss so gradients can flow into theta.
struct TrainExample {
  std::array<std::int64_t, FeatureTransform::kCountFeatures> counts{};
  double cos_sim = 0.0;
  double dot_sim = 0.0;
  int label = 0;
};

inline FeatureVector example_features(const TrainExample& ex, const FeatureTransform& transform) {
  PairStats ps;
  ps.mat_one2one = ex.counts[0];
  ps.mat_many2one = ex.counts[1];
  ps.coc = ex.counts[2];
  ps.freq_src = ex.counts[3];
  ps.freq_tgt = ex.counts[4];
  ps.cos_sim = ex.cos_sim;
  ps.dot_sim = ex.dot_sim;
  return features(ps, transform);
}

namespace detail {

inline void check_finite(const FeatureVector& x) {
  for (double v : x)
    if (!std::isfinite(v)) throw std::runtime_error("mlp: non-finite feature input");
}

inline std::array<double, MlpParams::kHidden> hidden_preact(const MlpParams& p, const FeatureVector& x) {
  std::array<double, MlpParams::kHidden> z1{};
  for (int h = 0; h < MlpParams::kHidden; ++h) {
    double z = p.b1[static_cast<std::size_t>(h)];
    for (int i = 0; i < MlpParams::kIn; ++i)
      z += p.w1[static_cast<std::size_t>(h * MlpParams::kIn + i)] * x[static_cast<std::size_t>(i)];
    z1[static_cast<std::size_t>(h)] = z;
  }
  return z1;
}

inline double sigmoid(double z) { return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z)); }

// log(1 + e^z) without overflow
inline double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

inline double binary_logit(const MlpParams& p, const FeatureVector& x) {
  auto z1 = hidden_preact(p, x);
  double z2 = p.b2;
  for (int h = 0; h < MlpParams::kHidden; ++h)
    z2 += p.w2[static_cast<std::size_t>(h)] * std::max(0.0, z1[static_cast<std::size_t>(h)]);
  return z2;
}

inline std::array<double, MlpParams::kTernary> ternary_logits(const MlpParams& p, const FeatureVector& x) {
  auto z1 = hidden_preact(p, x);
  std::array<double, MlpParams::kTernary> z2{};
  for (int c = 0; c < MlpParams::kTernary; ++c) {
    double z = p.b2t[static_cast<std::size_t>(c)];
    for (int h = 0; h < MlpParams::kHidden; ++h)
      z += p.w2t[static_cast<std::size_t>(c * MlpParams::kHidden + h)] * std::max(0.0, z1[static_cast<std::size_t>(h)]);
    z2[static_cast<std::size_t>(c)] = z;
  }
  return z2;
}

inline std::array<double, MlpParams::kTernary> softmax3(const std::array<double, MlpParams::kTernary>& z) {
  double m = std::max(z[0], std::max(z[1], z[2]));
  std::array<double, MlpParams::kTernary> p{};
  double sum = 0.0;
  for (int c = 0; c < MlpParams::kTernary; ++c) {
    p[static_cast<std::size_t>(c)] = std::exp(z[static_cast<std::size_t>(c)] - m);
    sum += p[static_cast<std::size_t>(c)];
  }
  for (double& v : p) v /= sum;
  return p;
}

}  // namespace detail

// P(pair in lexicon) = sigmoid(w2 . relu(W1 x + b1) + b2)
inline double forward_binary(const MlpParams& params, const FeatureVector& x) {
  detail::check_finite(x);
  return detail::sigmoid(detail::binary_logit(params, x));
}

// softmax over the three alignment labels
inline std::array<double, 3> forward_ternary(const MlpParams& params, const FeatureVector& x) {
  detail::check_finite(x);
  return detail::softmax3(detail::ternary_logits(params, x));
}

// Negative mean log-likelihood of the batch plus exact analytic gradients
// for every parameter, including the theta offsets behind the log(c + theta)
// transform.
inline std::pair<double, MlpGradients> loss_and_gradients(const MlpParams& params,
                                                          const std::vector<TrainExample>& batch, Head objective) {
  if (batch.empty()) throw std::runtime_error("loss_and_gradients: empty batch");
  MlpGradients g;
  double loss = 0.0;
  for (const TrainExample& ex : batch) {
    if (objective == Head::binary && (ex.label < 0 || ex.label > 1))
      throw std::runtime_error("loss_and_gradients: binary label out of range");
    if (objective == Head::ternary && (ex.label < 0 || ex.label > 2))
      throw std::runtime_error("loss_and_gradients: ternary label out of range");

    FeatureVector x = example_features(ex, params.transform);
    detail::check_finite(x);
    auto z1 = detail::hidden_preact(params, x);
    std::array<double, MlpParams::kHidden> act{};
    for (int h = 0; h < MlpParams::kHidden; ++h)
      act[static_cast<std::size_t>(h)] = std::max(0.0, z1[static_cast<std::size_t>(h)]);

    std::array<double, MlpParams::kHidden> d_act{};
    if (objective == Head::binary) {
      double z2 = params.b2;
      for (int h = 0; h < MlpParams::kHidden; ++h) z2 += params.w2[static_cast<std::size_t>(h)] * act[static_cast<std::size_t>(h)];
      double y = static_cast<double>(ex.label);
      loss += detail::softplus(z2) - y * z2;
      double dz2 = detail::sigmoid(z2) - y;
      for (int h = 0; h < MlpParams::kHidden; ++h) {
        g.w2[static_cast<std::size_t>(h)] += dz2 * act[static_cast<std::size_t>(h)];
        d_act[static_cast<std::size_t>(h)] = dz2 * params.w2[static_cast<std::size_t>(h)];
      }
      g.b2 += dz2;
    } else {
      std::array<double, MlpParams::kTernary> z2{};
      for (int c = 0; c < MlpParams::kTernary; ++c) {
        double z = params.b2t[static_cast<std::size_t>(c)];
        for (int h = 0; h < MlpParams::kHidden; ++h)
          z += params.w2t[static_cast<std::size_t>(c * MlpParams::kHidden + h)] * act[static_cast<std::size_t>(h)];
        z2[static_cast<std::size_t>(c)] = z;
      }
      double m = std::max(z2[0], std::max(z2[1], z2[2]));
      double sum_exp = 0.0;
      for (double z : z2) sum_exp += std::exp(z - m);
      double lse = m + std::log(sum_exp);
      loss += lse - z2[static_cast<std::size_t>(ex.label)];
      for (int c = 0; c < MlpParams::kTernary; ++c) {
        double dz = std::exp(z2[static_cast<std::size_t>(c)] - lse) - (c == ex.label ? 1.0 : 0.0);
        g.b2t[static_cast<std::size_t>(c)] += dz;
        for (int h = 0; h < MlpParams::kHidden; ++h) {
          g.w2t[static_cast<std::size_t>(c * MlpParams::kHidden + h)] += dz * act[static_cast<std::size_t>(h)];
          d_act[static_cast<std::size_t>(h)] += dz * params.w2t[static_cast<std::size_t>(c * MlpParams::kHidden + h)];
        }
      }
    }

    FeatureVector dx{};
    for (int h = 0; h < MlpParams::kHidden; ++h) {
      if (z1[static_cast<std::size_t>(h)] <= 0.0) continue;
      double dz1 = d_act[static_cast<std::size_t>(h)];
      g.b1[static_cast<std::size_t>(h)] += dz1;
      for (int i = 0; i < MlpParams::kIn; ++i) {
        g.w1[static_cast<std::size_t>(h * MlpParams::kIn + i)] += dz1 * x[static_cast<std::size_t>(i)];
        dx[static_cast<std::size_t>(i)] += dz1 * params.w1[static_cast<std::size_t>(h * MlpParams::kIn + i)];
      }
    }
    for (int c = 0; c < FeatureTransform::kCountFeatures; ++c) {
      double theta = params.transform.theta(c);
      g.log_theta[static_cast<std::size_t>(c)] +=
          dx[static_cast<std::size_t>(c)] * theta / (static_cast<double>(ex.counts[static_cast<std::size_t>(c)]) + theta);
    }
  }

  double inv_n = 1.0 / static_cast<double>(batch.size());
  loss *= inv_n;
  for (double& v : g.w1) v *= inv_n;
  for (double& v : g.b1) v *= inv_n;
  for (double& v : g.w2) v *= inv_n;
  g.b2 *= inv_n;
  for (double& v : g.w2t) v *= inv_n;
  for (double& v : g.b2t) v *= inv_n;
  for (double& v : g.log_theta) v *= inv_n;
  return {loss, g};
}

namespace detail {

struct Span {
  double* param;
  const double* grad;
  std::size_t len;
};

inline std::vector<Span> param_spans(MlpParams& p, const MlpGradients& g) {
  std::vector<Span> spans = {
      {p.w1.data(), g.w1.data(), p.w1.size()},
      {p.b1.data(), g.b1.data(), p.b1.size()},
  };
  if (p.head == Head::binary) {
    spans.push_back({p.w2.data(), g.w2.data(), p.w2.size()});
    spans.push_back({&p.b2, &g.b2, 1});
  } else {
    spans.push_back({p.w2t.data(), g.w2t.data(), p.w2t.size()});
    spans.push_back({p.b2t.data(), g.b2t.data(), p.b2t.size()});
  }
  spans.push_back({p.transform.log_theta.data(), g.log_theta.data(), p.transform.log_theta.size()});
  return spans;
}

}  // namespace detail

inline MlpParams init_mlp(Head head, std::uint64_t seed) {
  MlpParams p;
  p.head = head;
  SplitMix64 gen(combine_seed(seed, 0x1417));
  const double s1 = 1.0 / std::sqrt(static_cast<double>(MlpParams::kIn));
  const double s2 = 1.0 / std::sqrt(static_cast<double>(MlpParams::kHidden));
  for (double& v : p.w1) v = gen.uniform_sym(s1);
  for (double& v : p.b1) v = gen.uniform_sym(s1);
  if (head == Head::binary) {
    for (double& v : p.w2) v = gen.uniform_sym(s2);
    p.b2 = gen.uniform_sym(s2);
  } else {
    for (double& v : p.w2t) v = gen.uniform_sym(s2);
    for (double& v : p.b2t) v = gen.uniform_sym(s2);
  }
  return p;
}

// Adam over the selected head. Deterministic for a fixed seed: fixed init,
// fixed shuffling stream, single-threaded.
inline MlpParams train(const std::vector<TrainExample>& dataset, Head head, const TrainConfig& config) {
  if (dataset.empty()) throw std::runtime_error("train: empty dataset");
  if (config.learning_rate <= 0.0) throw std::runtime_error("train: learning_rate must be > 0");

  MlpParams params = init_mlp(head, config.seed);
  MlpGradients zero;
  auto spans = detail::param_spans(params, zero);
  std::size_t total = 0;
  for (const auto& s : spans) total += s.len;
  std::vector<double> adam_m(total, 0.0);
  std::vector<double> adam_v(total, 0.0);

  std::size_t batch_size = config.batch_size > 0 ? static_cast<std::size_t>(config.batch_size)
                           : dataset.size() <= 100000 ? dataset.size()
                                                      : 1024;
  SplitMix64 shuffle_gen(combine_seed(config.seed, 0x5482));
  std::vector<std::size_t> order(dataset.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  long long step = 0;
  std::vector<TrainExample> batch;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (batch_size < dataset.size()) {
      for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[shuffle_gen.below(i)]);
    }
    for (std::size_t begin = 0; begin < dataset.size(); begin += batch_size) {
      std::size_t end = std::min(dataset.size(), begin + batch_size);
      batch.clear();
      for (std::size_t i = begin; i < end; ++i) batch.push_back(dataset[order[i]]);
      auto [loss, grads] = loss_and_gradients(params, batch, head);
      (void)loss;
      ++step;
      double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
      double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
      auto live = detail::param_spans(params, grads);
      std::size_t offset = 0;
      for (const auto& s : live) {
        for (std::size_t i = 0; i < s.len; ++i) {
          double gval = s.grad[i];
          double& m = adam_m[offset + i];
          double& v = adam_v[offset + i];
          m = config.beta1 * m + (1.0 - config.beta1) * gval;
          v = config.beta2 * v + (1.0 - config.beta2) * gval * gval;
          s.param[i] -= config.learning_rate * (m / bc1) / (std::sqrt(v / bc2) + config.epsilon);
        }
        offset += s.len;
      }
    }
  }
  return params;
}

// ---------------------------------------------------------------------------
// checkpoint I/O
// ---------------------------------------------------------------------------

inline nlohmann::json mlp_to_json(const MlpParams& p) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["head"] = p.head == Head::binary ? "binary" : "ternary";
  j["input_dim"] = MlpParams::kIn;
  j["hidden_dim"] = MlpParams::kHidden;
  nlohmann::json w1 = nlohmann::json::array();
  for (int h = 0; h < MlpParams::kHidden; ++h) {
    nlohmann::json row = nlohmann::json::array();
    for (int i = 0; i < MlpParams::kIn; ++i) row.push_back(p.w1[static_cast<std::size_t>(h * MlpParams::kIn + i)]);
    w1.push_back(row);
  }
  j["w1"] = w1;
  j["b1"] = p.b1;
  if (p.head == Head::binary) {
    j["w2"] = p.w2;
    j["b2"] = p.b2;
  } else {
    nlohmann::json w2 = nlohmann::json::array();
    for (int c = 0; c < MlpParams::kTernary; ++c) {
      nlohmann::json row = nlohmann::json::array();
      for (int h = 0; h < MlpParams::kHidden; ++h)
        row.push_back(p.w2t[static_cast<std::size_t>(c * MlpParams::kHidden + h)]);
      w2.push_back(row);
    }
    j["w2"] = w2;
    j["b2"] = p.b2t;
  }
  j["log_theta"] = p.transform.log_theta;
  return j;
}

inline MlpParams mlp_from_json(const nlohmann::json& j) {
  if (!j.contains("format_version") || j["format_version"].get<int>() != 1)
    throw ValidationError("checkpoint: unsupported format_version");
  if (j.value("input_dim", 0) != MlpParams::kIn || j.value("hidden_dim", 0) != MlpParams::kHidden)
    throw ValidationError("checkpoint: unexpected layer dimensions");
  MlpParams p;
  std::string head = j.at("head").get<std::string>();
  if (head == "binary")
    p.head = Head::binary;
  else if (head == "ternary")
    p.head = Head::ternary;
  else
    throw ValidationError("checkpoint: unknown head '" + head + "'");
  auto w1 = j.at("w1");
  if (w1.size() != MlpParams::kHidden) throw ValidationError("checkpoint: bad w1 shape");
  for (int h = 0; h < MlpParams::kHidden; ++h) {
    if (w1[static_cast<std::size_t>(h)].size() != MlpParams::kIn) throw ValidationError("checkpoint: bad w1 shape");
    for (int i = 0; i < MlpParams::kIn; ++i)
      p.w1[static_cast<std::size_t>(h * MlpParams::kIn + i)] = w1[static_cast<std::size_t>(h)][static_cast<std::size_t>(i)].get<double>();
  }
  p.b1 = j.at("b1").get<std::array<double, MlpParams::kHidden>>();
  if (p.head == Head::binary) {
    p.w2 = j.at("w2").get<std::array<double, MlpParams::kHidden>>();
    p.b2 = j.at("b2").get<double>();
  } else {
    auto w2 = j.at("w2");
    if (w2.size() != MlpParams::kTernary) throw ValidationError("checkpoint: bad w2 shape");
    for (int c = 0; c < MlpParams::kTernary; ++c) {
      if (w2[static_cast<std::size_t>(c)].size() != MlpParams::kHidden) throw ValidationError("checkpoint: bad w2 shape");
      for (int h = 0; h < MlpParams::kHidden; ++h)
        p.w2t[static_cast<std::size_t>(c * MlpParams::kHidden + h)] = w2[static_cast<std::size_t>(c)][static_cast<std::size_t>(h)].get<double>();
    }
    p.b2t = j.at("b2").get<std::array<double, MlpParams::kTernary>>();
  }
  p.transform.log_theta = j.at("log_theta").get<std::array<double, FeatureTransform::kCountFeatures>>();
  return p;
}

inline void save_mlp(const std::string& path, const MlpParams& params) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write checkpoint: " + path);
  out << mlp_to_json(params).dump(2) << '\n';
}

inline MlpParams load_mlp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open checkpoint: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return mlp_from_json(j);
}

}  // namespace lexforge
