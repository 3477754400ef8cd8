#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "ric/graph.hpp"
#include "ric/moves.hpp"
#include "ric/random.hpp"

namespace ric {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// omega_j = pi / 2^j, j = 0..7.
inline std::vector<double> default_fourier_freqs() {
  std::vector<double> f;
  for (int j = 0; j < 8; ++j) f.push_back(std::numbers::pi / std::ldexp(1.0, j));
  return f;
}

struct Hyper {
  std::size_t hidden = 64;
  std::size_t rounds = 5;
  std::vector<double> freqs = default_fourier_freqs();

  [[nodiscard]] std::size_t feature_dim() const noexcept { return 2 * freqs.size(); }
  friend bool operator==(const Hyper&, const Hyper&) = default;
};

/// Action categories share the final softmax but nothing else.
enum class Category : std::size_t { Stop = 0, DeleteI = 1, DeleteII = 2, InsertI = 3, InsertII = 4 };
inline constexpr std::size_t kCategoryCount = 5;
inline constexpr std::array<const char*, kCategoryCount> kCategoryNames{"stop", "delete_i", "delete_ii", "insert_i",
                                                                       "insert_ii"};

/// Number of H-wide location blocks feeding each head before the 2H graph
/// embedding: stop none, DeleteI (h_v), DeleteII (h_v, h_a+h_b),
/// InsertI (h_u+h_v), InsertII (h_u+h_v, h_w).
inline constexpr std::array<std::size_t, kCategoryCount> kLocationBlocks{0, 1, 2, 1, 2};

inline Category category_of(const Move& m) {
  switch (move_type(m)) {
    case MoveType::InsertI: return Category::InsertI;
    case MoveType::InsertII: return Category::InsertII;
    case MoveType::DeleteI: return Category::DeleteI;
    case MoveType::DeleteII: return Category::DeleteII;
  }
  return Category::Stop;
}

/// Two-layer scalar head: logit = w2 . tanh(w1 x + b1) + b2.
struct Head {
  Mat w1, b1, w2, b2;
};

/// All learned weights. Biases are stored as single-column matrices so every
/// tensor is visited uniformly by for_each.
struct ModelParams {
  static constexpr int kVersion = 1;

  Hyper hyper;
  Mat embed_w, embed_b;
  std::vector<Mat> mp_self, mp_nbr, mp_bias;
  Mat readout_w1, readout_b1, readout_w2, readout_b2;
  std::array<Head, kCategoryCount> heads;

  static ModelParams zeros(const Hyper& hp) {
    const auto H = static_cast<Eigen::Index>(hp.hidden);
    const auto F = static_cast<Eigen::Index>(hp.feature_dim());
    ModelParams p;
    p.hyper = hp;
    p.embed_w = Mat::Zero(H, F);
    p.embed_b = Mat::Zero(H, 1);
    for (std::size_t t = 0; t < hp.rounds; ++t) {
      p.mp_self.push_back(Mat::Zero(H, H));
      p.mp_nbr.push_back(Mat::Zero(H, H));
      p.mp_bias.push_back(Mat::Zero(H, 1));
    }
    p.readout_w1 = Mat::Zero(H, H);
    p.readout_b1 = Mat::Zero(H, 1);
    p.readout_w2 = Mat::Zero(H, H);
    p.readout_b2 = Mat::Zero(H, 1);
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
      const auto in = static_cast<Eigen::Index>(kLocationBlocks[c]) * H + 2 * H;
      p.heads[c] = Head{Mat::Zero(H, in), Mat::Zero(H, 1), Mat::Zero(1, H), Mat::Zero(1, 1)};
    }
    return p;
  }

  /// Weights ~ N(0, 1/fan_in), biases zero.
  static ModelParams init(const Hyper& hp, Rng& rng) {
    ModelParams p = zeros(hp);
    std::normal_distribution<double> normal(0.0, 1.0);
    p.for_each([&](const std::string& name, Mat& m) {
      if (name.ends_with(".b1") || name.ends_with(".b2") || name.ends_with(".b")) return;
      const double scale = 1.0 / std::sqrt(static_cast<double>(m.cols()));
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = scale * normal(rng);
    });
    return p;
  }

  template <class Fn>
  void for_each(Fn&& fn) {
    for_each_impl(*this, fn);
  }
  template <class Fn>
  void for_each(Fn&& fn) const {
    for_each_impl(*this, fn);
  }

  [[nodiscard]] std::size_t parameter_count() const {
    std::size_t n = 0;
    for_each([&](const std::string&, const Mat& m) { n += static_cast<std::size_t>(m.size()); });
    return n;
  }

  void set_zero() {
    for_each([](const std::string&, Mat& m) { m.setZero(); });
  }

  /// this += scale * other (shapes must match).
  void add_scaled(const ModelParams& other, double scale) {
    std::vector<const Mat*> src;
    other.for_each([&](const std::string&, const Mat& m) { src.push_back(&m); });
    std::size_t i = 0;
    for_each([&](const std::string&, Mat& m) { m += scale * (*src[i++]); });
  }

  [[nodiscard]] bool all_finite() const {
    bool ok = true;
    for_each([&](const std::string&, const Mat& m) { ok = ok && m.allFinite(); });
    return ok;
  }

  [[nodiscard]] bool same_shape(const ModelParams& other) const {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> a, b;
    for_each([&](const std::string&, const Mat& m) { a.emplace_back(m.rows(), m.cols()); });
    other.for_each([&](const std::string&, const Mat& m) { b.emplace_back(m.rows(), m.cols()); });
    return a == b;
  }

 private:
  template <class Self, class Fn>
  static void for_each_impl(Self& self, Fn& fn) {
    fn(std::string("embed.w"), self.embed_w);
    fn(std::string("embed.b"), self.embed_b);
    for (std::size_t t = 0; t < self.mp_self.size(); ++t) {
      const std::string pre = "mp." + std::to_string(t);
      fn(pre + ".self", self.mp_self[t]);
      fn(pre + ".nbr", self.mp_nbr[t]);
      fn(pre + ".b", self.mp_bias[t]);
    }
    fn(std::string("readout.w1"), self.readout_w1);
    fn(std::string("readout.b1"), self.readout_b1);
    fn(std::string("readout.w2"), self.readout_w2);
    fn(std::string("readout.b2"), self.readout_b2);
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
      const std::string pre = std::string("head.") + kCategoryNames[c];
      fn(pre + ".w1", self.heads[c].w1);
      fn(pre + ".b1", self.heads[c].b1);
      fn(pre + ".w2", self.heads[c].w2);
      fn(pre + ".b2", self.heads[c].b2);
    }
  }
};

// --------------------------------------------------------------------------
// Checkpoints: {"version":1, "hyper":{...}, "params":{name:{shape, data}}}.
// data is row-major; doubles round-trip exactly through the JSON writer.
// --------------------------------------------------------------------------

inline nlohmann::ordered_json params_to_json(const ModelParams& p) {
  nlohmann::ordered_json j;
  j["version"] = ModelParams::kVersion;
  j["hyper"] = {{"hidden", p.hyper.hidden}, {"rounds", p.hyper.rounds}, {"fourier_freqs", p.hyper.freqs}};
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  p.for_each([&](const std::string& name, const Mat& m) {
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
    params[name] = {{"shape", {m.rows(), m.cols()}}, {"data", std::move(data)}};
  });
  j["params"] = std::move(params);
  return j;
}

inline ModelParams params_from_json(const nlohmann::json& j) {
  try {
    if (j.at("version").get<int>() != ModelParams::kVersion)
      throw Error(Errc::ParseError, "unsupported checkpoint version");
    Hyper hp;
    hp.hidden = j.at("hyper").at("hidden").get<std::size_t>();
    hp.rounds = j.at("hyper").at("rounds").get<std::size_t>();
    hp.freqs = j.at("hyper").at("fourier_freqs").get<std::vector<double>>();
    ModelParams p = ModelParams::zeros(hp);
    const auto& params = j.at("params");
    p.for_each([&](const std::string& name, Mat& m) {
      if (!params.contains(name)) throw Error(Errc::ShapeMismatch, "checkpoint lacks " + name);
      const auto& t = params[name];
      const auto shape = t.at("shape").get<std::vector<Eigen::Index>>();
      const auto data = t.at("data").get<std::vector<double>>();
      if (shape.size() != 2 || shape[0] != m.rows() || shape[1] != m.cols() ||
          data.size() != static_cast<std::size_t>(m.size()))
        throw Error(Errc::ShapeMismatch, "shape mismatch for " + name);
      std::size_t k = 0;
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = data[k++];
    });
    if (!p.all_finite()) throw Error(Errc::NonFinite, "checkpoint holds non-finite values");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("bad checkpoint: ") + e.what());
  }
}

inline void save_checkpoint(const ModelParams& p, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  out << params_to_json(p).dump() << '\n';
}

inline ModelParams load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("bad checkpoint: ") + e.what());
  }
  return params_from_json(j);
}

// --------------------------------------------------------------------------
// Forward pass
// --------------------------------------------------------------------------

/// Column i is node i of the compact view: concat_w [sin(w d), cos(w d)].
inline Mat featurize(const CompactGraph& c, std::span<const double> freqs) {
  Mat x(static_cast<Eigen::Index>(2 * freqs.size()), static_cast<Eigen::Index>(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto d = static_cast<double>(c.adj[i].size());
    for (std::size_t f = 0; f < freqs.size(); ++f) {
      x(static_cast<Eigen::Index>(2 * f), static_cast<Eigen::Index>(i)) = std::sin(freqs[f] * d);
      x(static_cast<Eigen::Index>(2 * f + 1), static_cast<Eigen::Index>(i)) = std::cos(freqs[f] * d);
    }
  }
  return x;
}

inline Mat featurize(const Graph& g, std::span<const double> freqs) { return featurize(CompactGraph(g), freqs); }

/// Cached activations of one forward pass, kept for the backward pass.
struct Encoding {
  Mat features;        // F x n
  Mat adjacency;       // n x n
  std::vector<Mat> h;  // rounds+1 entries, H x n
  std::vector<Mat> m;  // neighbor sums h[t] * A
  Mat r1, z;           // readout layers, H x n
  std::vector<Eigen::Index> argmax;
  Vec graph;  // [mean(z); max(z)], 2H

  [[nodiscard]] const Mat& nodes() const { return h.back(); }
};

inline Mat tanh_of(const Mat& pre) { return pre.array().tanh().matrix(); }

/// T rounds of h <- tanh(W_self h + W_nbr sum_{u in N(v)} h_u + b), then a
/// two-layer tanh transform pooled by mean and max.
inline Encoding encode(const CompactGraph& c, const ModelParams& p) {
  const auto n = static_cast<Eigen::Index>(c.size());
  const auto H = static_cast<Eigen::Index>(p.hyper.hidden);
  if (p.embed_w.rows() != H || p.embed_w.cols() != static_cast<Eigen::Index>(p.hyper.feature_dim()) ||
      p.mp_self.size() != p.hyper.rounds)
    throw Error(Errc::ShapeMismatch, "parameters do not match hyperparameters");
  if (n == 0) throw Error(Errc::ShapeMismatch, "cannot encode an empty graph");
  Encoding e;
  e.features = featurize(c, p.hyper.freqs);
  e.adjacency = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int j : c.adj[static_cast<std::size_t>(i)]) e.adjacency(i, j) = 1.0;
  e.h.reserve(p.hyper.rounds + 1);
  e.h.push_back(tanh_of((p.embed_w * e.features).colwise() + p.embed_b.col(0)));
  for (std::size_t t = 0; t < p.hyper.rounds; ++t) {
    const Mat& cur = e.h.back();
    e.m.push_back(cur * e.adjacency);
    Mat pre = p.mp_self[t] * cur + p.mp_nbr[t] * e.m.back();
    pre.colwise() += p.mp_bias[t].col(0);
    e.h.push_back(tanh_of(pre));
  }
  e.r1 = tanh_of((p.readout_w1 * e.nodes()).colwise() + p.readout_b1.col(0));
  e.z = tanh_of((p.readout_w2 * e.r1).colwise() + p.readout_b2.col(0));
  e.graph.resize(2 * H);
  e.argmax.resize(static_cast<std::size_t>(H));
  for (Eigen::Index i = 0; i < H; ++i) {
    e.graph(i) = e.z.row(i).mean();
    Eigen::Index arg = 0;
    e.graph(H + i) = e.z.row(i).maxCoeff(&arg);
    e.argmax[static_cast<std::size_t>(i)] = arg;
  }
  return e;
}

struct Embeddings {
  Mat nodes;  // H x n, compact node order
  Vec graph;  // 2H
};

/// Node embeddings (equivariant) and graph embedding (invariant).
inline Embeddings message_pass(const Graph& g, const ModelParams& p) {
  Encoding e = encode(CompactGraph(g), p);
  return {e.nodes(), e.graph};
}

/// Accumulates d(loss)/d(params) for encode() given upstream gradients on
/// node embeddings and the graph embedding.
inline void encode_backward(const Encoding& e, const ModelParams& p, Mat d_nodes, const Vec& d_graph,
                            ModelParams& grad) {
  const Eigen::Index H = e.z.rows();
  const Eigen::Index n = e.z.cols();
  Mat dz = Mat::Zero(H, n);
  for (Eigen::Index i = 0; i < H; ++i) {
    dz.row(i).array() += d_graph(i) / static_cast<double>(n);
    dz(i, e.argmax[static_cast<std::size_t>(i)]) += d_graph(H + i);
  }
  const Mat ds2 = (dz.array() * (1.0 - e.z.array().square())).matrix();
  grad.readout_w2.noalias() += ds2 * e.r1.transpose();
  grad.readout_b2 += ds2.rowwise().sum();
  const Mat dr1 = p.readout_w2.transpose() * ds2;
  const Mat ds1 = (dr1.array() * (1.0 - e.r1.array().square())).matrix();
  grad.readout_w1.noalias() += ds1 * e.nodes().transpose();
  grad.readout_b1 += ds1.rowwise().sum();
  d_nodes.noalias() += p.readout_w1.transpose() * ds1;
  for (std::size_t t = p.hyper.rounds; t-- > 0;) {
    const Mat dpre = (d_nodes.array() * (1.0 - e.h[t + 1].array().square())).matrix();
    grad.mp_self[t].noalias() += dpre * e.h[t].transpose();
    grad.mp_nbr[t].noalias() += dpre * e.m[t].transpose();
    grad.mp_bias[t] += dpre.rowwise().sum();
    d_nodes = p.mp_self[t].transpose() * dpre + (p.mp_nbr[t].transpose() * dpre) * e.adjacency.transpose();
  }
  const Mat dpe = (d_nodes.array() * (1.0 - e.h[0].array().square())).matrix();
  grad.embed_w.noalias() += dpe * e.features.transpose();
  grad.embed_b += dpe.rowwise().sum();
}

// --------------------------------------------------------------------------
// Action scoring
// --------------------------------------------------------------------------

/// Compact-index description of one action: which node columns feed the
/// first and second location blocks of its head.
struct ActionSlots {
  Category category = Category::Stop;
  std::array<int, 2> first{-1, -1};
  std::array<int, 2> second{-1, -1};
};

inline ActionSlots slots_of(const Move& m, const CompactGraph& c) {
  ActionSlots s;
  s.category = category_of(m);
  std::visit(
      [&](const auto& mv) {
        using T = std::decay_t<decltype(mv)>;
        if constexpr (std::is_same_v<T, InsertI>) {
          s.first = {c.index_of(mv.u), c.index_of(mv.v)};
        } else if constexpr (std::is_same_v<T, InsertII>) {
          s.first = {c.index_of(mv.edge.u), c.index_of(mv.edge.v)};
          s.second = {c.index_of(mv.w), -1};
        } else if constexpr (std::is_same_v<T, DeleteI>) {
          s.first = {c.index_of(mv.v), -1};
        } else {
          s.first = {c.index_of(mv.v), -1};
          s.second = {c.index_of(mv.new_edge.u), c.index_of(mv.new_edge.v)};
        }
      },
      m);
  return s;
}

/// p_theta(. | graph) over Ind(graph) plus stop. actions[0] is stop.
struct ActionDistribution {
  std::vector<std::optional<Move>> actions;
  std::vector<double> logits;
  std::vector<double> probabilities;

  [[nodiscard]] std::size_t size() const noexcept { return actions.size(); }
  [[nodiscard]] static bool is_stop(const std::optional<Move>& a) noexcept { return !a.has_value(); }

  /// Index of an action matching `target` (nullopt = stop), or nullopt.
  [[nodiscard]] std::optional<std::size_t> find(const std::optional<Move>& target) const {
    if (!target) return 0;
    for (std::size_t i = 1; i < actions.size(); ++i)
      if (same_action(*actions[i], *target)) return i;
    return std::nullopt;
  }
};

/// Per-head projections of the location blocks and graph embedding,
/// computed once per state so each action costs O(H).
struct HeadCache {
  std::array<Mat, 2> proj;  // block b: H x n
  Vec graph_term;           // W_graph g + b1
};

/// Forward state for one graph: encoding, per-head caches, per-action hidden
/// activations and the resulting distribution.
struct ScoredState {
  CompactGraph compact;
  Encoding encoding;
  std::array<HeadCache, kCategoryCount> heads;
  std::vector<ActionSlots> slots;
  Mat hidden;  // H x K, tanh activations per action
  ActionDistribution dist;
};

inline ScoredState score_state(const Graph& g, const ModelParams& p, std::vector<Move> legal) {
  ScoredState s{CompactGraph(g), {}, {}, {}, {}, {}};
  s.encoding = encode(s.compact, p);
  const auto H = static_cast<Eigen::Index>(p.hyper.hidden);
  const Mat& nodes = s.encoding.nodes();
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    const Head& head = p.heads[c];
    const auto blocks = static_cast<Eigen::Index>(kLocationBlocks[c]);
    for (Eigen::Index b = 0; b < blocks; ++b) s.heads[c].proj[b] = head.w1.middleCols(b * H, H) * nodes;
    s.heads[c].graph_term = head.w1.rightCols(2 * H) * s.encoding.graph + head.b1.col(0);
  }
  const std::size_t K = legal.size() + 1;
  s.slots.reserve(K);
  s.slots.push_back(ActionSlots{});
  for (const Move& m : legal) s.slots.push_back(slots_of(m, s.compact));
  s.dist.actions.reserve(K);
  s.dist.actions.emplace_back(std::nullopt);
  for (Move& m : legal) s.dist.actions.emplace_back(std::move(m));
  s.hidden.resize(H, static_cast<Eigen::Index>(K));
  s.dist.logits.resize(K);
  Vec pre(H);
  for (std::size_t k = 0; k < K; ++k) {
    const ActionSlots& a = s.slots[k];
    const auto c = static_cast<std::size_t>(a.category);
    const HeadCache& hc = s.heads[c];
    pre = hc.graph_term;
    for (int idx : a.first)
      if (idx >= 0) pre += hc.proj[0].col(idx);
    for (int idx : a.second)
      if (idx >= 0) pre += hc.proj[1].col(idx);
    auto col = s.hidden.col(static_cast<Eigen::Index>(k));
    col = pre.array().tanh().matrix();
    s.dist.logits[k] = (p.heads[c].w2 * col)(0, 0) + p.heads[c].b2(0, 0);
  }
  const double mx = *std::max_element(s.dist.logits.begin(), s.dist.logits.end());
  double total = 0.0;
  s.dist.probabilities.resize(K);
  for (std::size_t k = 0; k < K; ++k) total += (s.dist.probabilities[k] = std::exp(s.dist.logits[k] - mx));
  for (double& q : s.dist.probabilities) q /= total;
  return s;
}

/// dL/dlogits for each action -> parameter gradients (accumulated).
inline void score_backward(const ScoredState& s, const ModelParams& p, std::span<const double> d_logits,
                           ModelParams& grad) {
  const auto H = static_cast<Eigen::Index>(p.hyper.hidden);
  const auto n = static_cast<Eigen::Index>(s.compact.size());
  std::array<std::array<Mat, 2>, kCategoryCount> d_proj;
  std::array<Vec, kCategoryCount> d_graph_term;
  std::array<bool, kCategoryCount> used{};
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    for (std::size_t b = 0; b < kLocationBlocks[c]; ++b) d_proj[c][b] = Mat::Zero(H, n);
    d_graph_term[c] = Vec::Zero(H);
  }
  Vec dpre(H);
  for (std::size_t k = 0; k < s.slots.size(); ++k) {
    const double dl = d_logits[k];
    if (dl == 0.0) continue;
    const ActionSlots& a = s.slots[k];
    const auto c = static_cast<std::size_t>(a.category);
    used[c] = true;
    const auto act = s.hidden.col(static_cast<Eigen::Index>(k));
    grad.heads[c].w2 += dl * act.transpose();
    grad.heads[c].b2(0, 0) += dl;
    dpre = (dl * p.heads[c].w2.transpose().array() * (1.0 - act.array().square())).matrix();
    d_graph_term[c] += dpre;
    for (int idx : a.first)
      if (idx >= 0) d_proj[c][0].col(idx) += dpre;
    for (int idx : a.second)
      if (idx >= 0) d_proj[c][1].col(idx) += dpre;
  }
  const Mat& nodes = s.encoding.nodes();
  Mat d_nodes = Mat::Zero(H, n);
  Vec d_graph = Vec::Zero(2 * H);
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    if (!used[c]) continue;
    const Head& head = p.heads[c];
    for (std::size_t b = 0; b < kLocationBlocks[c]; ++b) {
      const auto off = static_cast<Eigen::Index>(b) * H;
      grad.heads[c].w1.middleCols(off, H).noalias() += d_proj[c][b] * nodes.transpose();
      d_nodes.noalias() += head.w1.middleCols(off, H).transpose() * d_proj[c][b];
    }
    grad.heads[c].w1.rightCols(2 * H).noalias() += d_graph_term[c] * s.encoding.graph.transpose();
    grad.heads[c].b1 += d_graph_term[c];
    d_graph.noalias() += head.w1.rightCols(2 * H).transpose() * d_graph_term[c];
  }
  encode_backward(s.encoding, p, std::move(d_nodes), d_graph, grad);
}

/// Distribution over the exact legal set (under size bounds) plus stop.
inline ActionDistribution score_actions(const Graph& g, const ModelParams& p, SizeBounds bounds) {
  return score_state(g, p, enumerate_legal(g, bounds.size_min, bounds.size_max)).dist;
}

}  // namespace ric
