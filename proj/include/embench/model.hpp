#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "embench/error.hpp"
#include "embench/rng.hpp"
#include "embench/signal.hpp"
#include "embench/vocab.hpp"

namespace embench {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Shapes of the encoder, projector and answer head.
struct ModelConfig {
  int input_length = static_cast<int>(kWindowLength);
  int c1 = 16, k1 = 8, s1 = 4;
  int c2 = 32, k2 = 8, s2 = 4;
  int c3 = 32, k3 = 4, s3 = 2;
  int d = 128;  // encoder feature size
  int h = 128;  // projector output
  int e = 32;   // token embedding
  int c = 128;  // head hidden layer
  int vocab = embench::vocab().size();
  int max_len = 16;   // longest prefix the head accepts
  int dsm_rank = 32;  // columns of the DSM basis
};

inline void to_json(nlohmann::json& j, const ModelConfig& m) {
  j = {{"input_length", m.input_length}, {"c1", m.c1}, {"k1", m.k1}, {"s1", m.s1}, {"c2", m.c2}, {"k2", m.k2},
       {"s2", m.s2}, {"c3", m.c3}, {"k3", m.k3}, {"s3", m.s3}, {"d", m.d}, {"h", m.h}, {"e", m.e}, {"c", m.c},
       {"vocab", m.vocab}, {"max_len", m.max_len}, {"dsm_rank", m.dsm_rank}};
}

inline void from_json(const nlohmann::json& j, ModelConfig& m) {
  for (auto [key, ref] : std::initializer_list<std::pair<const char*, int*>>{
           {"input_length", &m.input_length}, {"c1", &m.c1}, {"k1", &m.k1}, {"s1", &m.s1}, {"c2", &m.c2},
           {"k2", &m.k2}, {"s2", &m.s2}, {"c3", &m.c3}, {"k3", &m.k3}, {"s3", &m.s3}, {"d", &m.d}, {"h", &m.h},
           {"e", &m.e}, {"c", &m.c}, {"vocab", &m.vocab}, {"max_len", &m.max_len}, {"dsm_rank", &m.dsm_rank}}) {
    *ref = j.at(key).get<int>();
  }
}

/// A rows x cols column-major block inside the flat parameter vector.
struct Slot {
  std::size_t off = 0;
  int rows = 0, cols = 0;
  std::size_t size() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }
};

struct Range {
  std::size_t begin = 0, end = 0;
};

struct Layout {
  int t1 = 0, t2 = 0, t3 = 0;  // conv output lengths
  Slot w1, b1, w2, b2, w3, b3, wf, bf;  // encoder
  Slot pw1, pb1, pw2, pb2;              // projector
  Slot emb, pos, hw1, hb1, hw2, hb2;    // answer head
  Slot u;                               // DSM basis
  Range enc, proj, head, dsm;
  std::size_t total = 0;
};

inline int conv_out(int len, int k, int s) { return len < k ? 0 : (len - k) / s + 1; }

inline Layout make_layout(const ModelConfig& m) {
  Layout l;
  l.t1 = conv_out(m.input_length, m.k1, m.s1);
  l.t2 = conv_out(l.t1, m.k2, m.s2);
  l.t3 = conv_out(l.t2, m.k3, m.s3);
  if (l.t3 <= 0) throw config_error("model: input too short for the convolution stack");
  if (m.dsm_rank <= 0 || m.dsm_rank >= m.d) throw config_error("model: dsm_rank must lie in (0, d)");
  if (m.vocab < 2 || m.max_len < 1) throw config_error("model: vocab and max_len must be positive");
  std::size_t at = 0;
  auto slot = [&](int r, int c) {
    Slot s{at, r, c};
    at += s.size();
    return s;
  };
  l.enc.begin = at;
  l.w1 = slot(m.c1, 2 * m.k1);
  l.b1 = slot(m.c1, 1);
  l.w2 = slot(m.c2, m.c1 * m.k2);
  l.b2 = slot(m.c2, 1);
  l.w3 = slot(m.c3, m.c2 * m.k3);
  l.b3 = slot(m.c3, 1);
  l.wf = slot(m.d, m.c3 * l.t3);
  l.bf = slot(m.d, 1);
  l.enc.end = l.proj.begin = at;
  l.pw1 = slot(m.h, m.d);
  l.pb1 = slot(m.h, 1);
  l.pw2 = slot(m.h, m.h);
  l.pb2 = slot(m.h, 1);
  l.proj.end = l.head.begin = at;
  l.emb = slot(m.e, m.vocab);
  l.pos = slot(m.e, m.max_len);
  l.hw1 = slot(m.c, m.h + 4 * m.e);
  l.hb1 = slot(m.c, 1);
  l.hw2 = slot(m.vocab, m.c);
  l.hb2 = slot(m.vocab, 1);
  l.head.end = l.dsm.begin = at;
  l.u = slot(m.d, m.dsm_rank);
  l.dsm.end = at;
  l.total = at;
  return l;
}

inline Eigen::Map<const Mat> view(const std::vector<double>& p, const Slot& s) {
  return Eigen::Map<const Mat>(p.data() + s.off, s.rows, s.cols);
}
inline Eigen::Map<Mat> view(std::vector<double>& p, const Slot& s) {
  return Eigen::Map<Mat>(p.data() + s.off, s.rows, s.cols);
}

/// Parameters of one network plus its DSM basis. Teacher and student share
/// this type.
struct ModelState {
  ModelConfig config;
  std::vector<double> params;
  std::uint64_t seed = 0;

  Layout layout() const { return make_layout(config); }
};

/// Orthonormalizes the columns of `u` in place (thin QR, columns signed so R
/// has a positive diagonal).
inline void orthonormalize(Eigen::Ref<Mat> u) {
  Eigen::HouseholderQR<Mat> qr(u);
  Mat q = qr.householderQ() * Mat::Identity(u.rows(), u.cols());
  const Mat r = qr.matrixQR().topRows(u.cols()).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    if (r(j, j) < 0) q.col(j) *= -1.0;
  }
  u = q;
}

/// Fan-in scaled normal weights, zero biases, small embeddings, random
/// orthonormal DSM basis.
inline ModelState init_model(const ModelConfig& cfg, std::uint64_t seed) {
  const Layout l = make_layout(cfg);
  ModelState s{cfg, std::vector<double>(l.total, 0.0), seed};
  Rng rng(derive_seed(seed, hash_label("init")));
  auto fill = [&](const Slot& sl, double sd) {
    for (std::size_t i = 0; i < sl.size(); ++i) s.params[sl.off + i] = sd * rng.normal();
  };
  for (const Slot* w : {&l.w1, &l.w2, &l.w3, &l.wf, &l.pw1, &l.pw2, &l.hw1, &l.hw2}) {
    fill(*w, std::sqrt(2.0 / w->cols));
  }
  fill(l.emb, 0.3);
  fill(l.pos, 0.3);
  fill(l.u, 1.0);
  orthonormalize(view(s.params, l.u));
  return s;
}

inline double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * std::numbers::sqrt2 / 2.0)); }
inline double gelu_grad(double x) {
  constexpr double inv_sqrt_2pi = 0.3989422804014327;
  return 0.5 * (1.0 + std::erf(x * std::numbers::sqrt2 / 2.0)) + x * inv_sqrt_2pi * std::exp(-0.5 * x * x);
}
inline Mat gelu(const Mat& x) { return x.unaryExpr([](double v) { return gelu(v); }); }
inline Mat gelu_grad(const Mat& x) { return x.unaryExpr([](double v) { return gelu_grad(v); }); }

/// Unit-power I/Q rows (2 x L). An all-zero signal stays zero.
inline Mat signal_input(const IqSignal& s, int expected_length) {
  if (static_cast<int>(s.size()) != expected_length) {
    throw data_error("encode: expected " + std::to_string(expected_length) + " samples, got " +
                     std::to_string(s.size()));
  }
  const double p = mean_power(s);
  const double g = p > 0.0 ? 1.0 / std::sqrt(p) : 0.0;
  Mat x(2, expected_length);
  for (int t = 0; t < expected_length; ++t) {
    x(0, t) = g * s.samples()[static_cast<std::size_t>(t)].real();
    x(1, t) = g * s.samples()[static_cast<std::size_t>(t)].imag();
  }
  return x;
}

namespace detail {

// a: C x (T_in * B), column b*T_in + t. Result row i*k + j, column b*T_out + t.
inline Mat im2col(const Mat& a, int k, int s, int t_in, int t_out, int batch) {
  const auto ch = static_cast<int>(a.rows());
  Mat col(ch * k, static_cast<Eigen::Index>(t_out) * batch);
  for (int b = 0; b < batch; ++b) {
    for (int t = 0; t < t_out; ++t) {
      const Eigen::Index dst = static_cast<Eigen::Index>(b) * t_out + t;
      const Eigen::Index src = static_cast<Eigen::Index>(b) * t_in + static_cast<Eigen::Index>(t) * s;
      for (int i = 0; i < ch; ++i) {
        for (int j = 0; j < k; ++j) col(i * k + j, dst) = a(i, src + j);
      }
    }
  }
  return col;
}

inline Mat col2im(const Mat& col, int ch, int k, int s, int t_in, int t_out, int batch) {
  Mat a = Mat::Zero(ch, static_cast<Eigen::Index>(t_in) * batch);
  for (int b = 0; b < batch; ++b) {
    for (int t = 0; t < t_out; ++t) {
      const Eigen::Index c = static_cast<Eigen::Index>(b) * t_out + t;
      const Eigen::Index dst = static_cast<Eigen::Index>(b) * t_in + static_cast<Eigen::Index>(t) * s;
      for (int i = 0; i < ch; ++i) {
        for (int j = 0; j < k; ++j) a(i, dst + j) += col(i * k + j, c);
      }
    }
  }
  return a;
}

inline void add_to(std::vector<double>& g, const Slot& s, const Mat& m) { view(g, s) += m; }

}  // namespace detail

/// Keeps the feature normalization finite for an all-zero pre-activation.
inline constexpr double kFeatureEps = 1e-12;

struct EncoderCache {
  int batch = 0;
  Mat col1, pre1, col2, pre2, a2, col3, pre3, flat, fpre;
  Mat f;      // d x B, unit columns
  Vec norms;  // column norms of fpre
};

/// Forward pass over a batch of 2 x L inputs laid side by side (2 x L*B).
/// Features are the L2-normalized output of the final affine layer.
inline EncoderCache encoder_forward(const ModelState& st, const Layout& l, const Mat& x, int batch) {
  const auto& m = st.config;
  const auto& p = st.params;
  EncoderCache c;
  c.batch = batch;
  c.col1 = detail::im2col(x, m.k1, m.s1, m.input_length, l.t1, batch);
  c.pre1 = (view(p, l.w1) * c.col1).colwise() + view(p, l.b1).col(0);
  const Mat a1 = gelu(c.pre1);
  c.col2 = detail::im2col(a1, m.k2, m.s2, l.t1, l.t2, batch);
  c.pre2 = (view(p, l.w2) * c.col2).colwise() + view(p, l.b2).col(0);
  c.a2 = gelu(c.pre2);
  c.col3 = detail::im2col(c.a2, m.k3, m.s3, l.t2, l.t3, batch);
  c.pre3 = (view(p, l.w3) * c.col3).colwise() + view(p, l.b3).col(0);
  const Mat a3 = gelu(c.pre3);
  // channel-major blocks of one sample are contiguous in column-major storage
  c.flat = Eigen::Map<const Mat>(a3.data(), static_cast<Eigen::Index>(m.c3) * l.t3, batch);
  c.fpre = (view(p, l.wf) * c.flat).colwise() + view(p, l.bf).col(0);
  c.norms = (c.fpre.colwise().squaredNorm().array() + kFeatureEps).sqrt().transpose();
  c.f = c.fpre * c.norms.cwiseInverse().asDiagonal();
  return c;
}

inline void encoder_backward(const ModelState& st, const Layout& l, const EncoderCache& c, const Mat& df,
                             std::vector<double>& g) {
  const auto& m = st.config;
  const auto& p = st.params;
  // d(x/|x|) = (I - f fᵀ) dx / |x|
  const Vec along = (c.f.cwiseProduct(df)).colwise().sum().transpose();
  const Mat dfpre = (df - c.f * along.asDiagonal()) * c.norms.cwiseInverse().asDiagonal();
  detail::add_to(g, l.wf, dfpre * c.flat.transpose());
  detail::add_to(g, l.bf, dfpre.rowwise().sum());
  const Mat dflat = view(p, l.wf).transpose() * dfpre;
  const Mat da3 = Eigen::Map<const Mat>(dflat.data(), m.c3, static_cast<Eigen::Index>(l.t3) * c.batch);
  const Mat dpre3 = da3.cwiseProduct(gelu_grad(c.pre3));
  detail::add_to(g, l.w3, dpre3 * c.col3.transpose());
  detail::add_to(g, l.b3, dpre3.rowwise().sum());
  const Mat da2 = detail::col2im(view(p, l.w3).transpose() * dpre3, m.c2, m.k3, m.s3, l.t2, l.t3, c.batch);
  const Mat dpre2 = da2.cwiseProduct(gelu_grad(c.pre2));
  detail::add_to(g, l.w2, dpre2 * c.col2.transpose());
  detail::add_to(g, l.b2, dpre2.rowwise().sum());
  const Mat da1 = detail::col2im(view(p, l.w2).transpose() * dpre2, m.c1, m.k2, m.s2, l.t1, l.t2, c.batch);
  const Mat dpre1 = da1.cwiseProduct(gelu_grad(c.pre1));
  detail::add_to(g, l.w1, dpre1 * c.col1.transpose());
  detail::add_to(g, l.b1, dpre1.rowwise().sum());
}

struct ProjectorCache {
  Mat f, pre, g;
};

inline ProjectorCache projector_forward(const ModelState& st, const Layout& l, const Mat& f) {
  const auto& p = st.params;
  ProjectorCache c;
  c.f = f;
  c.pre = (view(p, l.pw1) * f).colwise() + view(p, l.pb1).col(0);
  c.g = (view(p, l.pw2) * gelu(c.pre)).colwise() + view(p, l.pb2).col(0);
  return c;
}

/// Returns d(loss)/d(f).
inline Mat projector_backward(const ModelState& st, const Layout& l, const ProjectorCache& c, const Mat& dg,
                              std::vector<double>& g) {
  const auto& p = st.params;
  detail::add_to(g, l.pw2, dg * gelu(c.pre).transpose());
  detail::add_to(g, l.pb2, dg.rowwise().sum());
  const Mat dpre = (view(p, l.pw2).transpose() * dg).cwiseProduct(gelu_grad(c.pre));
  detail::add_to(g, l.pw1, dpre * c.f.transpose());
  detail::add_to(g, l.pb1, dpre.rowwise().sum());
  return view(p, l.pw1).transpose() * dpre;
}

/// One next-token query: column `sample` of the projected features, the
/// question tokens and the answer prefix.
struct HeadQuery {
  int sample = 0;
  const std::vector<int>* question = nullptr;
  std::vector<int> prefix;
};

struct HeadCache {
  std::vector<HeadQuery> queries;
  Mat ctx, pre, z;  // z: V x P
};

inline void check_tokens(const std::vector<int>& ids, int vocab_size) {
  for (int id : ids) {
    if (id < 0 || id >= vocab_size) throw data_error("token id out of range: " + std::to_string(id));
  }
}

inline HeadCache head_forward(const ModelState& st, const Layout& l, const Mat& g, std::vector<HeadQuery> queries) {
  const auto& m = st.config;
  const auto& p = st.params;
  const auto emb = view(p, l.emb);
  const auto pos = view(p, l.pos);
  HeadCache c;
  c.ctx = Mat::Zero(m.h + 4 * m.e, static_cast<Eigen::Index>(queries.size()));
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto& hq = queries[q];
    check_tokens(*hq.question, m.vocab);
    check_tokens(hq.prefix, m.vocab);
    if (static_cast<int>(hq.prefix.size()) >= m.max_len) throw data_error("answer prefix longer than the head allows");
    auto col = c.ctx.col(static_cast<Eigen::Index>(q));
    col.head(m.h) = g.col(hq.sample);
    if (!hq.question->empty()) {
      Vec acc = Vec::Zero(m.e);
      for (int id : *hq.question) acc += emb.col(id);
      col.segment(m.h, m.e) = acc / static_cast<double>(hq.question->size());
    }
    if (!hq.prefix.empty()) {
      Vec acc = Vec::Zero(m.e);
      for (int id : hq.prefix) acc += emb.col(id);
      col.segment(m.h + m.e, m.e) = acc / static_cast<double>(hq.prefix.size());
      col.segment(m.h + 2 * m.e, m.e) = emb.col(hq.prefix.back());
    }
    col.segment(m.h + 3 * m.e, m.e) = pos.col(static_cast<Eigen::Index>(hq.prefix.size()));
  }
  c.pre = (view(p, l.hw1) * c.ctx).colwise() + view(p, l.hb1).col(0);
  c.z = (view(p, l.hw2) * gelu(c.pre)).colwise() + view(p, l.hb2).col(0);
  c.queries = std::move(queries);
  return c;
}

/// Accumulates head gradients; returns d(loss)/d(g) with `batch` columns.
inline Mat head_backward(const ModelState& st, const Layout& l, const HeadCache& c, const Mat& dz, int batch,
                         std::vector<double>& grad) {
  const auto& m = st.config;
  const auto& p = st.params;
  detail::add_to(grad, l.hw2, dz * gelu(c.pre).transpose());
  detail::add_to(grad, l.hb2, dz.rowwise().sum());
  const Mat dpre = (view(p, l.hw2).transpose() * dz).cwiseProduct(gelu_grad(c.pre));
  detail::add_to(grad, l.hw1, dpre * c.ctx.transpose());
  detail::add_to(grad, l.hb1, dpre.rowwise().sum());
  const Mat dctx = view(p, l.hw1).transpose() * dpre;
  auto demb = view(grad, l.emb);
  auto dpos = view(grad, l.pos);
  Mat dg = Mat::Zero(m.h, batch);
  for (std::size_t q = 0; q < c.queries.size(); ++q) {
    const auto& hq = c.queries[q];
    const auto col = dctx.col(static_cast<Eigen::Index>(q));
    dg.col(hq.sample) += col.head(m.h);
    if (!hq.question->empty()) {
      const Vec share = col.segment(m.h, m.e) / static_cast<double>(hq.question->size());
      for (int id : *hq.question) demb.col(id) += share;
    }
    if (!hq.prefix.empty()) {
      const Vec share = col.segment(m.h + m.e, m.e) / static_cast<double>(hq.prefix.size());
      for (int id : hq.prefix) demb.col(id) += share;
      demb.col(hq.prefix.back()) += col.segment(m.h + 2 * m.e, m.e);
    }
    dpos.col(static_cast<Eigen::Index>(hq.prefix.size())) += col.segment(m.h + 3 * m.e, m.e);
  }
  return dg;
}

/// Encoder features of one signal.
inline Vec encode(const ModelState& st, const IqSignal& signal) {
  const Layout l = st.layout();
  return encoder_forward(st, l, signal_input(signal, st.config.input_length), 1).f.col(0);
}

inline Vec project(const ModelState& st, const Vec& f) {
  if (f.size() != st.config.d) throw data_error("project: feature dimension mismatch");
  return projector_forward(st, st.layout(), f).g.col(0);
}

/// Logits over the answer vocabulary for the token following `prefix`.
inline Vec forward_next_token(const ModelState& st, const Vec& f_projected, const std::vector<int>& question,
                              const std::vector<int>& prefix) {
  if (f_projected.size() != st.config.h) throw data_error("forward_next_token: projected dimension mismatch");
  const Layout l = st.layout();
  return head_forward(st, l, f_projected, {HeadQuery{0, &question, prefix}}).z.col(0);
}

inline Vec softmax(const Vec& z) {
  const Vec e = (z.array() - z.maxCoeff()).exp();
  return e / e.sum();
}

inline Vec log_softmax(const Vec& z) {
  const double mx = z.maxCoeff();
  return z.array() - (mx + std::log((z.array() - mx).exp().sum()));
}

/// Sum of log-probabilities of `answer` (including its end token) given the
/// projected features.
inline double sequence_log_prob(const ModelState& st, const Vec& f_projected, const std::vector<int>& question,
                                const std::vector<int>& answer) {
  const Layout l = st.layout();
  std::vector<HeadQuery> qs;
  for (std::size_t i = 0; i < answer.size(); ++i) {
    qs.push_back({0, &question, std::vector<int>(answer.begin(), answer.begin() + static_cast<std::ptrdiff_t>(i))});
  }
  const HeadCache c = head_forward(st, l, f_projected, std::move(qs));
  double lp = 0.0;
  for (std::size_t i = 0; i < answer.size(); ++i) lp += log_softmax(c.z.col(static_cast<Eigen::Index>(i)))(answer[i]);
  return lp;
}

}  // namespace embench
