#pragma once

#include <span>
#include <string>
#include <vector>

#include "embench/dsm.hpp"
#include "embench/model.hpp"

namespace embench {

/// One training example: normalized 2 x L input, question and gold answer
/// (ending in <eos>).
struct Example {
  Mat x;
  std::vector<int> question;
  std::vector<int> answer;
};

enum class FeatMode { TeacherTarget, LiteralPaper };

inline FeatMode parse_feat_mode(const std::string& s) {
  if (s == "teacher_target") return FeatMode::TeacherTarget;
  if (s == "literal_paper") return FeatMode::LiteralPaper;
  throw config_error("unknown feature loss mode: " + s);
}

inline const char* feat_mode_name(FeatMode m) {
  return m == FeatMode::TeacherTarget ? "teacher_target" : "literal_paper";
}

struct KdConfig {
  double lambda_logits = 1.0;
  double lambda_feat = 0.5;
  double temperature = 2.0;
  double lr = 5e-5;
  std::size_t batch = 64;
  std::size_t epochs = 8;
  FeatMode mode = FeatMode::TeacherTarget;
  bool use_dsm = true;      // false: the feature loss compares raw features
  bool train_head = false;  // answer head frozen during distillation by default
  double weight_decay = 0.01;
  bool init_basis_from_teacher = true;
  std::uint64_t seed = 4;
};

inline void validate(const KdConfig& c) {
  if (!(c.temperature > 0.0)) throw config_error("temperature must be positive");
  if (c.lambda_logits < 0.0 || c.lambda_feat < 0.0) throw config_error("loss weights must be non-negative");
  if (!(c.lr > 0.0) || c.batch == 0 || c.epochs == 0) throw config_error("lr, batch and epochs must be positive");
}

namespace detail {

inline Mat stack_inputs(std::span<const Example* const> ex) {
  const auto len = ex.front()->x.cols();
  Mat x(2, len * static_cast<Eigen::Index>(ex.size()));
  for (std::size_t b = 0; b < ex.size(); ++b) {
    if (ex[b]->x.rows() != 2 || ex[b]->x.cols() != len) throw data_error("batch inputs differ in shape");
    x.middleCols(static_cast<Eigen::Index>(b) * len, len) = ex[b]->x;
  }
  return x;
}

// One query per gold position of every example (teacher forcing).
inline std::vector<HeadQuery> gold_queries(std::span<const Example* const> ex) {
  std::vector<HeadQuery> qs;
  for (std::size_t b = 0; b < ex.size(); ++b) {
    const auto& a = ex[b]->answer;
    if (a.empty()) throw data_error("empty answer sequence");
    for (std::size_t i = 0; i < a.size(); ++i) {
      qs.push_back({static_cast<int>(b), &ex[b]->question,
                    std::vector<int>(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(i))});
    }
  }
  return qs;
}

inline std::vector<int> gold_targets(std::span<const Example* const> ex) {
  std::vector<int> t;
  for (const auto* e : ex) t.insert(t.end(), e->answer.begin(), e->answer.end());
  return t;
}

struct Forward {
  EncoderCache enc;
  ProjectorCache proj;
  HeadCache head;
};

inline Forward forward_batch(const ModelState& st, const Layout& l, std::span<const Example* const> ex) {
  if (ex.empty()) throw data_error("empty batch");
  for (const auto* e : ex) check_tokens(e->answer, st.config.vocab);  // targets index the logits
  Forward fw;
  fw.enc = encoder_forward(st, l, stack_inputs(ex), static_cast<int>(ex.size()));
  fw.proj = projector_forward(st, l, fw.enc.f);
  fw.head = head_forward(st, l, fw.proj.g, gold_queries(ex));
  return fw;
}

// Weighted sum of per-position cross-entropies; writes d/dz when asked.
inline double cross_entropy(const Mat& z, const std::vector<int>& targets, const std::vector<double>& weights,
                            Mat* dz) {
  double loss = 0.0;
  for (Eigen::Index q = 0; q < z.cols(); ++q) {
    const Vec lp = log_softmax(z.col(q));
    const auto t = targets[static_cast<std::size_t>(q)];
    const double w = weights[static_cast<std::size_t>(q)];
    loss -= w * lp(t);
    if (dz) {
      dz->col(q) = w * lp.array().exp();
      (*dz)(t, q) -= w;
    }
  }
  return loss;
}

inline std::vector<const Example*> pointers(std::span<const Example> ex) {
  std::vector<const Example*> p;
  for (const auto& e : ex) p.push_back(&e);
  return p;
}

}  // namespace detail

/// Mean over the batch of −Σᵢ log P(aᵢ | a_<i, Q, S). Adds d/dθ into `grad`
/// (sized like the parameters) when given.
inline double loss_pretrain(const ModelState& st, std::span<const Example* const> batch,
                            std::vector<double>* grad = nullptr) {
  const Layout l = st.layout();
  const auto fw = detail::forward_batch(st, l, batch);
  const auto targets = detail::gold_targets(batch);
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  const std::vector<double> w(targets.size(), inv_b);
  Mat dz(fw.head.z.rows(), fw.head.z.cols());
  const double loss = detail::cross_entropy(fw.head.z, targets, w, grad ? &dz : nullptr);
  if (grad) {
    const int b = static_cast<int>(batch.size());
    const Mat dg = head_backward(st, l, fw.head, dz, b, *grad);
    const Mat df = projector_backward(st, l, fw.proj, dg, *grad);
    encoder_backward(st, l, fw.enc, df, *grad);
  }
  return loss;
}

inline double loss_pretrain(const ModelState& st, std::span<const Example> batch, std::vector<double>* grad = nullptr) {
  const auto p = detail::pointers(batch);
  return loss_pretrain(st, std::span<const Example* const>(p), grad);
}

struct FeatLoss {
  double value = 0.0;
  Vec grad_f;  // d/d f_student
  Mat grad_u;  // d/dU (empty without a basis)
};

/// teacher_target: ‖Φ(f_s) − f_t‖²; literal_paper: ‖Φ(f_s) − f_s‖². Without a
/// basis Φ is the identity.
inline FeatLoss loss_feat(const Vec& f_s, const Vec& f_t, const Mat* u, FeatMode mode) {
  if (f_s.size() != f_t.size()) throw data_error("loss_feat: feature dimensions differ");
  FeatLoss out;
  if (!u) {
    const Vec r = mode == FeatMode::TeacherTarget ? Vec(f_s - f_t) : Vec::Zero(f_s.size());
    out.value = r.squaredNorm();
    out.grad_f = 2.0 * r;
    return out;
  }
  if (u->rows() != f_s.size()) throw data_error("loss_feat: basis dimension mismatch");
  const Vec y = u->transpose() * f_s;
  const Vec phi = *u * y;
  const Vec& target = mode == FeatMode::TeacherTarget ? f_t : f_s;
  const Vec r = phi - target;
  out.value = r.squaredNorm();
  const Vec ur = u->transpose() * r;
  // Φ is linear in f_s; the literal target also depends on f_s
  out.grad_f = 2.0 * (*u * ur);
  if (mode == FeatMode::LiteralPaper) out.grad_f -= 2.0 * r;
  out.grad_u = 2.0 * (r * y.transpose() + f_s * ur.transpose());
  return out;
}

struct LogitLoss {
  double value = 0.0;
  Vec grad;  // d/d z_student
};

/// T² · KL(softmax(z_s/T) ‖ softmax(z_t/T)).
inline LogitLoss loss_logits(const Vec& z_s, const Vec& z_t, double temperature) {
  if (!(temperature > 0.0)) throw config_error("loss_logits: temperature must be positive");
  if (z_s.size() != z_t.size()) throw data_error("loss_logits: logit lengths differ");
  const Vec ls = log_softmax(z_s / temperature);
  const Vec lt = log_softmax(z_t / temperature);
  const Vec ps = ls.array().exp();
  const double kl = ps.dot(ls - lt);
  LogitLoss out;
  out.value = temperature * temperature * kl;
  out.grad = temperature * ps.cwiseProduct((ls - lt).array().matrix() - Vec::Constant(ls.size(), kl));
  return out;
}

/// L_task + λ_logits·L_logits + λ_feat·L_feat.
inline double combine_losses(double task, double logits, double feat, const KdConfig& cfg) {
  return task + cfg.lambda_logits * logits + cfg.lambda_feat * feat;
}

/// Distillation example: the student sees `low`, the teacher's features and
/// gold-position logits come from the matching high-SNR input.
struct KdExample {
  Example low;
  Vec f_teacher;
  Mat z_teacher;  // V x |answer|
  bool replay = false;
};

struct KdLoss {
  double task = 0.0, feat = 0.0, logits = 0.0, total = 0.0;
};

/// Batch-mean distillation loss. Replay examples contribute L_task only. With
/// `grad`, adds d/dθ (including the DSM basis when used).
inline KdLoss loss_total(const ModelState& st, std::span<const KdExample* const> batch, const KdConfig& cfg,
                         std::vector<double>* grad = nullptr) {
  if (batch.empty()) throw data_error("empty batch");
  const Layout l = st.layout();
  std::vector<const Example*> ex;
  for (const auto* k : batch) ex.push_back(&k->low);
  const auto fw = detail::forward_batch(st, l, ex);
  const auto targets = detail::gold_targets(ex);
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  const std::vector<double> w(targets.size(), inv_b);
  Mat dz(fw.head.z.rows(), fw.head.z.cols());
  KdLoss out;
  out.task = detail::cross_entropy(fw.head.z, targets, w, grad ? &dz : nullptr);
  if (!grad) dz.setZero();

  const Mat u = view(st.params, l.u);
  Mat df = Mat::Zero(fw.enc.f.rows(), fw.enc.f.cols());
  Mat du = Mat::Zero(u.rows(), u.cols());
  Eigen::Index q = 0;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const auto& k = *batch[b];
    const auto m = static_cast<Eigen::Index>(k.low.answer.size());
    if (k.replay) {
      q += m;
      continue;
    }
    if (cfg.lambda_logits > 0.0) {
      if (k.z_teacher.cols() != m) throw data_error("teacher logits do not cover the answer");
      for (Eigen::Index i = 0; i < m; ++i) {
        const auto ll = loss_logits(fw.head.z.col(q + i), k.z_teacher.col(i), cfg.temperature);
        out.logits += inv_b * ll.value;
        if (grad) dz.col(q + i) += cfg.lambda_logits * inv_b * ll.grad;
      }
    }
    if (cfg.lambda_feat > 0.0) {
      const auto fl = loss_feat(fw.enc.f.col(static_cast<Eigen::Index>(b)), k.f_teacher,
                                cfg.use_dsm ? &u : nullptr, cfg.mode);
      out.feat += inv_b * fl.value;
      if (grad) {
        df.col(static_cast<Eigen::Index>(b)) += cfg.lambda_feat * inv_b * fl.grad_f;
        if (cfg.use_dsm) du += cfg.lambda_feat * inv_b * fl.grad_u;
      }
    }
    q += m;
  }
  out.total = combine_losses(out.task, out.logits, out.feat, cfg);
  if (grad) {
    const int nb = static_cast<int>(batch.size());
    const Mat dg = head_backward(st, l, fw.head, dz, nb, *grad);
    df += projector_backward(st, l, fw.proj, dg, *grad);
    encoder_backward(st, l, fw.enc, df, *grad);
    view(*grad, l.u) += du;
  }
  return out;
}

inline KdLoss loss_total(const ModelState& st, std::span<const KdExample> batch, const KdConfig& cfg,
                         std::vector<double>* grad = nullptr) {
  std::vector<const KdExample*> p;
  for (const auto& k : batch) p.push_back(&k);
  return loss_total(st, std::span<const KdExample* const>(p), cfg, grad);
}

/// Teacher features and gold-position logits for one high-SNR example.
inline std::pair<Vec, Mat> teacher_targets(const ModelState& teacher, const Example& high) {
  const Layout l = teacher.layout();
  const Example* p = &high;
  const auto fw = detail::forward_batch(teacher, l, std::span<const Example* const>(&p, 1));
  return {fw.enc.f.col(0), fw.head.z};
}

}  // namespace embench
