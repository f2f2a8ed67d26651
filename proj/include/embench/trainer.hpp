#pragma once

#include <cmath>
#include <filesystem>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "embench/adamw.hpp"
#include "embench/corpus.hpp"
#include "embench/dsm.hpp"
#include "embench/losses.hpp"
#include "embench/parallel.hpp"

namespace embench {

struct TrainConfig {
  ModelConfig model;
  double lr = 1e-3;
  std::size_t batch = 64;
  std::size_t epochs = 8;
  double weight_decay = 0.01;
  std::uint64_t seed = 5;
};

/// One optimizer step.
struct LogRow {
  std::size_t step = 0, epoch = 0;
  double task = 0.0, feat = 0.0, logits = 0.0, total = 0.0;
  double orth_error = 0.0, idem_error = 0.0;
};

struct TrainResult {
  ModelState state;
  std::vector<LogRow> log;
  std::vector<double> epoch_loss;  // mean total loss per epoch
};

/// Raised when a loss turns non-finite; carries the parameters from before
/// the offending step.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, ModelState last_good)
      : Error(ErrorKind::Numeric, what), last_good_(std::move(last_good)) {}
  const ModelState& last_good() const noexcept { return last_good_; }

 private:
  ModelState last_good_;
};

inline std::string log_csv(const std::vector<LogRow>& log) {
  std::ostringstream os;
  os.precision(10);
  os << "step,epoch,L_task,L_feat,L_logits,total,orth_error,idem_error\n";
  for (const auto& r : log) {
    os << r.step << ',' << r.epoch << ',' << r.task << ',' << r.feat << ',' << r.logits << ',' << r.total << ','
       << r.orth_error << ',' << r.idem_error << '\n';
  }
  return os.str();
}

namespace detail {

inline std::vector<char> range_mask(std::size_t n, std::initializer_list<Range> ranges) {
  std::vector<char> m(n, 0);
  for (const auto& r : ranges) std::fill(m.begin() + static_cast<std::ptrdiff_t>(r.begin),
                                         m.begin() + static_cast<std::ptrdiff_t>(r.end), 1);
  return m;
}

inline std::vector<std::vector<std::size_t>> epoch_batches(std::size_t n, std::size_t batch, std::uint64_t seed,
                                                           std::size_t epoch) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(derive_seed(seed, hash_label("epoch")), epoch));
  rng.shuffle(order);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t b = 0; b < n; b += batch) {
    out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(b),
                     order.begin() + static_cast<std::ptrdiff_t>(std::min(n, b + batch)));
  }
  return out;
}

inline std::size_t batches_per_epoch(std::size_t n, std::size_t batch) { return (n + batch - 1) / batch; }

}  // namespace detail

/// Next-token training from scratch on (signal, question, answer) examples.
/// Updates encoder, projector and head; the DSM basis is untouched.
inline TrainResult train_stage1(const std::vector<Example>& data, const TrainConfig& cfg,
                                const std::function<void(const LogRow&)>& on_step = {}) {
  if (data.empty()) throw data_error("stage 1: empty training set");
  if (cfg.batch == 0 || cfg.epochs == 0 || !(cfg.lr > 0.0)) throw config_error("stage 1: bad optimizer settings");
  TrainResult res{init_model(cfg.model, cfg.seed), {}, {}};
  const Layout l = res.state.layout();
  const auto trainable = detail::range_mask(l.total, {l.enc, l.proj, l.head});
  AdamW opt(l.total);
  const std::size_t total_steps = cfg.epochs * detail::batches_per_epoch(data.size(), cfg.batch);
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& idx : detail::epoch_batches(data.size(), cfg.batch, cfg.seed, epoch)) {
      std::vector<const Example*> batch;
      for (auto i : idx) batch.push_back(&data[i]);
      std::vector<double> grad(l.total, 0.0);
      const double loss = loss_pretrain(res.state, batch, &grad);
      if (!std::isfinite(loss)) {
        throw DivergenceError("stage 1 loss is not finite at step " + std::to_string(step), res.state);
      }
      opt.step(res.state.params, grad, cosine_lr(cfg.lr, step, total_steps), cfg.weight_decay, trainable, trainable);
      LogRow row{step, epoch, loss, 0.0, 0.0, loss, 0.0, 0.0};
      res.log.push_back(row);
      if (on_step) on_step(row);
      sum += loss * static_cast<double>(idx.size());
      count += idx.size();
      ++step;
    }
    res.epoch_loss.push_back(sum / static_cast<double>(count));
  }
  return res;
}

/// Distillation. The student starts as a copy of the frozen teacher; teacher
/// outputs are already folded into `data`. The DSM basis is re-orthonormalized
/// after every step.
inline TrainResult train_stage2(const std::vector<KdExample>& data, const ModelState& teacher, const KdConfig& cfg,
                                const std::function<void(const LogRow&)>& on_step = {}) {
  validate(cfg);
  if (data.empty()) throw data_error("stage 2: empty training set");
  TrainResult res{teacher, {}, {}};
  const Layout l = res.state.layout();
  const bool learn_basis = cfg.use_dsm && cfg.lambda_feat > 0.0;
  if (learn_basis && cfg.init_basis_from_teacher) {
    std::vector<Eigen::Index> cols;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (!data[i].replay) cols.push_back(static_cast<Eigen::Index>(i));
    }
    if (static_cast<int>(cols.size()) > res.state.config.dsm_rank) {
      Mat f(res.state.config.d, static_cast<Eigen::Index>(cols.size()));
      for (std::size_t j = 0; j < cols.size(); ++j) f.col(static_cast<Eigen::Index>(j)) = data[static_cast<std::size_t>(cols[j])].f_teacher;
      view(res.state.params, l.u) = principal_basis(f, res.state.config.dsm_rank);
    }
  }
  const Range none{0, 0};
  const auto trainable = detail::range_mask(l.total, {l.enc, l.proj, cfg.train_head ? l.head : none,
                                                      learn_basis ? l.dsm : none});
  const auto decay = detail::range_mask(l.total, {l.enc, l.proj, cfg.train_head ? l.head : none});
  AdamW opt(l.total);
  const std::size_t total_steps = cfg.epochs * detail::batches_per_epoch(data.size(), cfg.batch);
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& idx : detail::epoch_batches(data.size(), cfg.batch, cfg.seed, epoch)) {
      std::vector<const KdExample*> batch;
      for (auto i : idx) batch.push_back(&data[i]);
      std::vector<double> grad(l.total, 0.0);
      const KdLoss loss = loss_total(res.state, batch, cfg, &grad);
      if (!std::isfinite(loss.total)) {
        throw DivergenceError("stage 2 loss is not finite at step " + std::to_string(step), res.state);
      }
      opt.step(res.state.params, grad, cosine_lr(cfg.lr, step, total_steps), cfg.weight_decay, trainable, decay);
      auto u = view(res.state.params, l.u);
      if (learn_basis) orthonormalize(u);
      const Mat um = u;
      LogRow row{step, epoch, loss.task, loss.feat, loss.logits, loss.total, orthonormality_error(um),
                 idempotence_error(um)};
      res.log.push_back(row);
      if (on_step) on_step(row);
      sum += loss.total * static_cast<double>(idx.size());
      count += idx.size();
      ++step;
    }
    res.epoch_loss.push_back(sum / static_cast<double>(count));
  }
  return res;
}

// ---------------------------------------------------------------------------
// Artifact loading

/// Stage-1 examples from a corpus directory, optionally restricted to `tasks`.
inline std::vector<Example> load_corpus_examples(const fs::path& dir, const std::vector<Task>& tasks = {},
                                                 std::size_t workers = 1, int input_length = kWindowLength) {
  std::vector<InstructionSample> samples;
  for (auto& s : read_corpus(dir)) {
    if (tasks.empty() || std::find(tasks.begin(), tasks.end(), s.task) != tasks.end()) samples.push_back(std::move(s));
  }
  return parallel_map(samples.size(), workers, [&](std::size_t i) {
    const auto& s = samples[i];
    return Example{signal_input(read_iq(dir / s.signal_ref), input_length), question_tokens(s.task),
                   tokenize_answer(s.task, answer_string(s.task, s.meta))};
  });
}

/// High/low example pairs of a KD dataset, in file order.
struct KdSource {
  Example high, low;
  bool replay = false;
  Task task = Task::MOD;
};

inline std::vector<KdSource> load_kd_sources(const fs::path& dir, const std::vector<Task>& tasks = {},
                                             std::size_t workers = 1, int input_length = kWindowLength) {
  std::vector<KdPair> pairs;
  for (auto& p : read_kd(dir)) {
    if (tasks.empty() || std::find(tasks.begin(), tasks.end(), p.task) != tasks.end()) pairs.push_back(std::move(p));
  }
  return parallel_map(pairs.size(), workers, [&](std::size_t i) {
    const auto& p = pairs[i];
    const auto q = question_tokens(p.task);
    const auto a = tokenize_answer(p.task, answer_string(p.task, p.meta));
    Example low{signal_input(read_iq(dir / p.low_ref), input_length), q, a};
    Example high = p.is_replay ? low : Example{signal_input(read_iq(dir / p.high_ref), input_length), q, a};
    return KdSource{std::move(high), std::move(low), p.is_replay, p.task};
  });
}

/// Attaches frozen-teacher targets to each low-SNR example.
inline std::vector<KdExample> make_kd_examples(const ModelState& teacher, const std::vector<KdSource>& src) {
  std::vector<KdExample> out;
  out.reserve(src.size());
  for (const auto& s : src) {
    KdExample k{s.low, {}, {}, s.replay};
    if (!s.replay) std::tie(k.f_teacher, k.z_teacher) = teacher_targets(teacher, s.high);
    out.push_back(std::move(k));
  }
  return out;
}

}  // namespace embench
