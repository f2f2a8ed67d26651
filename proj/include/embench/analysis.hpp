#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <vector>

#include "embench/bench.hpp"
#include "embench/losses.hpp"
#include "embench/strategy.hpp"

namespace embench {

/// (1 − α)·f_low + α·f_high.
inline Vec interpolate_features(const Vec& f_low, const Vec& f_high, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw config_error("interpolate_features: alpha must lie in [0, 1]");
  if (f_low.size() != f_high.size()) throw data_error("interpolate_features: dimensions differ");
  return (1.0 - alpha) * f_low + alpha * f_high;
}

/// Mean silhouette (Euclidean) of the columns of `features`. A point whose
/// own-cluster and nearest-cluster distances are both zero scores 0.
inline double feature_separability(const Mat& features, const std::vector<int>& labels) {
  const auto n = static_cast<std::size_t>(features.cols());
  if (labels.size() != n) throw data_error("feature_separability: label count mismatch");
  std::map<int, std::size_t> sizes;
  for (int c : labels) ++sizes[c];
  if (sizes.size() < 2) throw data_error("feature_separability: needs at least two classes");
  for (const auto& [c, k] : sizes) {
    if (k < 2) throw data_error("feature_separability: class " + std::to_string(c) + " has fewer than two points");
  }
  const Vec sq = features.colwise().squaredNorm();
  Mat dist = (-2.0 * features.transpose() * features).colwise() + sq;
  dist.rowwise() += sq.transpose();
  dist = dist.cwiseMax(0.0).cwiseSqrt();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::map<int, double> sum;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) sum[labels[j]] += dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    const double a = sum[labels[i]] / static_cast<double>(sizes[labels[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [c, s] : sum) {
      if (c != labels[i]) b = std::min(b, s / static_cast<double>(sizes[c]));
    }
    const double m = std::max(a, b);
    total += m > 0.0 ? (b - a) / m : 0.0;
  }
  return total / static_cast<double>(n);
}

/// Encoder features of many inputs (d x n), computed in chunks.
inline Mat encode_batch(const ModelState& st, const std::vector<const Mat*>& inputs, std::size_t chunk = 128) {
  const Layout l = st.layout();
  Mat out(st.config.d, static_cast<Eigen::Index>(inputs.size()));
  for (std::size_t b = 0; b < inputs.size(); b += chunk) {
    const std::size_t n = std::min(chunk, inputs.size() - b);
    const auto len = static_cast<Eigen::Index>(st.config.input_length);
    Mat x(2, len * static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) x.middleCols(static_cast<Eigen::Index>(k) * len, len) = *inputs[b + k];
    out.middleCols(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(n)) =
        encoder_forward(st, l, x, static_cast<int>(n)).f;
  }
  return out;
}

/// Index of the candidate answer with the highest sequence log-likelihood.
inline std::size_t best_option(const ModelState& st, const Vec& f, Task task,
                               const std::vector<std::string>& candidates) {
  const Vec g = project(st, f);
  const auto q = question_tokens(task);
  std::size_t best = 0;
  double best_lp = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const double lp = sequence_log_prob(st, g, q, tokenize_answer(task, candidates[k]));
    if (lp > best_lp) {
      best_lp = lp;
      best = k;
    }
  }
  return best;
}

/// Greedy decoding of an answer token sequence.
inline std::vector<int> greedy_decode(const ModelState& st, const Vec& f, Task task) {
  const Vec g = project(st, f);
  const auto q = question_tokens(task);
  std::vector<int> out;
  while (static_cast<int>(out.size()) + 1 < st.config.max_len) {
    Eigen::Index id = 0;
    forward_next_token(st, g, q, out).maxCoeff(&id);
    if (id == Vocab::kEos) break;
    out.push_back(static_cast<int>(id));
  }
  return out;
}

/// A model's reply to a bench item: the option letter for perception tasks,
/// the strategy text of the decoded key for reasoning tasks (empty when the
/// key is unknown).
inline std::string model_response(const ModelState& st, const Vec& f, const BenchItem& item,
                                  const StrategyTable& table = builtin_strategy_table()) {
  if (item.options) {
    const std::vector<std::string> cands((*item.options).begin(), (*item.options).begin() + 4);
    return std::string(1, kLetters[best_option(st, f, item.task, cands)]);
  }
  const std::string key = detokenize(greedy_decode(st, f, item.task));
  try {
    return lookup_strategy(table, item.task, key).text;
  } catch (const Error&) {
    return "";
  }
}

/// Fraction of perception items whose highest-likelihood option is the gold
/// one. `features` holds one column per item.
inline double choice_accuracy(const ModelState& st, const Mat& features, const std::vector<BenchItem>& items) {
  if (items.empty()) throw data_error("choice_accuracy: no items");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!items[i].options) throw data_error("choice_accuracy: item " + items[i].id + " has no options");
    hits += model_response(st, features.col(static_cast<Eigen::Index>(i)), items[i]) == items[i].gold;
  }
  return static_cast<double>(hits) / static_cast<double>(items.size());
}

/// Spearman rank correlation (average ranks for ties).
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw data_error("spearman: need two equal-length series");
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const Eigen::Map<const Vec> a(rx.data(), static_cast<Eigen::Index>(rx.size()));
  const Eigen::Map<const Vec> b(ry.data(), static_cast<Eigen::Index>(ry.size()));
  const Vec da = a.array() - a.mean(), db = b.array() - b.mean();
  const double den = std::sqrt(da.squaredNorm() * db.squaredNorm());
  return den > 0.0 ? da.dot(db) / den : 0.0;
}

}  // namespace embench
