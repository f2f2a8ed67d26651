#pragma once

// Shared fixtures for the model tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "embench/losses.hpp"

namespace embench::testing {

/// A network small enough to finite-difference every parameter.
inline ModelConfig tiny_model() {
  ModelConfig m;
  m.input_length = 64;
  m.c1 = 3, m.k1 = 8, m.s1 = 4;
  m.c2 = 4, m.k2 = 4, m.s2 = 2;
  m.c3 = 4, m.k3 = 2, m.s3 = 2;
  m.d = 8;
  m.h = 6;
  m.e = 4;
  m.c = 6;
  m.vocab = 10;
  m.max_len = 6;
  m.dsm_rank = 2;
  return m;
}

inline std::vector<Example> random_examples(const ModelConfig& m, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Example> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k].x = Mat(2, m.input_length);
    for (Eigen::Index i = 0; i < out[k].x.size(); ++i) out[k].x.data()[i] = rng.normal();
    out[k].question = {1, static_cast<int>(2 + k % 3)};
    out[k].answer = {static_cast<int>(3 + k % 5), 0};
  }
  return out;
}

/// Distillation batch whose teacher targets come from `teacher` on a shifted
/// copy of each input; the last example is a replay example.
inline std::vector<KdExample> random_kd(const ModelState& teacher, std::size_t n, std::uint64_t seed) {
  const auto low = random_examples(teacher.config, n, seed);
  std::vector<KdExample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Example high = low[i];
    high.x.array() += 0.3;
    const auto [f, z] = teacher_targets(teacher, high);
    out[i] = {low[i], f, z, i + 1 == n};
  }
  return out;
}

/// Largest relative error between the analytic gradient and central finite
/// differences over every parameter.
using LossFn = std::function<double(const ModelState&, std::vector<double>*)>;

inline double max_gradient_error(const ModelState& st, const LossFn& f) {
  std::vector<double> g(st.params.size(), 0.0);
  f(st, &g);
  double worst = 0.0;
  ModelState p = st;
  for (std::size_t i = 0; i < st.params.size(); ++i) {
    const double h = 1e-5 * std::max(std::abs(st.params[i]), 1.0);
    p.params[i] = st.params[i] + h;
    const double a = f(p, nullptr);
    p.params[i] = st.params[i] - h;
    const double b = f(p, nullptr);
    p.params[i] = st.params[i];
    const double fd = (a - b) / (2.0 * h);
    const double den = std::max({std::abs(fd), std::abs(g[i]), 1e-3});
    worst = std::max(worst, std::abs(fd - g[i]) / den);
  }
  return worst;
}

}  // namespace embench::testing
