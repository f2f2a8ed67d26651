#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "embench/signal.hpp"

namespace embench {

struct OracleConfig {
  std::size_t envelope_window = 8;
  double threshold_weight = 0.5;  // threshold = w*(max + median)
  std::size_t min_run = 3;        // shorter runs are treated as noise
  double bandwidth_drop_db = 6.0;
  std::size_t frame = 32;
  std::size_t hop = 16;
  double jam_reference_power = 1.0;
  double jam_margin_db = 6.0;
};

struct ParamEstimate {
  double bandwidth_hz = 0.0;
  bool bandwidth_valid = false;
  double duty_cycle = 0.0;
  bool duty_cycle_valid = false;
  int num_pulses = 0;
  bool num_pulses_valid = false;
  double prf_hz = 0.0;
  bool prf_valid = false;
  double pulse_width_s = 0.0;
  bool pulse_width_valid = false;
};

/// |x| smoothed by a centred moving average over [i - W/2, i + W/2 - 1],
/// truncated at the edges.
inline std::vector<double> envelope(std::span<const cplx> x, std::size_t w = 8) {
  const std::size_t n = x.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + std::abs(x[i]);
  std::vector<double> env(n);
  const auto half = static_cast<std::ptrdiff_t>(w / 2);
  for (std::size_t i = 0; i < n; ++i) {
    const auto lo = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(i) - half);
    const auto hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(n),
                                             static_cast<std::ptrdiff_t>(i) - half + static_cast<std::ptrdiff_t>(w));
    env[i] = (prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(lo)]) / static_cast<double>(hi - lo);
  }
  return env;
}

inline std::vector<double> envelope(const IqSignal& s, std::size_t w = 8) { return envelope(s.samples(), w); }

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t m = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m), v.end());
  double hi = v[m];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m));
  return 0.5 * (lo + hi);
}

/// Pulse runs as fractional-sample [rise, fall) intervals.
inline std::vector<std::pair<double, double>> pulse_runs(const std::vector<double>& env, double thr,
                                                         std::size_t min_run) {
  std::vector<std::pair<double, double>> runs;
  const std::size_t n = env.size();
  std::size_t i = 0;
  while (i < n) {
    if (env[i] <= thr) {
      ++i;
      continue;
    }
    const std::size_t a = i;
    while (i < n && env[i] > thr) ++i;
    const std::size_t b = i;  // first sample below, or n
    if (b - a < min_run) continue;
    const double rise = a == 0 ? 0.0 : static_cast<double>(a - 1) + (thr - env[a - 1]) / (env[a] - env[a - 1]);
    const double fall = b == n ? static_cast<double>(n)
                               : static_cast<double>(b - 1) + (env[b - 1] - thr) / (env[b - 1] - env[b]);
    runs.emplace_back(rise, fall);
  }
  return runs;
}

/// Pulse width, PRF, pulse count and duty cycle from envelope threshold runs.
/// A signal without gaps (median envelope above half its peak) is reported as a
/// single continuous pulse with duty 1 and PRF invalid.
inline ParamEstimate estimate_pulse_params(const IqSignal& signal, const OracleConfig& cfg = {}) {
  ParamEstimate est;
  const double fs = signal.sample_rate_hz();
  const auto env = envelope(signal, cfg.envelope_window);
  const double mx = *std::max_element(env.begin(), env.end());
  if (!(mx > 0.0)) return est;
  const double med = median(env);
  if (med > 0.5 * mx) {
    est.num_pulses = 1;
    est.num_pulses_valid = true;
    est.pulse_width_s = signal.duration_s();
    est.pulse_width_valid = true;
    est.duty_cycle = 1.0;
    est.duty_cycle_valid = true;
    return est;
  }
  const double thr = cfg.threshold_weight * (mx + med);
  const auto runs = pulse_runs(env, thr, cfg.min_run);
  if (runs.empty()) return est;
  double total = 0.0;
  for (const auto& [r, f] : runs) total += f - r;
  est.num_pulses = static_cast<int>(runs.size());
  est.num_pulses_valid = true;
  est.pulse_width_s = total / static_cast<double>(runs.size()) / fs;
  est.pulse_width_valid = true;
  if (runs.size() >= 2) {
    const double pri = (runs.back().first - runs.front().first) / static_cast<double>(runs.size() - 1);
    est.prf_hz = fs / pri;
    est.prf_valid = true;
    est.duty_cycle = std::min(1.0, est.pulse_width_s * est.prf_hz);
    est.duty_cycle_valid = true;
  }
  return est;
}

/// Occupied bandwidth from the periodogram edges: after removing a median noise
/// floor, the span between the outermost bins within `drop_db` of the mean
/// in-band level (bins at or above half the peak). nullopt for a zero spectrum.
inline std::optional<double> estimate_bandwidth(const IqSignal& signal, double drop_db = 6.0) {
  if (signal.size() < 64) throw data_error("estimate_bandwidth needs at least 64 samples");
  Spectrum sp = periodogram(signal);
  const double total = sp.total();
  if (!(total > 0.0)) return std::nullopt;
  const double mean = total / static_cast<double>(sp.bins.size());
  // median of exponentially distributed noise bins is mean * ln 2
  const double floor = median(sp.bins) / std::numbers::ln2;
  if (floor > 0.0 && mean / floor > 3.0) {
    for (double& b : sp.bins) b = std::max(0.0, b - floor);
  }
  const double mx = *std::max_element(sp.bins.begin(), sp.bins.end());
  if (!(mx > 0.0)) return std::nullopt;
  double ref = 0.0;
  std::size_t cnt = 0;
  for (double b : sp.bins) {
    if (b >= 0.5 * mx) {
      ref += b;
      ++cnt;
    }
  }
  ref /= static_cast<double>(cnt);
  const double thr = ref * db_to_linear(-drop_db);
  std::size_t first = sp.bins.size(), last = 0;
  for (std::size_t k = 0; k < sp.bins.size(); ++k) {
    if (sp.bins[k] >= thr) {
      first = std::min(first, k);
      last = k;
    }
  }
  return static_cast<double>(last - first + 1) * sp.bin_width_hz;
}

namespace detail {

// Best single split point of a piecewise-constant power model on p[lo, hi):
// minimises n1*log(mean1) + n2*log(mean2).
inline std::size_t power_changepoint(const std::vector<double>& p, std::size_t lo, std::size_t hi) {
  std::vector<double> pre(hi - lo + 1, 0.0);
  for (std::size_t i = lo; i < hi; ++i) pre[i - lo + 1] = pre[i - lo] + p[i];
  const double tiny = 1e-300;
  std::size_t best = lo + 1;
  double best_cost = INFINITY;
  for (std::size_t s = lo + 1; s < hi; ++s) {
    const double n1 = static_cast<double>(s - lo), n2 = static_cast<double>(hi - s);
    const double m1 = pre[s - lo] / n1 + tiny, m2 = (pre[hi - lo] - pre[s - lo]) / n2 + tiny;
    const double cost = n1 * std::log(m1) + n2 * std::log(m2);
    if (cost < best_cost) {
      best_cost = cost;
      best = s;
    }
  }
  return best;
}

}  // namespace detail

/// Jammed span [start, end). Frame power (in dB above the reference level, less
/// a margin) is scored per frame; the maximum-sum contiguous run of frames is
/// the coarse segment, and each interior edge is refined to the sample by a
/// power changepoint search. nullopt when no frame rises above the margin.
inline std::optional<std::pair<std::size_t, std::size_t>> detect_jam_segment(const IqSignal& signal,
                                                                             const OracleConfig& cfg = {}) {
  const std::size_t n = signal.size();
  if (n < cfg.frame || cfg.hop == 0) return std::nullopt;
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = std::norm(signal[i]);
  const std::size_t frames = (n - cfg.frame) / cfg.hop + 1;
  std::vector<double> score(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (std::size_t i = f * cfg.hop; i < f * cfg.hop + cfg.frame; ++i) acc += p[i];
    acc = std::max(acc / static_cast<double>(cfg.frame), 1e-30);
    score[f] = linear_to_db(acc / cfg.jam_reference_power) - cfg.jam_margin_db;
  }
  // Kadane
  double best = 0.0, cur = 0.0;
  std::size_t best_a = 0, best_b = 0, a = 0;
  bool found = false;
  for (std::size_t f = 0; f < frames; ++f) {
    if (cur <= 0.0) {
      cur = 0.0;
      a = f;
    }
    cur += score[f];
    if (cur > best) {
      best = cur;
      best_a = a;
      best_b = f;
      found = true;
    }
  }
  if (!found) return std::nullopt;

  std::size_t start = best_a * cfg.hop;
  std::size_t end = best_b * cfg.hop + cfg.frame;
  if (best_b == frames - 1) end = n;
  if (best_a > 0) {
    const std::size_t lo = start >= cfg.hop ? start - cfg.hop : 0;
    const std::size_t hi = std::min(start + cfg.frame + cfg.hop, end);
    if (hi > lo + 1) start = detail::power_changepoint(p, lo, hi);
  }
  if (end < n) {
    const std::size_t hi = std::min(n, end + cfg.hop);
    const std::size_t lo = std::max(start + 1, end >= cfg.frame + cfg.hop ? end - cfg.frame - cfg.hop : 0);
    if (hi > lo + 1) end = detail::power_changepoint(p, lo, hi);
  }
  return std::make_pair(start, end);
}

}  // namespace embench
