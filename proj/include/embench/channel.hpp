#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "embench/error.hpp"
#include "embench/labels.hpp"
#include "embench/rng.hpp"
#include "embench/signal.hpp"
#include "embench/waveform.hpp"

namespace embench {

/// Unit-power complex Gaussian realization of length n keyed by seed. The draw
/// is rescaled to empirical mean power exactly 1 so that SNR targets are met
/// exactly rather than in expectation.
inline std::vector<cplx> unit_noise(std::size_t n, std::uint64_t seed) {
  std::vector<cplx> eta(n);
  double p = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    eta[i] = counter_normal(seed, i);
    p += std::norm(eta[i]);
  }
  const double g = 1.0 / std::sqrt(p / static_cast<double>(n));
  for (cplx& e : eta) e *= g;
  return eta;
}

inline double noise_sigma(double signal_power, double snr_db) {
  return std::sqrt(signal_power / db_to_linear(snr_db));
}

/// Adds noise of power P/10^(snr/10). P is the signal's own mean power unless
/// `reference_power` is given (jammed signals reference the victim's power).
inline IqSignal add_awgn(const IqSignal& signal, double snr_db, std::uint64_t seed,
                         std::optional<double> reference_power = std::nullopt) {
  if (!std::isfinite(snr_db)) throw config_error("add_awgn: SNR must be finite");
  const double p = reference_power ? *reference_power : mean_power(signal);
  if (p == 0.0) throw data_error("add_awgn: zero-power signal");
  const double sigma = noise_sigma(p, snr_db);
  const auto eta = unit_noise(signal.size(), seed);
  std::vector<cplx> out(signal.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = signal[i] + sigma * eta[i];
  return IqSignal(std::move(out), signal.sample_rate_hz());
}

struct SnrPair {
  IqSignal clean;
  IqSignal high;
  IqSignal low;
  double snr_high_db;
  double snr_low_db;
  std::uint64_t noise_seed;
  double sigma_high;
  double sigma_low;
};

/// High/low SNR copies of `clean` sharing one noise realization.
inline SnrPair make_snr_pair(const IqSignal& clean, double snr_high_db, double snr_low_db, std::uint64_t seed,
                             std::optional<double> reference_power = std::nullopt) {
  if (!(snr_high_db >= 0.0) || !(snr_low_db < 0.0)) {
    throw config_error("make_snr_pair: need snr_high >= 0 dB > snr_low");
  }
  const double p = reference_power ? *reference_power : mean_power(clean);
  if (p == 0.0) throw data_error("make_snr_pair: zero-power signal");
  const auto eta = unit_noise(clean.size(), seed);
  const double sh = noise_sigma(p, snr_high_db);
  const double sl = noise_sigma(p, snr_low_db);
  std::vector<cplx> hi(clean.size()), lo(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    hi[i] = clean[i] + sh * eta[i];
    lo[i] = clean[i] + sl * eta[i];
  }
  return {clean, IqSignal(std::move(hi), clean.sample_rate_hz()), IqSignal(std::move(lo), clean.sample_rate_hz()),
          snr_high_db, snr_low_db, seed, sh, sl};
}

// ---------------------------------------------------------------------------
// Jamming

struct JammingSpec {
  JamKind kind = JamKind::SpotNoise;
  double jsr_db = 20.0;
  std::size_t start = 0;
  std::size_t end = 0;  // half-open
};

inline void validate(const JammingSpec& spec, std::size_t length) {
  if (!(spec.start < spec.end) || spec.end > length) {
    throw config_error("jamming segment out of bounds: [" + std::to_string(spec.start) + ", " +
                       std::to_string(spec.end) + ") for length " + std::to_string(length));
  }
  if (!(spec.jsr_db >= -10.0 && spec.jsr_db <= 30.0)) throw config_error("jsr_db must lie in [-10, 30]");
}

namespace detail {

// Complex white noise over the whole window, masked to |f - fc| <= bw/2 in the
// DFT domain.
inline std::vector<cplx> band_noise(std::size_t n, double fs, double fc, double bw, std::uint64_t seed) {
  std::vector<cplx> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = counter_normal(seed, i);
  Eigen::FFT<double> fft;
  std::vector<cplx> spec;
  fft.fwd(spec, w);
  for (std::size_t k = 0; k < n; ++k) {
    double f = static_cast<double>(k) * fs / static_cast<double>(n);
    if (f >= fs / 2.0) f -= fs;
    if (std::abs(f - fc) > bw / 2.0) spec[k] = 0.0;
  }
  std::vector<cplx> out;
  fft.inv(out, spec);
  return out;
}

inline cplx delayed(std::span<const cplx> x, double pos) {
  // circular, linear interpolation
  const auto n = static_cast<double>(x.size());
  double p = std::fmod(pos, n);
  if (p < 0) p += n;
  const auto i0 = static_cast<std::size_t>(p);
  const double fr = p - static_cast<double>(i0);
  const std::size_t i1 = (i0 + 1) % x.size();
  return (1.0 - fr) * x[i0] + fr * x[i1];
}

// Jammer waveform over the whole window; only [start, end) is used. Internal
// parameters are drawn from `rng`.
inline std::vector<cplx> jammer_waveform(JamKind kind, std::span<const cplx> x, const JammingSpec& js, double fs,
                                         std::uint64_t seed, Rng& rng) {
  const std::size_t n = x.size();
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<cplx> j(n, cplx{0.0, 0.0});
  const std::uint64_t nseed = derive_seed(seed, hash_label("jam-noise"));
  auto t_of = [fs](std::size_t i) { return static_cast<double>(i) / fs; };
  auto tones = [&](const std::vector<double>& freqs) {
    std::vector<double> ph(freqs.size());
    for (double& p : ph) p = rng.uniform(0.0, two_pi);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < freqs.size(); ++k) j[i] += std::polar(1.0, two_pi * freqs[k] * t_of(i) + ph[k]);
  };
  auto comb = [&](int lo_count, int hi_count, double lo_sp, double hi_sp) {
    const auto k = static_cast<int>(rng.uniform_int(lo_count, hi_count));
    const double sp = rng.uniform(lo_sp, hi_sp);
    std::vector<double> f;
    for (int q = 0; q < k; ++q) f.push_back((q - (k - 1) / 2.0) * sp);
    tones(f);
  };
  const double seg_len = static_cast<double>(js.end - js.start);

  switch (kind) {
    case JamKind::SpotNoise:
      j = band_noise(n, fs, rng.uniform(-1e6, 1e6), rng.uniform(1e6, 2e6), nseed);
      break;
    case JamKind::BarrageNoise:
      j = band_noise(n, fs, 0.0, rng.uniform(12e6, 18e6), nseed);
      break;
    case JamKind::SweptNoise: {
      auto nb = band_noise(n, fs, 0.0, 1e6, nseed);
      const double span = rng.uniform(4e6, 12e6);
      double phase = 0.0;
      for (std::size_t i = js.start; i < js.end; ++i) {
        const double f = -span / 2.0 + span * static_cast<double>(i - js.start) / seg_len;
        j[i] = nb[i] * std::polar(1.0, phase);
        phase += two_pi * f / fs;
      }
      break;
    }
    case JamKind::CombSpectrum: comb(4, 8, 0.5e6, 2e6); break;
    case JamKind::SingleFalseTarget: {
      const double d = static_cast<double>(rng.uniform_int(20, 200));
      for (std::size_t i = 0; i < n; ++i) j[i] = delayed(x, static_cast<double>(i) - d);
      break;
    }
    case JamKind::DenseFalseTargets: {
      const auto k = rng.uniform_int(3, 6);
      for (int q = 0; q < k; ++q) {
        const double d = static_cast<double>(rng.uniform_int(10, 400));
        const cplx rot = std::polar(1.0, rng.uniform(0.0, two_pi));
        for (std::size_t i = 0; i < n; ++i) j[i] += rot * delayed(x, static_cast<double>(i) - d);
      }
      break;
    }
    case JamKind::RangeGatePullOff: {
      const double d0 = rng.uniform(0.0, 4.0);
      const double v = rng.uniform(0.05, 0.3);
      for (std::size_t i = js.start; i < js.end; ++i) {
        j[i] = delayed(x, static_cast<double>(i) - d0 - v * static_cast<double>(i - js.start));
      }
      break;
    }
    case JamKind::VelocityDeception: {
      const double fd = rng.uniform(50e3, 500e3) * (rng.bernoulli(0.5) ? 1.0 : -1.0);
      for (std::size_t i = 0; i < n; ++i) j[i] = x[i] * std::polar(1.0, two_pi * fd * t_of(i));
      break;
    }
    case JamKind::InterruptedSamplingRepeater: {
      const auto ls = static_cast<std::size_t>(rng.uniform_int(8, 32));
      // sample during even slices, retransmit during the following odd slice
      for (std::size_t i = js.start; i < js.end; ++i) {
        if (((i - js.start) / ls) % 2 == 1) j[i] = x[i - ls];
      }
      break;
    }
    case JamKind::SmartNoise: {
      auto nb = band_noise(n, fs, 0.0, rng.uniform(0.5e6, 2e6), nseed);
      for (std::size_t i = 0; i < n; ++i) j[i] = x[i] * nb[i];
      break;
    }
    case JamKind::NarrowbandCw: tones({rng.uniform(-2e6, 2e6)}); break;
    case JamKind::ChirpSlice: {
      const auto period = static_cast<std::size_t>(rng.uniform_int(32, 128));
      const double bw = rng.uniform(2e6, 8e6);
      const double k = bw / (static_cast<double>(period) / fs);
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i % period) / fs;
        j[i] = std::polar(1.0, two_pi * (-bw / 2.0 * t + 0.5 * k * t * t));
      }
      break;
    }
    case JamKind::SingleTone: tones({rng.uniform(-5e6, 5e6)}); break;
    case JamKind::Multitone: {
      std::vector<double> f(static_cast<std::size_t>(rng.uniform_int(2, 5)));
      for (double& v : f) v = rng.uniform(-6e6, 6e6);
      tones(f);
      break;
    }
    case JamKind::NarrowbandNoise:
      j = band_noise(n, fs, rng.uniform(-3e6, 3e6), rng.uniform(0.2e6, 1e6), nseed);
      break;
    case JamKind::BroadbandNoise:
      j = band_noise(n, fs, 0.0, rng.uniform(10e6, 18e6), nseed);
      break;
    case JamKind::SweptTone: {
      const double f = rng.uniform(2e6, 8e6);
      double phase = rng.uniform(0.0, two_pi);
      for (std::size_t i = js.start; i < js.end; ++i) {
        j[i] = std::polar(1.0, phase);
        phase += two_pi * (-f + 2.0 * f * static_cast<double>(i - js.start) / seg_len) / fs;
      }
      break;
    }
    case JamKind::PulsedNoise: {
      auto bb = band_noise(n, fs, 0.0, rng.uniform(10e6, 18e6), nseed);
      const auto period = static_cast<std::size_t>(rng.uniform_int(32, 128));
      for (std::size_t i = js.start; i < js.end; ++i) {
        if ((i - js.start) % period < period / 2) j[i] = bb[i];
      }
      break;
    }
    case JamKind::Comb: comb(6, 12, 0.5e6, 1.5e6); break;
    case JamKind::Follower: {
      const double d = static_cast<double>(rng.uniform_int(5, 50));
      const double fo = rng.uniform(-100e3, 100e3);
      for (std::size_t i = 0; i < n; ++i) {
        j[i] = delayed(x, static_cast<double>(i) - d) * std::polar(1.0, two_pi * fo * t_of(i));
      }
      break;
    }
    case JamKind::ModulatedCarrier: {
      CommWaveformSpec cs;
      cs.kind = CommKind::QPSK;
      cs.samples_per_symbol = rng.bernoulli(0.5) ? 4 : 8;
      cs.rolloff = 0.35;
      cs.seed = rng.next();
      const auto carrier = gen_comm(cs, fs, n).signal;
      const double fc = rng.uniform(-4e6, 4e6);
      for (std::size_t i = 0; i < n; ++i) j[i] = carrier[i] * std::polar(1.0, two_pi * fc * t_of(i));
      break;
    }
  }
  return j;
}

}  // namespace detail

/// Adds a jammer of `spec.kind` to `victim` inside [start, end), scaled so the
/// in-segment jammer-to-signal power ratio is exactly jsr_db. Samples outside
/// the segment are copied unchanged. Replica jammers of a segment that holds
/// no signal energy are rejected.
inline Labeled inject_jamming(const Labeled& victim, const JammingSpec& spec, std::uint64_t seed) {
  const IqSignal& sig = victim.signal;
  validate(spec, sig.size());
  const auto x = sig.samples();
  Rng rng(derive_seed(seed, hash_label("jam-params")));
  const auto j = detail::jammer_waveform(spec.kind, x, spec, sig.sample_rate_hz(), seed, rng);

  const auto seg = x.subspan(spec.start, spec.end - spec.start);
  double p_sig = mean_power(seg);
  if (p_sig <= 1e-12 * mean_power(x)) p_sig = mean_power(x);
  if (p_sig == 0.0) throw data_error("inject_jamming: zero-power victim signal");
  double p_jam = 0.0;
  for (std::size_t i = spec.start; i < spec.end; ++i) p_jam += std::norm(j[i]);
  p_jam /= static_cast<double>(spec.end - spec.start);
  if (!(p_jam > 0.0)) {
    throw data_error("inject_jamming: " + std::string(jam_kind_name(spec.kind)) + " jammer has no energy in segment");
  }
  const double g = std::sqrt(p_sig * db_to_linear(spec.jsr_db) / p_jam);
  std::vector<cplx> out(x.begin(), x.end());
  for (std::size_t i = spec.start; i < spec.end; ++i) out[i] += g * j[i];

  Labeled res{IqSignal(std::move(out), sig.sample_rate_hz()), victim.meta, victim.reference_power()};
  res.meta.jamming = JamInfo{std::string(jam_domain_name(jam_domain(spec.kind))), std::string(jam_kind_name(spec.kind)),
                             spec.jsr_db, spec.start, spec.end};
  return res;
}

/// In-segment jammer-to-signal ratio actually realized, in dB.
inline double measured_jsr_db(const IqSignal& clean, const IqSignal& jammed, std::size_t start, std::size_t end) {
  const auto c = clean.samples().subspan(start, end - start);
  double pj = 0.0;
  for (std::size_t i = start; i < end; ++i) pj += std::norm(jammed[i] - clean[i]);
  pj /= static_cast<double>(end - start);
  double ps = mean_power(c);
  if (ps <= 1e-12 * mean_power(clean)) ps = mean_power(clean);
  return linear_to_db(pj / ps);
}

}  // namespace embench
