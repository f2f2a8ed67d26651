#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "embench/error.hpp"
#include "embench/labels.hpp"
#include "embench/meta.hpp"
#include "embench/rng.hpp"
#include "embench/signal.hpp"

namespace embench {

/// A signal together with the ground truth it was generated from.
struct Labeled {
  IqSignal signal;
  SignalMeta meta;
  std::optional<double> victim_power;  // set once jamming is mixed in; SNR references it

  double reference_power() const { return victim_power ? *victim_power : mean_power(signal); }
};

// ---------------------------------------------------------------------------
// Radar

struct RadarWaveformSpec {
  RadarKind kind = RadarKind::LFM;
  double bandwidth_hz = 4e6;  // LFM sweep / stepped-frequency span
  int barker_length = 13;
  int frank_phases = 4;
  int frequency_steps = 8;
  double pulse_width_s = 5e-6;
  double prf_hz = 100e3;
  int num_pulses = 4;
  double carrier_offset_hz = 0.0;
  double amplitude = 1.0;
  double start_offset_s = 0.0;
  std::uint64_t seed = 0;  // phase sequence of the noise waveform
};

inline std::vector<int> barker_code(int length) {
  switch (length) {
    case 5: return {1, 1, 1, -1, 1};
    case 7: return {1, 1, 1, -1, -1, 1, -1};
    case 11: return {1, 1, 1, -1, -1, -1, 1, -1, -1, 1, -1};
    case 13: return {1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1};
    default: throw config_error("Barker length must be one of 5, 7, 11, 13");
  }
}

/// Frank polyphase code of order M: M*M chip phases 2*pi*i*j/M, row-major.
inline std::vector<double> frank_phases(int m) {
  if (m != 4 && m != 6 && m != 8) throw config_error("Frank order must be one of 4, 6, 8");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m * m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out.push_back(2.0 * std::numbers::pi * i * j / m);
  return out;
}

inline std::size_t pulse_samples(double pulse_width_s, double fs) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(pulse_width_s * fs)));
}

inline std::size_t pulse_start_sample(const RadarWaveformSpec& spec, int k, double fs) {
  return static_cast<std::size_t>(std::llround((spec.start_offset_s + k / spec.prf_hz) * fs));
}

inline int code_chips(const RadarWaveformSpec& spec) {
  switch (spec.kind) {
    case RadarKind::Barker: return spec.barker_length;
    case RadarKind::Frank: return spec.frank_phases * spec.frank_phases;
    case RadarKind::SteppedFreq: return spec.frequency_steps;
    default: return 1;
  }
}

inline void validate(const RadarWaveformSpec& spec, double fs, std::size_t length) {
  if (!(fs > 0.0) || length == 0) throw config_error("radar: bad sample rate or length");
  if (!(spec.amplitude > 0.0)) throw config_error("radar: amplitude must be positive");
  if (spec.kind == RadarKind::Barker) (void)barker_code(spec.barker_length);
  if (spec.kind == RadarKind::Frank) (void)frank_phases(spec.frank_phases);
  if (spec.kind == RadarKind::LFM || spec.kind == RadarKind::SteppedFreq) {
    if (!(spec.bandwidth_hz > 0.0) || spec.bandwidth_hz > fs) {
      throw config_error("radar: bandwidth must lie in (0, sample_rate]");
    }
  }
  if (spec.kind == RadarKind::SteppedFreq && spec.frequency_steps < 2) {
    throw config_error("radar: stepped frequency needs at least 2 steps");
  }
  if (spec.kind == RadarKind::Sinusoid) return;  // continuous wave, pulse fields unused

  const double window = static_cast<double>(length) / fs;
  if (spec.num_pulses < 1) throw config_error("radar: num_pulses must be >= 1");
  if (!(spec.pulse_width_s > 0.0) || !(spec.prf_hz > 0.0)) {
    throw config_error("radar: pulse width and PRF must be positive");
  }
  if (spec.pulse_width_s * spec.prf_hz > 1.0 + 1e-12) {
    throw config_error("radar: duty cycle pulse_width * prf exceeds 100%");
  }
  if (spec.num_pulses / spec.prf_hz > window * (1.0 + 1e-12)) {
    throw config_error("radar: num_pulses / prf exceeds the observation window");
  }
  const std::size_t last_end = pulse_start_sample(spec, spec.num_pulses - 1, fs) + pulse_samples(spec.pulse_width_s, fs);
  if (last_end > length) throw config_error("radar: last pulse does not fit in the window");
  if (pulse_samples(spec.pulse_width_s, fs) < static_cast<std::size_t>(code_chips(spec))) {
    throw config_error("radar: pulse is shorter than one sample per chip");
  }
}

namespace detail {

// Complex envelope of one pulse of `n` samples.
inline std::vector<cplx> radar_pulse(const RadarWaveformSpec& spec, std::size_t n, double fs, Rng& noise_rng) {
  std::vector<cplx> p(n);
  const double two_pi = 2.0 * std::numbers::pi;
  const double tau = static_cast<double>(n) / fs;
  switch (spec.kind) {
    case RadarKind::LFM: {
      const double f0 = -spec.bandwidth_hz / 2.0 + spec.carrier_offset_hz;
      const double k = spec.bandwidth_hz / tau;
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs;
        p[i] = std::polar(1.0, two_pi * (f0 * t + 0.5 * k * t * t));
      }
      break;
    }
    case RadarKind::Barker: {
      const auto code = barker_code(spec.barker_length);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t chip = i * code.size() / n;
        const double t = static_cast<double>(i) / fs;
        p[i] = static_cast<double>(code[chip]) * std::polar(1.0, two_pi * spec.carrier_offset_hz * t);
      }
      break;
    }
    case RadarKind::Frank: {
      const auto ph = frank_phases(spec.frank_phases);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t chip = i * ph.size() / n;
        const double t = static_cast<double>(i) / fs;
        p[i] = std::polar(1.0, ph[chip] + two_pi * spec.carrier_offset_hz * t);
      }
      break;
    }
    case RadarKind::SteppedFreq: {
      const auto steps = static_cast<std::size_t>(spec.frequency_steps);
      double phase = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t s = i * steps / n;
        const double f = -spec.bandwidth_hz / 2.0 + (static_cast<double>(s) + 0.5) * spec.bandwidth_hz / steps +
                         spec.carrier_offset_hz;
        p[i] = std::polar(1.0, phase);
        phase += two_pi * f / fs;
      }
      break;
    }
    case RadarKind::Rectangular:
    case RadarKind::Sinusoid: {
      for (std::size_t i = 0; i < n; ++i) {
        p[i] = std::polar(1.0, two_pi * spec.carrier_offset_hz * static_cast<double>(i) / fs);
      }
      break;
    }
    case RadarKind::NoiseWaveform: {
      for (std::size_t i = 0; i < n; ++i) p[i] = std::polar(1.0, two_pi * noise_rng.uniform());
      break;
    }
  }
  return p;
}

}  // namespace detail

/// Nominal bandwidth recorded in the metadata. Only LFM and stepped-frequency
/// carry a bandwidth parameter; the others record the chip-rate or pulse-limited
/// bandwidth, flagged as not generator-defined.
inline double nominal_bandwidth(const RadarWaveformSpec& spec, double fs) {
  switch (spec.kind) {
    case RadarKind::LFM:
    case RadarKind::SteppedFreq: return spec.bandwidth_hz;
    case RadarKind::Barker:
    case RadarKind::Frank: return code_chips(spec) / spec.pulse_width_s;
    case RadarKind::Rectangular: return 1.0 / spec.pulse_width_s;
    case RadarKind::NoiseWaveform: return fs;
    case RadarKind::Sinusoid: return 0.0;
  }
  return 0.0;
}

/// Pulse train whose measurable parameters equal the spec. Gaps are exactly
/// zero; every active sample has magnitude `amplitude`.
inline Labeled gen_radar(const RadarWaveformSpec& spec, double fs = kSampleRateHz,
                         std::size_t length = kWindowLength) {
  validate(spec, fs, length);
  std::vector<cplx> x(length, cplx{0.0, 0.0});
  Rng noise_rng(derive_seed(spec.seed, hash_label("radar-noise-waveform")));
  PulseParams pp;
  if (spec.kind == RadarKind::Sinusoid) {
    auto p = detail::radar_pulse(spec, length, fs, noise_rng);
    for (std::size_t i = 0; i < length; ++i) x[i] = spec.amplitude * p[i];
    pp.num_pulses = 1;
    pp.pulse_width_s = static_cast<double>(length) / fs;
    pp.prf_valid = false;
    pp.duty_cycle = 1.0;
  } else {
    const std::size_t n = pulse_samples(spec.pulse_width_s, fs);
    for (int k = 0; k < spec.num_pulses; ++k) {
      // noise waveform draws a fresh phase sequence per pulse
      auto p = detail::radar_pulse(spec, n, fs, noise_rng);
      const std::size_t s = pulse_start_sample(spec, k, fs);
      for (std::size_t i = 0; i < n; ++i) x[s + i] = spec.amplitude * p[i];
    }
    pp.num_pulses = spec.num_pulses;
    pp.pulse_width_s = spec.pulse_width_s;
    pp.prf_hz = spec.prf_hz;
    pp.prf_valid = spec.num_pulses >= 2;
    pp.duty_cycle = spec.pulse_width_s * spec.prf_hz;
  }
  pp.bandwidth_hz = nominal_bandwidth(spec, fs);
  pp.bandwidth_valid = spec.kind == RadarKind::LFM || spec.kind == RadarKind::SteppedFreq;

  SignalMeta meta;
  meta.family = "radar";
  meta.waveform = std::string(radar_kind_name(spec.kind));
  meta.sample_rate_hz = fs;
  meta.length = length;
  meta.pulse = pp;
  meta.seed = spec.seed;
  return {IqSignal(std::move(x), fs), std::move(meta), std::nullopt};
}

// ---------------------------------------------------------------------------
// Communications

struct CommWaveformSpec {
  CommKind kind = CommKind::QPSK;
  int samples_per_symbol = 8;
  double rolloff = 0.35;        // root-raised-cosine excess bandwidth (linear kinds)
  double bt = 0.5;              // Gaussian filter bandwidth-time product (GFSK)
  double modulation_index = 0.5;  // frequency-shift kinds
  std::uint64_t seed = 0;
  std::vector<int> preamble;  // symbol indices sent before the random payload
  std::optional<Protocol> protocol;

  double symbol_rate_hz(double fs) const { return fs / samples_per_symbol; }
};

/// Unit-average-power constellation of a linear modulation.
inline std::vector<cplx> constellation(CommKind kind) {
  std::vector<cplx> pts;
  switch (kind) {
    case CommKind::BPSK: pts = {{1, 0}, {-1, 0}}; break;
    case CommKind::QPSK: pts = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}; break;
    case CommKind::PSK8:
      for (int k = 0; k < 8; ++k) pts.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / 8.0));
      break;
    case CommKind::QAM16:
    case CommKind::QAM64:
    case CommKind::QAM256: {
      const int m = kind == CommKind::QAM16 ? 4 : kind == CommKind::QAM64 ? 8 : 16;
      for (int i = 0; i < m; ++i)
        for (int q = 0; q < m; ++q) pts.emplace_back(2 * i - (m - 1), 2 * q - (m - 1));
      break;
    }
    case CommKind::PAM4: pts = {{-3, 0}, {-1, 0}, {1, 0}, {3, 0}}; break;
    case CommKind::OOK: pts = {{0, 0}, {1, 0}}; break;
    default: throw config_error("no constellation for modulation " + std::string(comm_kind_name(kind)));
  }
  double p = 0.0;
  for (const cplx& c : pts) p += std::norm(c);
  const double g = 1.0 / std::sqrt(p / static_cast<double>(pts.size()));
  for (cplx& c : pts) c *= g;
  return pts;
}

/// Alphabet size of the symbol stream (frequency levels for FSK kinds).
inline int alphabet_size(CommKind kind) {
  switch (kind) {
    case CommKind::GFSK:
    case CommKind::CPFSK: return 2;
    case CommKind::FSK4: return 4;
    default:
      if (is_analog(kind)) return 0;
      return static_cast<int>(constellation(kind).size());
  }
}

/// First `count` payload symbol indices: preamble, then seed-driven data.
/// Symbol k is centred on sample k * samples_per_symbol.
inline std::vector<int> comm_symbols(const CommWaveformSpec& spec, std::size_t count) {
  const int m = alphabet_size(spec.kind);
  if (m <= 0) throw config_error("analog modulation has no symbol stream");
  std::vector<int> out;
  out.reserve(count);
  for (int s : spec.preamble) {
    if (out.size() == count) break;
    if (s < 0 || s >= m) throw config_error("preamble symbol out of range");
    out.push_back(s);
  }
  Rng rng(derive_seed(spec.seed, hash_label("comm-payload")));
  while (out.size() < count) out.push_back(static_cast<int>(rng.uniform_int(0, m - 1)));
  return out;
}

/// Root-raised-cosine taps spanning +/- `span` symbols, unit energy.
inline std::vector<double> rrc_taps(double rolloff, int sps, int span) {
  const int n = 2 * span * sps + 1;
  std::vector<double> h(static_cast<std::size_t>(n));
  const double a = rolloff;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i - span * sps) / sps;  // in symbols
    double v;
    if (std::abs(t) < 1e-12) {
      v = 1.0 - a + 4.0 * a / std::numbers::pi;
    } else if (a > 0.0 && std::abs(std::abs(t) - 1.0 / (4.0 * a)) < 1e-9) {
      v = a / std::sqrt(2.0) *
          ((1.0 + 2.0 / std::numbers::pi) * std::sin(std::numbers::pi / (4.0 * a)) +
           (1.0 - 2.0 / std::numbers::pi) * std::cos(std::numbers::pi / (4.0 * a)));
    } else {
      const double num = std::sin(std::numbers::pi * t * (1.0 - a)) +
                         4.0 * a * t * std::cos(std::numbers::pi * t * (1.0 + a));
      const double den = std::numbers::pi * t * (1.0 - (4.0 * a * t) * (4.0 * a * t));
      v = num / den;
    }
    h[static_cast<std::size_t>(i)] = v;
  }
  double e = 0.0;
  for (double v : h) e += v * v;
  for (double& v : h) v /= std::sqrt(e);
  return h;
}

inline void validate(const CommWaveformSpec& spec) {
  if (spec.samples_per_symbol < 2) throw config_error("comm: samples_per_symbol must be >= 2");
  if (!(spec.rolloff > 0.0 && spec.rolloff <= 1.0)) throw config_error("comm: rolloff must lie in (0, 1]");
  if (!(spec.bt > 0.0)) throw config_error("comm: BT must be positive");
  if (!(spec.modulation_index > 0.0)) throw config_error("comm: modulation index must be positive");
}

namespace detail {

inline constexpr int kPulseSpanSymbols = 8;

// Pre-roll symbols so the window starts in steady state.
inline std::vector<int> preroll_symbols(const CommWaveformSpec& spec, int count, int m) {
  Rng rng(derive_seed(spec.seed, hash_label("comm-preroll")));
  std::vector<int> out(static_cast<std::size_t>(count));
  for (int& s : out) s = static_cast<int>(rng.uniform_int(0, m - 1));
  return out;
}

inline std::vector<cplx> gen_linear(const CommWaveformSpec& spec, std::size_t length) {
  const auto pts = constellation(spec.kind);
  const int sps = spec.samples_per_symbol;
  const int span = kPulseSpanSymbols;
  const auto h = rrc_taps(spec.rolloff, sps, span);
  const auto n_sym = static_cast<std::size_t>((length + sps - 1) / sps) + span + 1;
  const auto payload = comm_symbols(spec, n_sym);
  const auto pre = preroll_symbols(spec, span + 1, static_cast<int>(pts.size()));
  std::vector<cplx> y(length, cplx{0.0, 0.0});
  auto add_symbol = [&](long k, const cplx& a) {
    const long centre = k * sps;
    for (long j = -span * sps; j <= span * sps; ++j) {
      const long n = centre + j;
      if (n < 0 || n >= static_cast<long>(length)) continue;
      y[static_cast<std::size_t>(n)] += a * h[static_cast<std::size_t>(j + span * sps)];
    }
  };
  for (std::size_t i = 0; i < pre.size(); ++i) {
    add_symbol(-static_cast<long>(pre.size()) + static_cast<long>(i), pts[static_cast<std::size_t>(pre[i])]);
  }
  for (std::size_t k = 0; k < payload.size(); ++k) add_symbol(static_cast<long>(k), pts[static_cast<std::size_t>(payload[k])]);
  return y;
}

// Continuous-phase FSK family: frequency pulse (rectangular or Gaussian
// filtered) integrated into phase.
inline std::vector<cplx> gen_fsk(const CommWaveformSpec& spec, std::size_t length) {
  const int sps = spec.samples_per_symbol;
  const int m = alphabet_size(spec.kind);
  const int lead = kPulseSpanSymbols;
  const auto n_sym = static_cast<std::size_t>((length + sps - 1) / sps) + 2;
  auto payload = comm_symbols(spec, n_sym);
  auto pre = preroll_symbols(spec, lead, m);
  std::vector<double> levels;  // NRZ frequency levels, one per sample
  auto level_of = [m](int s) { return static_cast<double>(2 * s - (m - 1)); };  // +-1 or +-1,+-3
  for (int s : pre)
    for (int j = 0; j < sps; ++j) levels.push_back(level_of(s));
  for (int s : payload)
    for (int j = 0; j < sps; ++j) levels.push_back(level_of(s));

  std::vector<double> freq = levels;
  if (spec.kind == CommKind::GFSK) {
    const double sigma = std::sqrt(std::log(2.0)) / (2.0 * std::numbers::pi * spec.bt) * sps;
    const int half = 2 * sps;
    std::vector<double> g(static_cast<std::size_t>(2 * half + 1));
    double sum = 0.0;
    for (int i = -half; i <= half; ++i) {
      g[static_cast<std::size_t>(i + half)] = std::exp(-0.5 * (i / sigma) * (i / sigma));
      sum += g[static_cast<std::size_t>(i + half)];
    }
    for (double& v : g) v /= sum;
    for (std::size_t n = 0; n < levels.size(); ++n) {
      double acc = 0.0;
      for (int i = -half; i <= half; ++i) {
        const long idx = static_cast<long>(n) - i;
        const double lv = idx < 0 ? levels.front() : idx >= static_cast<long>(levels.size()) ? levels.back()
                                                                                           : levels[static_cast<std::size_t>(idx)];
        acc += g[static_cast<std::size_t>(i + half)] * lv;
      }
      freq[n] = acc;
    }
  }
  // symbol k of the payload is centred on sample k*sps
  const std::size_t offset = static_cast<std::size_t>(lead * sps) - static_cast<std::size_t>(sps / 2);
  std::vector<cplx> y(length);
  double phase = 0.0;
  for (std::size_t n = 0; n < offset + length; ++n) {
    if (n >= offset) y[n - offset] = std::polar(1.0, phase);
    phase += std::numbers::pi * spec.modulation_index * freq[n] / sps;
  }
  return y;
}

inline std::vector<cplx> gen_analog(const CommWaveformSpec& spec, std::size_t length, double fs) {
  Rng rng(derive_seed(spec.seed, hash_label("comm-analog")));
  struct Tone { double f, a, ph; };
  std::vector<Tone> tones(3);
  double asum = 0.0;
  for (auto& t : tones) {
    t = {rng.uniform(20e3, 400e3), rng.uniform(0.3, 1.0), rng.uniform(0.0, 2.0 * std::numbers::pi)};
    asum += t.a;
  }
  const double two_pi = 2.0 * std::numbers::pi;
  auto message = [&](double t) {
    double m = 0.0;
    for (const auto& tn : tones) m += tn.a * std::cos(two_pi * tn.f * t + tn.ph);
    return m / asum;
  };
  std::vector<cplx> y(length);
  switch (spec.kind) {
    case CommKind::AM_DSB: {
      const double depth = rng.uniform(0.5, 0.9);
      for (std::size_t n = 0; n < length; ++n) y[n] = {1.0 + depth * message(n / fs), 0.0};
      break;
    }
    case CommKind::AM_SSB: {
      // upper sideband of a multi-tone message is the sum of its analytic tones
      for (std::size_t n = 0; n < length; ++n) {
        cplx acc{0.0, 0.0};
        for (const auto& tn : tones) acc += tn.a * std::polar(1.0, two_pi * tn.f * (n / fs) + tn.ph);
        y[n] = acc;
      }
      break;
    }
    case CommKind::WBFM: {
      const double deviation = rng.uniform(500e3, 2e6);
      double phase = 0.0;
      for (std::size_t n = 0; n < length; ++n) {
        y[n] = std::polar(1.0, phase);
        phase += two_pi * deviation * message(n / fs) / fs;
      }
      break;
    }
    default: throw config_error("not an analog modulation");
  }
  return y;
}

}  // namespace detail

/// Pulse-shaped symbol stream normalised to unit mean power: root-raised-cosine
/// for linear kinds, Gaussian-filtered frequency pulses for GFSK, rectangular
/// frequency pulses for CPFSK/4FSK, tone-message analog modulations otherwise.
inline Labeled gen_comm(const CommWaveformSpec& spec, double fs = kSampleRateHz,
                        std::size_t length = kWindowLength) {
  validate(spec);
  if (length == 0) throw config_error("comm: length must be positive");
  std::vector<cplx> y;
  if (is_linear(spec.kind)) {
    y = detail::gen_linear(spec, length);
  } else if (is_analog(spec.kind)) {
    y = detail::gen_analog(spec, length, fs);
  } else {
    y = detail::gen_fsk(spec, length);
  }
  IqSignal sig = normalize_power(IqSignal(std::move(y), fs), 1.0);
  SignalMeta meta;
  meta.family = "comm";
  meta.waveform = std::string(comm_kind_name(spec.kind));
  if (spec.protocol) meta.protocol = std::string(protocol_name(*spec.protocol));
  meta.sample_rate_hz = fs;
  meta.length = length;
  if (!is_analog(spec.kind)) meta.symbol_rate_hz = spec.symbol_rate_hz(fs);
  if (is_linear(spec.kind)) meta.rolloff = spec.rolloff;
  meta.seed = spec.seed;
  return {std::move(sig), std::move(meta), std::nullopt};
}

/// Fixed (modulation, symbol rate, preamble) bundle behind each protocol label.
inline CommWaveformSpec protocol_spec(Protocol p, std::uint64_t seed) {
  CommWaveformSpec s;
  s.seed = seed;
  s.protocol = p;
  auto alternating = [](int n, int a, int b) {
    std::vector<int> v;
    for (int i = 0; i < n; ++i) v.push_back(i % 2 ? b : a);
    return v;
  };
  switch (p) {
    case Protocol::BLE1M:
      s.kind = CommKind::GFSK; s.samples_per_symbol = 20; s.bt = 0.5; s.modulation_index = 0.5;
      s.preamble = alternating(8, 1, 0);
      break;
    case Protocol::BLE2M:
      s.kind = CommKind::GFSK; s.samples_per_symbol = 10; s.bt = 0.5; s.modulation_index = 0.5;
      s.preamble = alternating(16, 1, 0);
      break;
    case Protocol::ZigBee:
      s.kind = CommKind::QPSK; s.samples_per_symbol = 10; s.rolloff = 0.5;
      s.preamble = std::vector<int>(16, 0);
      break;
    case Protocol::ADSB:
      s.kind = CommKind::OOK; s.samples_per_symbol = 10; s.rolloff = 0.9;
      s.preamble = {1, 0, 1, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0};
      break;
    case Protocol::DSSS:
      s.kind = CommKind::BPSK; s.samples_per_symbol = 2; s.rolloff = 0.22;
      for (int rep = 0; rep < 4; ++rep)
        for (int c : barker_code(11)) s.preamble.push_back(c > 0 ? 0 : 1);
      break;
    case Protocol::QpskBurst:
      s.kind = CommKind::QPSK; s.samples_per_symbol = 4; s.rolloff = 0.25;
      s.preamble = alternating(32, 0, 2);
      break;
    case Protocol::Qam16Burst:
      s.kind = CommKind::QAM16; s.samples_per_symbol = 8; s.rolloff = 0.25;
      s.preamble = alternating(16, 0, 15);
      break;
    case Protocol::Fsk4Telemetry:
      s.kind = CommKind::FSK4; s.samples_per_symbol = 20; s.modulation_index = 0.25;
      s.preamble = alternating(8, 3, 0);
      break;
  }
  return s;
}

}  // namespace embench
