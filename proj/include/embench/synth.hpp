#pragma once

#include <span>
#include <vector>

#include "embench/channel.hpp"
#include "embench/tasks.hpp"
#include "embench/waveform.hpp"

namespace embench {

/// Parameter ranges for randomly drawn signals.
struct SynthRanges {
  double pw_min_s = 0.5e-6, pw_max_s = 10e-6;
  double prf_min_hz = 50e3, prf_max_hz = 500e3;
  int np_min = 2, np_max = 10;
  double bw_min_hz = 0.5e6, bw_max_hz = 8e6;
  double duty_min = 0.05, duty_max = 0.60;
  double max_coverage = 0.45;  // NP*PW / window
  double min_lfm_tb = 30.0;    // applied when the bandwidth is the asked-for quantity
  std::vector<int> sps_choices = {4, 5, 8, 10, 16, 20};
  double rolloff_min = 0.2, rolloff_max = 0.5;
  double jsr_min_db = 0.0, jsr_max_db = 20.0;
  double sd_jsr_min_db = 10.0, sd_jsr_max_db = 25.0;
  std::size_t seg_min = 128, seg_max = 768;
};

struct SynthOptions {
  SynthRanges ranges;
  std::vector<CommKind> mod_classes{kCommKinds.begin(), kCommKinds.end()};
  double sample_rate_hz = kSampleRateHz;
  std::size_t length = kWindowLength;
};

inline constexpr std::array<RadarKind, 6> kPulsedRadarKinds = {
    RadarKind::LFM, RadarKind::Barker, RadarKind::Frank, RadarKind::SteppedFreq, RadarKind::Rectangular,
    RadarKind::NoiseWaveform};

/// Rejection-samples a pulsed radar spec of `kind` inside the configured ranges.
inline RadarWaveformSpec sample_radar_spec(RadarKind kind, Rng& rng, const SynthOptions& opt = {},
                                           bool require_lfm_tb = false) {
  const auto& r = opt.ranges;
  const double fs = opt.sample_rate_hz;
  const double window = static_cast<double>(opt.length) / fs;
  RadarWaveformSpec s;
  s.kind = kind;
  s.seed = rng.next();
  if (kind == RadarKind::Sinusoid) {
    s.carrier_offset_hz = rng.uniform(-2e6, 2e6);
    return s;
  }
  for (int attempt = 0; attempt < 10000; ++attempt) {
    // whole samples, so the realized pulse width equals the recorded one
    s.pulse_width_s = std::round(rng.uniform(r.pw_min_s, r.pw_max_s) * fs) / fs;
    if (s.pulse_width_s < r.pw_min_s) continue;
    s.prf_hz = rng.uniform(r.prf_min_hz, r.prf_max_hz);
    s.num_pulses = static_cast<int>(rng.uniform_int(r.np_min, r.np_max));
    s.bandwidth_hz = rng.uniform(r.bw_min_hz, r.bw_max_hz);
    s.barker_length = std::array{5, 7, 11, 13}[rng.index(4)];
    s.frank_phases = std::array{4, 6, 8}[rng.index(3)];
    s.frequency_steps = static_cast<int>(rng.uniform_int(4, 8));
    const double duty = s.pulse_width_s * s.prf_hz;
    if (duty < r.duty_min || duty > r.duty_max) continue;
    if (s.num_pulses * s.pulse_width_s > r.max_coverage * window) continue;
    if (require_lfm_tb && s.bandwidth_hz * s.pulse_width_s < r.min_lfm_tb) continue;
    try {
      validate(s, fs, opt.length);
    } catch (const Error&) {
      continue;
    }
    return s;
  }
  throw config_error("sample_radar_spec: ranges admit no valid spec");
}

inline CommWaveformSpec sample_comm_spec(CommKind kind, Rng& rng, const SynthOptions& opt = {}) {
  CommWaveformSpec s;
  s.kind = kind;
  s.samples_per_symbol = opt.ranges.sps_choices[rng.index(opt.ranges.sps_choices.size())];
  s.rolloff = rng.uniform(opt.ranges.rolloff_min, opt.ranges.rolloff_max);
  s.bt = 0.5;
  s.modulation_index = kind == CommKind::FSK4 ? 0.25 : 0.5;
  s.seed = rng.next();
  return s;
}

namespace detail {

inline Labeled random_radar_victim(Rng& rng, const SynthOptions& opt, bool allow_cw) {
  const RadarKind k = allow_cw ? kRadarKinds[rng.index(kRadarKinds.size())]
                               : kPulsedRadarKinds[rng.index(kPulsedRadarKinds.size())];
  return gen_radar(sample_radar_spec(k, rng, opt), opt.sample_rate_hz, opt.length);
}

inline Labeled random_comm_victim(Rng& rng, const SynthOptions& opt) {
  const CommKind k = kCommKinds[rng.index(kCommKinds.size())];
  return gen_comm(sample_comm_spec(k, rng, opt), opt.sample_rate_hz, opt.length);
}

// Draws segments until the jammer carries energy inside its segment (replica
// jammers on a radar pulse gap do not).
inline Labeled jam_randomly(const Labeled& victim, std::span<const JamKind> kinds, double jsr_lo, double jsr_hi,
                            Rng& rng, const SynthOptions& opt) {
  const JamKind kind = kinds[rng.index(kinds.size())];
  for (int attempt = 0; attempt < 100; ++attempt) {
    JammingSpec js;
    js.kind = kind;
    js.jsr_db = rng.uniform(jsr_lo, jsr_hi);
    const auto len = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(opt.ranges.seg_min), static_cast<std::int64_t>(opt.ranges.seg_max)));
    js.start = rng.index(opt.length - len + 1);
    js.end = js.start + len;
    const std::uint64_t jseed = rng.next();
    try {
      return inject_jamming(victim, js, jseed);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Data) throw;
    }
  }
  throw data_error("could not place a " + std::string(jam_kind_name(kind)) + " jammer with in-segment energy");
}

}  // namespace detail

/// Draws a clean (unless the task is about jamming) signal whose metadata
/// answers `task`. SNR is applied later by the caller.
inline Labeled synth_from_task(Task task, Rng& rng, const SynthOptions& opt = {}) {
  const auto& r = opt.ranges;
  switch (task) {
    case Task::MOD: {
      if (opt.mod_classes.empty()) throw config_error("synth: empty modulation class list");
      const CommKind k = opt.mod_classes[rng.index(opt.mod_classes.size())];
      return gen_comm(sample_comm_spec(k, rng, opt), opt.sample_rate_hz, opt.length);
    }
    case Task::PE_BW:
      return gen_radar(sample_radar_spec(RadarKind::LFM, rng, opt, true), opt.sample_rate_hz, opt.length);
    case Task::PE_DC:
    case Task::PE_PRF:
    case Task::PE_PW:
    case Task::PE_NoP:
      return detail::random_radar_victim(rng, opt, false);
    case Task::PI: {
      const Protocol p = kProtocols[rng.index(kProtocols.size())];
      return gen_comm(protocol_spec(p, rng.next()), opt.sample_rate_hz, opt.length);
    }
    case Task::RJR:
    case Task::Anti_RJ: {
      auto v = detail::random_radar_victim(rng, opt, true);
      return detail::jam_randomly(v, kRadarJamKinds, r.jsr_min_db, r.jsr_max_db, rng, opt);
    }
    case Task::CJR:
    case Task::Anti_CJ: {
      auto v = detail::random_comm_victim(rng, opt);
      return detail::jam_randomly(v, kCommJamKinds, r.jsr_min_db, r.jsr_max_db, rng, opt);
    }
    case Task::SD: {
      auto v = detail::random_comm_victim(rng, opt);
      const bool radar_kind = rng.bernoulli(0.5);
      return radar_kind ? detail::jam_randomly(v, kRadarJamKinds, r.sd_jsr_min_db, r.sd_jsr_max_db, rng, opt)
                        : detail::jam_randomly(v, kCommJamKinds, r.sd_jsr_min_db, r.sd_jsr_max_db, rng, opt);
    }
    case Task::CJS: return detail::random_comm_victim(rng, opt);
    case Task::RJS: return detail::random_radar_victim(rng, opt, true);
  }
  throw config_error("synth_from_task: unknown task");
}

}  // namespace embench
