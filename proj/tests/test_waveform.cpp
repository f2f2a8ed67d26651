#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "embench/synth.hpp"
#include "embench/waveform.hpp"

using namespace embench;

namespace {

double inst_freq(const IqSignal& s, std::size_t i) {
  return std::arg(s[i + 1] * std::conj(s[i])) * s.sample_rate_hz() / (2.0 * std::numbers::pi);
}

std::vector<std::size_t> rising_edges(const IqSignal& s) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool on = std::abs(s[i]) > 0.0;
    const bool prev = i > 0 && std::abs(s[i - 1]) > 0.0;
    if (on && !prev) out.push_back(i);
  }
  return out;
}

}  // namespace

TEST(GenRadar, LfmChirpEndpoints) {
  RadarWaveformSpec s;
  s.num_pulses = 1;
  const IqSignal x = gen_radar(s).signal;
  const std::size_t n = pulse_samples(s.pulse_width_s, kSampleRateHz);
  const double step = s.bandwidth_hz / static_cast<double>(n);
  // a phase difference measures frequency half a sample later; extrapolate to
  // the pulse edges t = 0 and t = PW
  EXPECT_NEAR(inst_freq(x, 0) - 0.5 * step, -s.bandwidth_hz / 2.0, 1e-3 * step);
  EXPECT_NEAR(inst_freq(x, n - 2) + 1.5 * step, s.bandwidth_hz / 2.0, 1e-3 * step);
  for (std::size_t i = 1; i + 2 < n; ++i) EXPECT_NEAR(inst_freq(x, i) - inst_freq(x, i - 1), step, 1e-3 * step);
}

TEST(GenRadar, Barker13PeakSidelobeRatio) {
  RadarWaveformSpec s;
  s.kind = RadarKind::Barker;
  s.barker_length = 13;
  s.num_pulses = 1;
  s.pulse_width_s = 13.0 / kSampleRateHz * 4.0;  // 4 samples per chip
  const IqSignal x = gen_radar(s).signal;
  const std::size_t n = pulse_samples(s.pulse_width_s, kSampleRateHz);
  // autocorrelation of the chip sequence sampled at chip centres
  std::vector<cplx> chips;
  for (std::size_t c = 0; c < 13; ++c) chips.push_back(x[c * 4 + 2]);
  double peak = 0.0, side = 0.0;
  for (int lag = -12; lag <= 12; ++lag) {
    cplx acc{0.0, 0.0};
    for (int i = 0; i < 13; ++i) {
      const int j = i + lag;
      if (j >= 0 && j < 13) acc += chips[static_cast<std::size_t>(i)] * std::conj(chips[static_cast<std::size_t>(j)]);
    }
    (lag == 0 ? peak : side) = std::max(lag == 0 ? peak : side, std::abs(acc));
  }
  EXPECT_NEAR(peak, 13.0, 1e-12);
  EXPECT_LE(side / peak, 1.0 / 13.0 + 1e-9);
  EXPECT_EQ(n, 52u);
}

TEST(GenRadar, AllBarkerCodesMeetPslBound) {
  for (int len : {5, 7, 11, 13}) {
    const auto c = barker_code(len);
    for (int lag = 1; lag < len; ++lag) {
      int acc = 0;
      for (int i = 0; i + lag < len; ++i) acc += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i + lag)];
      EXPECT_LE(std::abs(acc), 1) << "length " << len << " lag " << lag;
    }
  }
  EXPECT_THROW(barker_code(9), Error);
}

TEST(GenRadar, PrfHundredKilohertzRisingEdges) {
  RadarWaveformSpec s;
  s.kind = RadarKind::Rectangular;
  s.pulse_width_s = 5e-6;
  s.prf_hz = 100e3;
  s.num_pulses = 4;
  const auto edges = rising_edges(gen_radar(s).signal);
  ASSERT_EQ(edges.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(static_cast<double>(edges[k]), 200.0 * k, 1.0);
}

TEST(GenRadar, GapsAreZeroAndActiveSamplesHaveUnitMagnitude) {
  for (RadarKind k : kPulsedRadarKinds) {
    Rng rng(derive_seed(11, static_cast<std::uint64_t>(k)));
    const auto spec = sample_radar_spec(k, rng);
    const auto lab = gen_radar(spec);
    std::size_t active = 0;
    for (std::size_t i = 0; i < lab.signal.size(); ++i) {
      const double m = std::abs(lab.signal[i]);
      if (m != 0.0) {
        EXPECT_NEAR(m, 1.0, 1e-12);
        ++active;
      }
    }
    EXPECT_EQ(active, static_cast<std::size_t>(spec.num_pulses) * pulse_samples(spec.pulse_width_s, kSampleRateHz));
  }
}

TEST(GenRadar, RejectsInfeasibleSpecs) {
  RadarWaveformSpec s;
  s.pulse_width_s = 20e-6;  // duty 200%
  EXPECT_THROW(gen_radar(s), Error);
  s = {};
  s.num_pulses = 10;  // 100 us of PRIs in a 51.2 us window
  EXPECT_THROW(gen_radar(s), Error);
  s = {};
  s.num_pulses = 0;
  EXPECT_THROW(gen_radar(s), Error);
}

TEST(GenComm, BpskHardSlicingRecoversSymbols) {
  CommWaveformSpec s;
  s.kind = CommKind::BPSK;
  s.samples_per_symbol = 8;
  s.seed = 0;
  const IqSignal x = gen_comm(s).signal;
  // matched filter, then sample at symbol centres
  const auto h = rrc_taps(s.rolloff, 8, detail::kPulseSpanSymbols);
  const long half = static_cast<long>(h.size() / 2);
  const std::size_t count = x.size() / 8;
  const auto truth = comm_symbols(s, count);
  for (std::size_t k = 0; k < count; ++k) {
    cplx acc{0.0, 0.0};
    for (long j = -half; j <= half; ++j) {
      const long n = static_cast<long>(k * 8) + j;
      if (n >= 0 && n < static_cast<long>(x.size())) acc += x[static_cast<std::size_t>(n)] * h[static_cast<std::size_t>(j + half)];
    }
    EXPECT_EQ(acc.real() > 0.0 ? 0 : 1, truth[k]) << "symbol " << k;
  }
}

TEST(GenComm, ConstellationsHaveUnitPower) {
  for (CommKind k : {CommKind::BPSK, CommKind::QPSK, CommKind::PSK8, CommKind::QAM16, CommKind::QAM64,
                     CommKind::QAM256}) {
    double p = 0.0;
    const auto pts = constellation(k);
    for (const auto& c : pts) p += std::norm(c);
    EXPECT_NEAR(p / static_cast<double>(pts.size()), 1.0, 1e-9) << comm_kind_name(k);
  }
  EXPECT_EQ(constellation(CommKind::QAM16).size(), 16u);
}

TEST(GenComm, EveryClassHasUnitMeanPower) {
  for (CommKind k : kCommKinds) {
    Rng rng(derive_seed(3, static_cast<std::uint64_t>(k)));
    const auto lab = gen_comm(sample_comm_spec(k, rng));
    EXPECT_NEAR(mean_power(lab.signal), 1.0, 1e-3) << comm_kind_name(k);
    EXPECT_EQ(lab.meta.waveform, comm_kind_name(k));
  }
}

TEST(GenComm, QpskOccupiedBandwidth) {
  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CommWaveformSpec s;
    s.kind = CommKind::QPSK;
    s.rolloff = 0.35;
    s.samples_per_symbol = 10;  // 2 MHz at 20 MHz
    s.seed = seed;
    sum += occupied_bandwidth(periodogram(gen_comm(s).signal));
  }
  const double mean = sum / 100.0;
  EXPECT_GE(mean, 2.0e6);
  EXPECT_LE(mean, 2.8e6);
}

TEST(SynthFromTask, PulseCountRange) {
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto lab = synth_from_task(Task::PE_NoP, rng);
    ASSERT_TRUE(lab.meta.pulse);
    EXPECT_GE(lab.meta.pulse->num_pulses, 2);
    EXPECT_LE(lab.meta.pulse->num_pulses, 10);
  }
}

TEST(SynthFromTask, ModulationIsOneOfFourteen) {
  std::set<std::string> names;
  for (CommKind k : kCommKinds) names.emplace(comm_kind_name(k));
  EXPECT_EQ(names.size(), 14u);
  Rng rng(2);
  for (int i = 0; i < 50; ++i) EXPECT_TRUE(names.count(synth_from_task(Task::MOD, rng).meta.waveform));
}

TEST(SynthFromTask, SameSeedIsByteIdentical) {
  for (Task t : kAllTasks) {
    Rng a(77), b(77);
    const auto x = synth_from_task(t, a), y = synth_from_task(t, b);
    EXPECT_EQ(x.signal, y.signal) << task_name(t);
    EXPECT_EQ(x.meta, y.meta) << task_name(t);
  }
}

TEST(SynthFromTask, RadarRangesHold) {
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const auto lab = synth_from_task(Task::PE_DC, rng);
    const auto& p = *lab.meta.pulse;
    EXPECT_GE(p.pulse_width_s, 0.5e-6);
    EXPECT_LE(p.pulse_width_s, 10e-6);
    EXPECT_GE(p.prf_hz, 50e3);
    EXPECT_LE(p.prf_hz, 500e3);
    EXPECT_GE(p.duty_cycle, 0.05);
    EXPECT_LE(p.duty_cycle, 0.60);
  }
}
