#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "embench/corpus.hpp"

using namespace embench;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("embench_test_corpus_" + name);
  fs::remove_all(p);
  return p;
}

SignalMeta pulse_meta(double pw) {
  SignalMeta m;
  m.family = "radar";
  m.waveform = "Rectangular";
  m.sample_rate_hz = kSampleRateHz;
  m.length = kWindowLength;
  m.snr_db = 3.0;
  PulseParams p;
  p.pulse_width_s = pw;
  p.prf_hz = 100e3;
  p.prf_valid = true;
  p.num_pulses = 4;
  p.duty_cycle = pw * 100e3;
  m.pulse = p;
  return m;
}

std::size_t line_count(const fs::path& p) {
  std::ifstream is(p);
  std::size_t n = 0;
  for (std::string line; std::getline(is, line);) n += !line.empty();
  return n;
}

}  // namespace

TEST(RenderTemplate, PulseWidthUsesCanonicalUnits) {
  Rng rng(1);
  const auto d = render_template(Task::PE_PW, pulse_meta(5e-6), rng);
  EXPECT_NE(d.response.find("5 µs"), std::string::npos) << d.response;
  EXPECT_NE(d.instruction.find("20 MHz"), std::string::npos) << d.instruction;
  EXPECT_NE(d.instruction.find("3 dB"), std::string::npos) << d.instruction;
}

TEST(RenderTemplate, FourSignificantDigits) {
  EXPECT_EQ(format_sig4(5.0), "5");
  EXPECT_EQ(format_sig4(2.34567), "2.346");
  EXPECT_EQ(format_sig4(123456.0), "123456");
  EXPECT_EQ(format_sig4(0.5), "0.5");
  Rng rng(2);
  const auto d = render_template(Task::PE_PW, pulse_meta(2.34567e-6), rng);
  EXPECT_NE(d.response.find("2.346 µs"), std::string::npos) << d.response;
}

TEST(RenderTemplate, ModulationNamesTheClass) {
  SignalMeta m;
  m.family = "comm";
  m.waveform = "QPSK";
  m.sample_rate_hz = kSampleRateHz;
  m.length = kWindowLength;
  m.snr_db = -4.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    Rng rng(s);
    EXPECT_NE(render_template(Task::MOD, m, rng).response.find("QPSK"), std::string::npos);
  }
}

TEST(RenderTemplate, DeterministicAndParaphrased) {
  const SignalMeta m = pulse_meta(5e-6);
  std::set<std::string> variants;
  for (std::uint64_t s = 0; s < 40; ++s) {
    Rng a(s), b(s);
    const auto x = render_template(Task::PE_PW, m, a), y = render_template(Task::PE_PW, m, b);
    EXPECT_EQ(x.instruction, y.instruction);
    EXPECT_EQ(x.response, y.response);
    variants.insert(x.instruction);
  }
  EXPECT_GE(variants.size(), 3u);
}

TEST(RenderTemplate, MissingFieldIsNamed) {
  SignalMeta m = pulse_meta(5e-6);
  m.pulse.reset();
  Rng rng(1);
  try {
    render_template(Task::PE_PW, m, rng);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("pulse"), std::string::npos);
  }
  m = pulse_meta(5e-6);
  m.snr_db.reset();
  EXPECT_THROW(render_template(Task::PE_PW, m, rng), Error);
}

TEST(BuildCorpus, FourteenByHundred) {
  CorpusConfig c;
  c.out_dir = scratch("1400");
  c.counts = uniform_counts(1400);
  const auto m = build_corpus(c);
  EXPECT_EQ(m.total, 1400u);
  EXPECT_EQ(line_count(c.out_dir / "corpus.jsonl"), 1400u);
  const auto samples = read_corpus(c.out_dir);
  ASSERT_EQ(samples.size(), 1400u);
  std::map<Task, std::size_t> per;
  std::set<std::string> ids;
  for (const auto& s : samples) {
    ++per[s.task];
    ids.insert(s.id);
    ASSERT_TRUE(s.meta.snr_db);
    EXPECT_GE(*s.meta.snr_db, -20.0);
    EXPECT_LE(*s.meta.snr_db, 20.0);
    EXPECT_EQ(fs::file_size(c.out_dir / s.signal_ref), kWindowLength * 8);
    // the response is derivable from meta alone
    if (is_perception(s.task)) {
      EXPECT_NE(s.conversation.response.find(answer_string(s.task, s.meta)), std::string::npos) << s.id;
    } else {
      EXPECT_EQ(s.conversation.response, lookup_strategy(s.task, reasoning_key(s.task, s.meta)).text) << s.id;
    }
  }
  EXPECT_EQ(ids.size(), 1400u);
  for (Task t : kAllTasks) EXPECT_EQ(per[t], 100u) << task_name(t);
  fs::remove_all(c.out_dir);
}

TEST(BuildCorpus, SameSeedSameHashAcrossWorkerCounts) {
  CorpusConfig c;
  c.counts = uniform_counts(70);
  c.out_dir = scratch("w1");
  c.workers = 1;
  const auto a = build_corpus(c);
  c.out_dir = scratch("w4");
  c.workers = 4;
  const auto b = build_corpus(c);
  EXPECT_EQ(a.content_sha256, b.content_sha256);
  c.seed = 2;
  c.out_dir = scratch("s2");
  EXPECT_NE(build_corpus(c).content_sha256, a.content_sha256);
  fs::remove_all(c.out_dir);
  scratch("w1");
  scratch("w4");
}

TEST(BuildCorpus, RejectsZeroCounts) {
  CorpusConfig c;
  c.out_dir = scratch("zero");
  c.counts = {{Task::MOD, 0}};
  EXPECT_THROW(build_corpus(c), Error);
}

TEST(BuildCorpus, FullScalePresetCount) {
  std::size_t total = 0;
  for (const auto& [t, n] : uniform_counts(kFullScaleCorpus)) total += n;
  EXPECT_EQ(total, 134107u);
}

TEST(BuildKd, ReplayMixAndSnrOrdering) {
  CorpusConfig c;
  c.out_dir = scratch("kd_src");
  c.counts = uniform_counts(420);
  build_corpus(c);
  KdDatasetConfig k;
  k.out_dir = scratch("kd");
  k.corpus_dir = c.out_dir;
  k.pairs = 1000;
  k.replay_fraction = 0.2;
  const auto m = build_kd_dataset(k);
  EXPECT_EQ(m.pairs, 800u);
  EXPECT_EQ(m.replay, 200u);
  const auto pairs = read_kd(k.out_dir);
  ASSERT_EQ(pairs.size(), 1000u);
  std::size_t replay = 0;
  for (const auto& p : pairs) {
    if (p.is_replay) {
      ++replay;
      EXPECT_EQ(p.high_ref, p.low_ref);
    } else {
      EXPECT_GE(p.snr_high_db, 0.0);
      EXPECT_LT(p.snr_low_db, 0.0);
      EXPECT_NE(p.high_ref, p.low_ref);
    }
    EXPECT_FALSE(p.answer_text.empty());
  }
  EXPECT_EQ(replay, 200u);
  fs::remove_all(c.out_dir);
  fs::remove_all(k.out_dir);
}

TEST(BuildKd, PairSignalsDifferOnlyInNoiseScale) {
  KdDatasetConfig k;
  k.replay_fraction = 0.0;
  k.pairs = 5;
  for (std::size_t i = 0; i < k.pairs; ++i) {
    const auto g = make_kd_pair(i, k);
    // regenerate the clean signal along the same seed path
    const std::uint64_t s = derive_seed(derive_seed(k.seed, hash_label("kd-pair")), i);
    Rng rng(s);
    const Task task = k.tasks[rng.index(k.tasks.size())];
    const Labeled clean = synth_from_task(task, rng, k.synth);
    const SnrPair p = make_snr_pair(clean.signal, g.pair.snr_high_db, g.pair.snr_low_db,
                                    derive_seed(s, hash_label("noise")), clean.reference_power());
    for (std::size_t n = 0; n < clean.signal.size(); ++n) {
      const cplx a = (p.high[n] - clean.signal[n]) / p.sigma_high, b = (p.low[n] - clean.signal[n]) / p.sigma_low;
      ASSERT_NEAR(std::abs(a - b), 0.0, 1e-12);
      // stored signals are float32 quantizations of the pair
      ASSERT_NEAR(std::abs((*g.high)[n] - p.high[n]), 0.0, 1e-6 * (1.0 + std::abs(p.high[n])));
      ASSERT_NEAR(std::abs((*g.low)[n] - p.low[n]), 0.0, 1e-6 * (1.0 + std::abs(p.low[n])));
    }
  }
}

TEST(BuildKd, InvalidRangesAreRejected) {
  KdDatasetConfig k;
  k.out_dir = scratch("kd_bad");
  k.replay_fraction = 0.0;
  k.snr_low_max_db = 1.0;
  EXPECT_THROW(build_kd_dataset(k), Error);
  k = {};
  k.replay_fraction = 1.0;
  EXPECT_THROW(build_kd_dataset(k), Error);
  k = {};
  k.snr_high_min_db = -5.0;
  EXPECT_THROW(build_kd_dataset(k), Error);
}
