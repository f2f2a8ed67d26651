#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>

#include "embench/bench.hpp"
#include "embench/corpus.hpp"

using namespace embench;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("embench_test_bench_" + name);
  fs::remove_all(p);
  return p;
}

Labeled comm(CommKind k, std::uint64_t seed) {
  CommWaveformSpec s;
  s.kind = k;
  s.seed = seed;
  return gen_comm(s);
}

const std::vector<std::string> kModPool = {"BPSK", "QPSK", "8PSK", "16QAM", "64QAM", "GFSK", "QPSK"};

class SmallBench : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    cfg_.out_dir = scratch("small");
    cfg_.per_task = 40;
    manifest_ = build_bench(cfg_);
    items_ = read_bench(cfg_.out_dir);
  }
  static void TearDownTestSuite() { fs::remove_all(cfg_.out_dir); }

  static inline BenchConfig cfg_;
  static inline BenchManifest manifest_;
  static inline std::vector<BenchItem> items_;
};

}  // namespace

TEST(ChoiceItem, GoldAppearsOnceAndEIsFixed) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const BenchItem it = build_choice_item(Task::MOD, comm(CommKind::QPSK, seed), kModPool, rng);
    ASSERT_TRUE(it.options);
    EXPECT_EQ(std::count(it.options->begin(), it.options->end(), "QPSK"), 1);
    EXPECT_EQ((*it.options)[4], "Unable to answer");
    EXPECT_EQ((*it.options)[static_cast<std::size_t>(it.gold[0] - 'A')], "QPSK");
    EXPECT_EQ(std::set<std::string>(it.options->begin(), it.options->end()).size(), 5u);
  }
}

TEST(ChoiceItem, SameSeedSameOrdering) {
  Rng a(9), b(9);
  const auto x = build_choice_item(Task::MOD, comm(CommKind::BPSK, 1), kModPool, a);
  const auto y = build_choice_item(Task::MOD, comm(CommKind::BPSK, 1), kModPool, b);
  EXPECT_EQ(x.options, y.options);
  EXPECT_EQ(x.gold, y.gold);
}

TEST(ChoiceItem, SmallPoolIsRejected) {
  Rng rng(1);
  EXPECT_THROW(build_choice_item(Task::MOD, comm(CommKind::QPSK, 1), {"QPSK", "BPSK", "8PSK"}, rng), Error);
}

TEST(ChoiceItem, NumericDistractorsAreTenPercentApart) {
  EXPECT_FALSE(distinguishable(Task::PE_PW, "5 µs", "5.2 µs", "5 µs"));
  EXPECT_TRUE(distinguishable(Task::PE_PW, "5 µs", "5.5 µs", "5 µs"));
  EXPECT_FALSE(distinguishable(Task::SD, "256-512", "300-540", "256-512"));
  EXPECT_TRUE(distinguishable(Task::SD, "256-512", "400-512", "256-512"));
}

TEST(ChoiceItem, FindsATripleWhenAGreedyPickWouldStall) {
  RadarWaveformSpec s;
  s.bandwidth_hz = 7.9e6;
  s.pulse_width_s = 10e-6;
  s.prf_hz = 50e3;
  s.num_pulses = 2;
  const Labeled lfm = gen_radar(s);
  // valid triples exist ({7, 6.2, 5.4}), but picking 6.6 then 5.8 first dead-ends
  const std::vector<std::string> pool = {"7 MHz", "6.2 MHz", "5.4 MHz", "6.6 MHz", "5.8 MHz"};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const BenchItem it = build_choice_item(Task::PE_BW, lfm, pool, rng);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = a + 1; b < 4; ++b)
        EXPECT_TRUE(distinguishable(Task::PE_BW, (*it.options)[a], (*it.options)[b], it.answer));
  }
}

TEST(ReasoningItem, AntiCommSingleToneMentionsNotchFiltering) {
  Rng rng(1);
  const auto jammed = inject_jamming(comm(CommKind::QPSK, 2), {JamKind::SingleTone, 15.0, 100, 600}, 3);
  const BenchItem it = build_reasoning_item(Task::Anti_CJ, jammed, rng);
  EXPECT_FALSE(it.options);
  EXPECT_NE(it.gold.find("notch filtering"), std::string::npos);
}

TEST(ReasoningItem, RadarStrategyForLfmCarriesKeywords) {
  Rng rng(1);
  RadarWaveformSpec s;
  const BenchItem it = build_reasoning_item(Task::RJS, gen_radar(s), rng);
  const auto& kw = lookup_strategy(Task::RJS, "LFM").keywords;
  ASSERT_FALSE(kw.empty());
  for (const auto& k : kw) EXPECT_NE(it.gold.find(k), std::string::npos) << k;
}

TEST(ReasoningItem, EmptyOrUnknownKindIsAnError) {
  EXPECT_THROW(lookup_strategy(Task::Anti_CJ, ""), Error);
  EXPECT_THROW(lookup_strategy(Task::Anti_CJ, "laser"), Error);
  Labeled l = comm(CommKind::QPSK, 1);
  Rng rng(1);
  EXPECT_THROW(build_reasoning_item(Task::Anti_CJ, l, rng), Error);  // no jamming in meta
}

TEST(StrategyTable, CoversEveryKey) {
  for (JamKind k : kCommJamKinds) EXPECT_NO_THROW(lookup_strategy(Task::Anti_CJ, std::string(jam_kind_name(k))));
  for (JamKind k : kRadarJamKinds) EXPECT_NO_THROW(lookup_strategy(Task::Anti_RJ, std::string(jam_kind_name(k))));
  for (CommKind k : kCommKinds) EXPECT_NO_THROW(lookup_strategy(Task::CJS, std::string(comm_kind_name(k))));
  for (RadarKind k : kRadarKinds) EXPECT_NO_THROW(lookup_strategy(Task::RJS, std::string(radar_kind_name(k))));
}

TEST(StrategyTable, ShippedDataFileMatchesBuiltin) {
  const auto t = load_strategy_table(fs::path(EMBENCH_DATA_DIR) / "strategy_table.json");
  EXPECT_EQ(t, builtin_strategy_table());
  EXPECT_EQ(strategy_table_from_json(to_json(builtin_strategy_table())), builtin_strategy_table());
}

TEST_F(SmallBench, CountsPerTask) {
  EXPECT_EQ(manifest_.total, 14u * 40u);
  EXPECT_EQ(items_.size(), 14u * 40u);
  for (Task t : kAllTasks) EXPECT_EQ(manifest_.per_task.at(std::string(task_name(t))), 40u);
}

TEST_F(SmallBench, EveryItemIsSchemaValid) {
  std::set<std::string> ids;
  for (const auto& it : items_) {
    EXPECT_NO_THROW(validate_item(it)) << it.id;
    EXPECT_TRUE(ids.insert(it.id).second) << it.id;
    EXPECT_EQ(bench_item_from_json(to_json(it)).gold, it.gold);
    EXPECT_EQ(fs::file_size(cfg_.out_dir / it.signal_ref), kWindowLength * 8);
    if (is_perception(it.task)) {
      EXPECT_EQ((*it.options)[4], kUnableToAnswer);
      EXPECT_NE(it.gold, "E");
    } else {
      EXPECT_FALSE(it.options);
      EXPECT_FALSE(it.gold.empty());
    }
  }
}

TEST_F(SmallBench, SnrBinsAreBalanced) {
  std::map<Task, std::map<int, int>> bins;
  for (const auto& it : items_) {
    EXPECT_GE(it.snr_db, -20.0);
    EXPECT_LT(it.snr_db, 20.0);
    ++bins[it.task][static_cast<int>(std::floor((it.snr_db + 20.0) / 5.0))];
  }
  for (const auto& [t, b] : bins) {
    EXPECT_EQ(b.size(), 8u) << task_name(t);
    int lo = 1 << 30, hi = 0;
    for (const auto& [k, n] : b) lo = std::min(lo, n), hi = std::max(hi, n);
    EXPECT_LE(hi - lo, 1) << task_name(t);
  }
}

TEST_F(SmallBench, DistractorsComeFromSameTaskGolds) {
  std::map<Task, std::set<std::string>> answers;
  for (const auto& it : items_) answers[it.task].insert(it.answer);
  for (const auto& it : items_) {
    if (!it.options) continue;
    for (std::size_t k = 0; k < 4; ++k) EXPECT_TRUE(answers[it.task].count((*it.options)[k])) << it.id;
  }
}

TEST_F(SmallBench, DisjointFromCorpusIds) {
  CorpusConfig c;
  c.out_dir = scratch("corpus");
  c.counts = uniform_counts(28);
  build_corpus(c);
  std::set<std::string> bench_ids;
  for (const auto& it : items_) bench_ids.insert(it.id);
  for (const auto& s : read_corpus(c.out_dir)) EXPECT_FALSE(bench_ids.count(s.id)) << s.id;
  fs::remove_all(c.out_dir);
}

TEST_F(SmallBench, RebuildIsByteIdentical) {
  BenchConfig c = cfg_;
  c.out_dir = scratch("again");
  c.workers = 3;
  EXPECT_EQ(build_bench(c).content_sha256, manifest_.content_sha256);
  fs::remove_all(c.out_dir);
}

TEST(BuildBench, DefaultConfigIsFourThousandTwoHundred) {
  BenchConfig c;
  EXPECT_EQ(c.per_task * c.tasks.size(), 4200u);
  EXPECT_EQ(snr_bin_count(c), 8u);
}
