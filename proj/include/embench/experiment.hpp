#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "embench/analysis.hpp"
#include "embench/bench.hpp"
#include "embench/checkpoint.hpp"
#include "embench/trainer.hpp"

namespace embench {

/// Desk-scale ablation: five-class modulation recognition, Stage 1 from
/// scratch, then four Stage-2 variants from the same teacher, scored on a
/// shared low-SNR bench.
struct DeskConfig {
  fs::path root = "desk";
  std::vector<CommKind> classes = {CommKind::BPSK, CommKind::QPSK, CommKind::PSK8, CommKind::QAM16, CommKind::GFSK};
  std::size_t stage1_samples = 10000;
  std::size_t kd_pairs = 2000;
  std::size_t bench_items = 2000;     // SNR in [-20, 0) dB
  std::size_t analysis_pairs = 1000;  // matched [10, 20] / [-20, -10] dB signals
  TrainConfig stage1;
  KdConfig stage2 = [] {
    KdConfig k;
    k.lr = 1e-3;
    return k;
  }();
  std::size_t workers = 1;
};

inline constexpr std::array<const char*, 4> kVariantNames = {"finetune", "featkd", "dsm", "merlin"};
inline constexpr std::array<double, 5> kInterpolationAlphas = {0.0, 0.25, 0.5, 0.75, 1.0};

/// Loss weights of each Stage-2 variant on top of `base`.
inline KdConfig variant_config(const KdConfig& base, std::size_t variant) {
  KdConfig k = base;
  switch (variant) {
    case 0: k.lambda_logits = 0.0, k.lambda_feat = 0.0, k.use_dsm = false; break;
    case 1: k.lambda_logits = 0.0, k.use_dsm = false; break;
    case 2: k.lambda_logits = 0.0, k.use_dsm = true; break;
    case 3: k.use_dsm = true; break;
    default: throw config_error("unknown distillation variant");
  }
  return k;
}

struct DeskSeedResult {
  std::uint64_t seed = 0;
  double stage1_acc = 0.0;
  std::array<double, 4> variant_acc{};  // kVariantNames order
  std::array<double, 5> interp_acc{};   // kInterpolationAlphas order
  double sil_high = 0.0, sil_low = 0.0, sil_low_merlin = 0.0;
  double max_orth_error = 0.0, max_idem_error = 0.0;  // over the MERLIN run
  std::string teacher_hash_before, teacher_hash_after;
};

inline nlohmann::json to_json(const DeskSeedResult& r) {
  nlohmann::json v = nlohmann::json::object();
  for (std::size_t i = 0; i < 4; ++i) v[kVariantNames[i]] = r.variant_acc[i];
  return {{"seed", r.seed},
          {"stage1_acc", r.stage1_acc},
          {"variant_acc", v},
          {"interp_acc", r.interp_acc},
          {"silhouette", {{"high", r.sil_high}, {"low", r.sil_low}, {"low_after_merlin", r.sil_low_merlin}}},
          {"max_orth_error", r.max_orth_error},
          {"max_idem_error", r.max_idem_error}};
}

namespace detail {

inline std::vector<std::string> class_names(const std::vector<CommKind>& ks) {
  std::vector<std::string> out;
  for (auto k : ks) out.emplace_back(comm_kind_name(k));
  return out;
}

}  // namespace detail

/// Runs the whole desk pipeline for one seed under `cfg.root/seed-<n>`.
/// The low-SNR bench lives in `cfg.root/bench` and is shared by all seeds.
inline DeskSeedResult run_desk_seed(const DeskConfig& cfg, std::uint64_t seed) {
  SynthOptions so;
  so.mod_classes = cfg.classes;
  const fs::path dir = cfg.root / ("seed-" + std::to_string(seed));

  CorpusConfig cc;
  cc.out_dir = dir / "corpus";
  cc.counts = {{Task::MOD, cfg.stage1_samples}};
  cc.seed = seed;
  cc.workers = cfg.workers;
  cc.synth = so;
  build_corpus(cc);

  KdDatasetConfig kc;
  kc.out_dir = dir / "kd";
  kc.corpus_dir = cc.out_dir;
  kc.pairs = cfg.kd_pairs;
  kc.tasks = {Task::MOD};
  kc.seed = derive_seed(seed, hash_label("desk-kd"));
  kc.workers = cfg.workers;
  kc.synth = so;
  build_kd_dataset(kc);

  KdDatasetConfig ac = kc;
  ac.out_dir = dir / "analysis";
  ac.corpus_dir.clear();
  ac.pairs = cfg.analysis_pairs;
  ac.replay_fraction = 0.0;
  ac.seed = derive_seed(seed, hash_label("desk-analysis"));
  ac.snr_high_min_db = 10.0, ac.snr_high_max_db = 20.0;
  ac.snr_low_min_db = -20.0, ac.snr_low_max_db = -10.0;
  build_kd_dataset(ac);

  BenchConfig bc;
  bc.out_dir = cfg.root / "bench";
  bc.per_task = cfg.bench_items;
  bc.tasks = {Task::MOD};
  bc.snr_min_db = -20.0, bc.snr_max_db = 0.0;
  bc.seed = 3;
  bc.workers = cfg.workers;
  bc.synth = so;
  if (!fs::exists(bc.out_dir / "manifest.json")) build_bench(bc);
  const auto items = read_bench(bc.out_dir);
  const auto bench_x = parallel_map(items.size(), cfg.workers, [&](std::size_t i) {
    return signal_input(read_iq(bc.out_dir / items[i].signal_ref), static_cast<int>(kWindowLength));
  });
  std::vector<const Mat*> bench_ptr;
  for (const auto& m : bench_x) bench_ptr.push_back(&m);
  auto bench_acc = [&](const ModelState& st) { return 100.0 * choice_accuracy(st, encode_batch(st, bench_ptr), items); };

  DeskSeedResult r;
  r.seed = seed;
  TrainConfig tc = cfg.stage1;
  tc.seed = seed;
  const ModelState teacher = train_stage1(load_corpus_examples(cc.out_dir, {}, cfg.workers), tc).state;
  save_checkpoint(dir / "stage1.ckpt", teacher);
  r.teacher_hash_before = state_hash(teacher);
  r.stage1_acc = bench_acc(teacher);

  const auto kd = make_kd_examples(teacher, load_kd_sources(kc.out_dir, {}, cfg.workers));
  ModelState merlin;
  for (std::size_t v = 0; v < 4; ++v) {
    KdConfig k = variant_config(cfg.stage2, v);
    k.seed = seed;
    auto res = train_stage2(kd, teacher, k);
    r.variant_acc[v] = bench_acc(res.state);
    if (v == 3) {
      for (const auto& row : res.log) {
        r.max_orth_error = std::max(r.max_orth_error, row.orth_error);
        r.max_idem_error = std::max(r.max_idem_error, row.idem_error);
      }
      merlin = std::move(res.state);
    }
  }
  r.teacher_hash_after = state_hash(teacher);

  // matched high/low analysis signals
  const auto pairs = read_kd(ac.out_dir);
  const auto src = load_kd_sources(ac.out_dir, {}, cfg.workers);
  const auto names = detail::class_names(cfg.classes);
  std::vector<int> labels;
  std::vector<const Mat*> hi, lo;
  for (std::size_t i = 0; i < src.size(); ++i) {
    hi.push_back(&src[i].high.x);
    lo.push_back(&src[i].low.x);
    const auto at = std::find(names.begin(), names.end(), answer_string(Task::MOD, pairs[i].meta));
    labels.push_back(static_cast<int>(at - names.begin()));
  }
  const Mat fh = encode_batch(teacher, hi), fl = encode_batch(teacher, lo);
  r.sil_high = feature_separability(fh, labels);
  r.sil_low = feature_separability(fl, labels);
  r.sil_low_merlin = feature_separability(encode_batch(merlin, lo), labels);
  for (std::size_t a = 0; a < kInterpolationAlphas.size(); ++a) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < src.size(); ++i) {
      const Vec f = interpolate_features(fl.col(static_cast<Eigen::Index>(i)), fh.col(static_cast<Eigen::Index>(i)),
                                         kInterpolationAlphas[a]);
      hits += static_cast<int>(best_option(teacher, f, Task::MOD, names)) == labels[i];
    }
    r.interp_acc[a] = 100.0 * static_cast<double>(hits) / static_cast<double>(src.size());
  }
  return r;
}

}  // namespace embench
