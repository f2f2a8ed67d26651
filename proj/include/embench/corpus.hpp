#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "embench/channel.hpp"
#include "embench/hash.hpp"
#include "embench/parallel.hpp"
#include "embench/synth.hpp"
#include "embench/templates.hpp"

namespace embench {

namespace fs = std::filesystem;

struct InstructionSample {
  std::string id;
  Task task = Task::MOD;
  std::string signal_ref;  // relative to the corpus directory
  Dialogue conversation;
  SignalMeta meta;  // includes snr_db
};

inline nlohmann::json to_json(const InstructionSample& s) {
  return {{"id", s.id},
          {"task_id", std::string(task_name(s.task))},
          {"signal_ref", s.signal_ref},
          {"conversation", nlohmann::json::array({{{"instruction", s.conversation.instruction},
                                                   {"response", s.conversation.response}}})},
          {"meta",
           {{"sample_rate_hz", s.meta.sample_rate_hz},
            {"snr_db", s.meta.snr_db.value_or(0.0)},
            {"task", std::string(task_name(s.task))},
            {"signal", s.meta}}}};
}

inline InstructionSample instruction_sample_from_json(const nlohmann::json& j) {
  try {
    InstructionSample s;
    s.id = j.at("id").get<std::string>();
    s.task = parse_task(j.at("task_id").get<std::string>());
    s.signal_ref = j.at("signal_ref").get<std::string>();
    const auto& conv = j.at("conversation");
    if (!conv.is_array() || conv.size() != 1) throw data_error("sample " + s.id + ": conversation must be one turn");
    s.conversation = {conv[0].at("instruction").get<std::string>(), conv[0].at("response").get<std::string>()};
    s.meta = j.at("meta").at("signal").get<SignalMeta>();
    if (!s.meta.snr_db) throw data_error("sample " + s.id + ": meta is missing field: snr_db");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw data_error(std::string("malformed instruction sample: ") + e.what());
  }
}

/// Per-task sample counts, in taxonomy order.
using TaskCounts = std::vector<std::pair<Task, std::size_t>>;

inline TaskCounts uniform_counts(std::size_t total, std::span<const Task> tasks = kAllTasks) {
  TaskCounts c;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    c.emplace_back(tasks[i], total / tasks.size() + (i < total % tasks.size() ? 1 : 0));
  }
  return c;
}

struct CorpusConfig {
  fs::path out_dir = "corpus";
  TaskCounts counts = uniform_counts(10000);
  double snr_min_db = -20.0;
  double snr_max_db = 20.0;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  SynthOptions synth;
};

inline constexpr std::size_t kFullScaleCorpus = 134107;

struct GeneratedSample {
  InstructionSample sample;
  IqSignal signal;
};

/// One corpus sample: a task signal at a uniform random SNR plus its dialogue.
/// Pure function of (task, index, seed).
inline GeneratedSample make_corpus_sample(Task task, std::size_t index, const CorpusConfig& cfg,
                                          std::string_view id_prefix = "corpus") {
  const std::uint64_t s = derive_seed(derive_seed(cfg.seed, hash_label(std::string(id_prefix) + ":" +
                                                                         std::string(task_name(task)))),
                                      index);
  Rng rng(s);
  Labeled clean = synth_from_task(task, rng, cfg.synth);
  const double snr = rng.uniform(cfg.snr_min_db, cfg.snr_max_db);
  IqSignal noisy = quantize_f32(add_awgn(clean.signal, snr, derive_seed(s, hash_label("noise")), clean.reference_power()));
  clean.meta.snr_db = snr;
  char num[32];
  std::snprintf(num, sizeof num, "%06zu", index + 1);
  InstructionSample out;
  out.id = std::string(id_prefix) + "-" + std::string(task_name(task)) + "-" + num;
  out.task = task;
  out.signal_ref = "signals/" + out.id + ".iq";
  out.conversation = render_template(task, clean.meta, rng);
  out.meta = clean.meta;
  return {std::move(out), std::move(noisy)};
}

struct CorpusManifest {
  std::size_t total = 0;
  std::map<std::string, std::size_t> per_task;
  std::string content_sha256;
  nlohmann::json json;
};

namespace detail {

inline void ensure_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec || !fs::is_directory(p)) throw data_error("cannot create output directory: " + p.string());
}

inline std::string iq_bytes(const IqSignal& s) {
  std::string b(s.size() * 8, '\0');
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto re = std::bit_cast<std::uint32_t>(static_cast<float>(s[i].real()));
    const auto im = std::bit_cast<std::uint32_t>(static_cast<float>(s[i].imag()));
    for (int k = 0; k < 4; ++k) {
      b[8 * i + k] = static_cast<char>(re >> (8 * k));
      b[8 * i + 4 + k] = static_cast<char>(im >> (8 * k));
    }
  }
  return b;
}

}  // namespace detail

/// Writes corpus.jsonl, signals/<id>.iq and manifest.json under cfg.out_dir.
/// Samples are generated in parallel chunks and written in index order, so
/// the bytes do not depend on cfg.workers.
inline CorpusManifest build_corpus(const CorpusConfig& cfg) {
  std::size_t total = 0;
  for (const auto& [t, n] : cfg.counts) total += n;
  if (total == 0) throw config_error("corpus: all per-task counts are zero");
  if (!(cfg.snr_min_db <= cfg.snr_max_db)) throw config_error("corpus: snr range is empty");
  detail::ensure_dir(cfg.out_dir / "signals");

  std::vector<std::pair<Task, std::size_t>> jobs;
  for (const auto& [t, n] : cfg.counts)
    for (std::size_t i = 0; i < n; ++i) jobs.emplace_back(t, i);

  std::ofstream jsonl(cfg.out_dir / "corpus.jsonl", std::ios::binary | std::ios::trunc);
  if (!jsonl) throw data_error("cannot write " + (cfg.out_dir / "corpus.jsonl").string());
  Sha256 text_hash, signal_hash;
  constexpr std::size_t kChunk = 2048;
  for (std::size_t base = 0; base < jobs.size(); base += kChunk) {
    const std::size_t n = std::min(kChunk, jobs.size() - base);
    auto chunk = parallel_map(n, cfg.workers, [&](std::size_t k) {
      return make_corpus_sample(jobs[base + k].first, jobs[base + k].second, cfg);
    });
    for (const auto& g : chunk) {
      const std::string line = to_json(g.sample).dump() + "\n";
      jsonl << line;
      text_hash.update(line);
      const std::string bytes = detail::iq_bytes(g.signal);
      write_file(cfg.out_dir / g.sample.signal_ref, bytes);
      signal_hash.update(bytes);
    }
  }
  jsonl.close();
  if (!jsonl) throw data_error("write failed: corpus.jsonl");

  CorpusManifest m;
  m.total = total;
  for (const auto& [t, n] : cfg.counts) m.per_task[std::string(task_name(t))] = n;
  m.content_sha256 = sha256_hex(text_hash.hex_digest() + signal_hash.hex_digest());
  m.json = {{"kind", "corpus"},
            {"version", 1},
            {"seed", cfg.seed},
            {"total", total},
            {"per_task", m.per_task},
            {"snr_range_db", {cfg.snr_min_db, cfg.snr_max_db}},
            {"samples", "corpus.jsonl"},
            {"content_sha256", m.content_sha256}};
  write_file(cfg.out_dir / "manifest.json", m.json.dump(2) + "\n");
  return m;
}

inline std::vector<InstructionSample> read_corpus(const fs::path& dir) {
  std::ifstream is(dir / "corpus.jsonl");
  if (!is) throw data_error("corpus not found: " + (dir / "corpus.jsonl").string());
  std::vector<InstructionSample> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(instruction_sample_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::parse_error& e) {
      throw data_error("corpus line is not JSON: " + std::string(e.what()));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stage-2 parallel data

struct KdPair {
  std::string id;
  Task task = Task::MOD;
  std::string high_ref;
  std::string low_ref;
  std::string question_text;
  std::string answer_text;
  bool is_replay = false;
  double snr_high_db = 0.0;
  double snr_low_db = 0.0;
  SignalMeta meta;
};

inline nlohmann::json to_json(const KdPair& p) {
  return {{"id", p.id},
          {"task_id", std::string(task_name(p.task))},
          {"high_ref", p.high_ref},
          {"low_ref", p.low_ref},
          {"question_text", p.question_text},
          {"answer_text", p.answer_text},
          {"is_replay", p.is_replay},
          {"snr_high_db", p.snr_high_db},
          {"snr_low_db", p.snr_low_db},
          {"meta", p.meta}};
}

inline KdPair kd_pair_from_json(const nlohmann::json& j) {
  try {
    KdPair p;
    p.id = j.at("id").get<std::string>();
    p.task = parse_task(j.at("task_id").get<std::string>());
    p.high_ref = j.at("high_ref").get<std::string>();
    p.low_ref = j.at("low_ref").get<std::string>();
    p.question_text = j.at("question_text").get<std::string>();
    p.answer_text = j.at("answer_text").get<std::string>();
    p.is_replay = j.at("is_replay").get<bool>();
    p.snr_high_db = j.at("snr_high_db").get<double>();
    p.snr_low_db = j.at("snr_low_db").get<double>();
    p.meta = j.at("meta").get<SignalMeta>();
    if (p.is_replay != (p.high_ref == p.low_ref)) throw data_error("kd pair " + p.id + ": replay flag inconsistent");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw data_error(std::string("malformed kd pair: ") + e.what());
  }
}

struct KdDatasetConfig {
  fs::path out_dir = "kd";
  fs::path corpus_dir;  // replay source
  std::size_t pairs = 1000;
  double replay_fraction = 0.2;
  double snr_high_min_db = 0.0, snr_high_max_db = 20.0;
  double snr_low_min_db = -20.0, snr_low_max_db = -1e-9;  // [lo, hi] inside [-20, 0)
  std::vector<Task> tasks{kAllTasks.begin(), kAllTasks.end()};
  std::uint64_t seed = 2;
  std::size_t workers = 1;
  SynthOptions synth;
};

inline void validate(const KdDatasetConfig& c) {
  if (c.pairs == 0) throw config_error("kd: pair count must be positive");
  if (!(c.replay_fraction >= 0.0 && c.replay_fraction < 1.0)) throw config_error("kd: replay fraction must lie in [0, 1)");
  if (!(0.0 <= c.snr_high_min_db && c.snr_high_min_db <= c.snr_high_max_db && c.snr_high_max_db <= 20.0)) {
    throw config_error("kd: snr_high range must lie in [0, 20]");
  }
  if (!(-20.0 <= c.snr_low_min_db && c.snr_low_min_db <= c.snr_low_max_db && c.snr_low_max_db < 0.0)) {
    throw config_error("kd: snr_low range must lie in [-20, 0)");
  }
  if (c.tasks.empty()) throw config_error("kd: empty task list");
}

struct KdGenerated {
  KdPair pair;
  std::optional<IqSignal> high, low;
};

inline KdGenerated make_kd_pair(std::size_t index, const KdDatasetConfig& cfg) {
  const std::uint64_t s = derive_seed(derive_seed(cfg.seed, hash_label("kd-pair")), index);
  Rng rng(s);
  const Task task = cfg.tasks[rng.index(cfg.tasks.size())];
  Labeled clean = synth_from_task(task, rng, cfg.synth);
  const double sh = rng.uniform(cfg.snr_high_min_db, cfg.snr_high_max_db);
  const double sl = rng.uniform(cfg.snr_low_min_db, cfg.snr_low_max_db);
  SnrPair pair = make_snr_pair(clean.signal, sh, sl, derive_seed(s, hash_label("noise")), clean.reference_power());
  char num[32];
  std::snprintf(num, sizeof num, "%06zu", index + 1);
  KdGenerated g;
  g.pair.id = std::string("kd-") + num;
  g.pair.task = task;
  g.pair.high_ref = "signals/" + g.pair.id + "_high.iq";
  g.pair.low_ref = "signals/" + g.pair.id + "_low.iq";
  g.pair.snr_high_db = sh;
  g.pair.snr_low_db = sl;
  clean.meta.snr_db = sl;
  const Dialogue d = render_template(task, clean.meta, rng);
  g.pair.question_text = d.instruction;
  g.pair.answer_text = d.response;
  g.pair.meta = clean.meta;
  g.high = quantize_f32(pair.high);
  g.low = quantize_f32(pair.low);
  return g;
}

struct KdManifest {
  std::size_t pairs = 0;
  std::size_t replay = 0;
  std::string content_sha256;
  nlohmann::json json;
};

/// (1 - rho) * N parallel high/low pairs plus rho * N replay entries copied
/// from the Stage-1 corpus (replay entries have high_ref == low_ref).
inline KdManifest build_kd_dataset(const KdDatasetConfig& cfg) {
  validate(cfg);
  const auto n_replay = static_cast<std::size_t>(std::llround(cfg.replay_fraction * static_cast<double>(cfg.pairs)));
  const std::size_t n_pairs = cfg.pairs - n_replay;
  std::vector<InstructionSample> pool;
  if (n_replay > 0) {
    if (cfg.corpus_dir.empty()) throw config_error("kd: replay needs a Stage-1 corpus directory");
    for (auto& s : read_corpus(cfg.corpus_dir)) {
      if (std::find(cfg.tasks.begin(), cfg.tasks.end(), s.task) != cfg.tasks.end()) pool.push_back(std::move(s));
    }
    if (pool.size() < n_replay) throw data_error("kd: corpus has too few samples of the KD tasks for replay");
  }
  detail::ensure_dir(cfg.out_dir / "signals");

  std::ofstream jsonl(cfg.out_dir / "kd.jsonl", std::ios::binary | std::ios::trunc);
  if (!jsonl) throw data_error("cannot write kd.jsonl");
  Sha256 h;
  auto emit = [&](const KdPair& p) {
    const std::string line = to_json(p).dump() + "\n";
    jsonl << line;
    h.update(line);
  };
  constexpr std::size_t kChunk = 2048;
  for (std::size_t base = 0; base < n_pairs; base += kChunk) {
    const std::size_t n = std::min(kChunk, n_pairs - base);
    auto chunk = parallel_map(n, cfg.workers, [&](std::size_t k) { return make_kd_pair(base + k, cfg); });
    for (const auto& g : chunk) {
      const std::string hb = detail::iq_bytes(*g.high), lb = detail::iq_bytes(*g.low);
      write_file(cfg.out_dir / g.pair.high_ref, hb);
      write_file(cfg.out_dir / g.pair.low_ref, lb);
      h.update(hb).update(lb);
      emit(g.pair);
    }
  }
  // replay: a seeded sample without replacement from the corpus
  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rrng(derive_seed(cfg.seed, hash_label("kd-replay")));
  rrng.shuffle(order);
  for (std::size_t r = 0; r < n_replay; ++r) {
    const InstructionSample& src = pool[order[r]];
    KdPair p;
    char num[32];
    std::snprintf(num, sizeof num, "%06zu", r + 1);
    p.id = std::string("kd-replay-") + num;
    p.task = src.task;
    p.high_ref = p.low_ref = "signals/" + p.id + ".iq";
    p.question_text = src.conversation.instruction;
    p.answer_text = src.conversation.response;
    p.is_replay = true;
    p.snr_high_db = p.snr_low_db = *src.meta.snr_db;
    p.meta = src.meta;
    const std::string bytes = read_file(cfg.corpus_dir / src.signal_ref);
    write_file(cfg.out_dir / p.high_ref, bytes);
    h.update(bytes);
    emit(p);
  }
  jsonl.close();

  KdManifest m;
  m.pairs = n_pairs;
  m.replay = n_replay;
  m.content_sha256 = h.hex_digest();
  m.json = {{"kind", "kd"},
            {"version", 1},
            {"seed", cfg.seed},
            {"pairs", n_pairs},
            {"replay", n_replay},
            {"replay_fraction", cfg.replay_fraction},
            {"samples", "kd.jsonl"},
            {"content_sha256", m.content_sha256}};
  write_file(cfg.out_dir / "manifest.json", m.json.dump(2) + "\n");
  return m;
}

inline std::vector<KdPair> read_kd(const fs::path& dir) {
  std::ifstream is(dir / "kd.jsonl");
  if (!is) throw data_error("kd dataset not found: " + (dir / "kd.jsonl").string());
  std::vector<KdPair> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(kd_pair_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::parse_error& e) {
      throw data_error("kd line is not JSON: " + std::string(e.what()));
    }
  }
  return out;
}

}  // namespace embench
