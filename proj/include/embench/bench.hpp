#pragma once

#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "embench/corpus.hpp"

namespace embench {

inline constexpr const char* kUnableToAnswer = "Unable to answer";
inline constexpr std::array<char, 5> kLetters = {'A', 'B', 'C', 'D', 'E'};

struct BenchItem {
  std::string id;
  Task task = Task::MOD;
  std::string question_text;
  std::string signal_ref;  // relative to the bench root
  std::optional<std::array<std::string, 5>> options;
  std::string gold;    // option letter (perception) or reference strategy text (reasoning)
  std::string answer;  // ground-truth answer string / strategy key
  double snr_db = 0.0;
  SignalMeta meta;
};

inline nlohmann::json to_json(const BenchItem& it) {
  nlohmann::json j = {{"id", it.id},
                      {"task_id", std::string(task_name(it.task))},
                      {"question_text", it.question_text},
                      {"signal_ref", it.signal_ref},
                      {"gold", it.gold},
                      {"answer", it.answer},
                      {"snr_db", it.snr_db},
                      {"meta", it.meta}};
  if (it.options) {
    nlohmann::json o = nlohmann::json::object();
    for (std::size_t k = 0; k < 5; ++k) o[std::string(1, kLetters[k])] = (*it.options)[k];
    j["options"] = o;
  }
  return j;
}

/// Throws a data error describing the first violated item invariant.
inline void validate_item(const BenchItem& it) {
  auto fail = [&](const std::string& why) { throw data_error("bench item " + it.id + ": " + why); };
  if (it.id.empty()) fail("empty id");
  if (it.question_text.empty()) fail("empty question");
  if (is_perception(it.task)) {
    if (!it.options) fail("perception item without options");
    const auto& o = *it.options;
    if (o[4] != kUnableToAnswer) fail("option E must be \"Unable to answer\"");
    if (it.gold.size() != 1 || it.gold[0] < 'A' || it.gold[0] > 'D') fail("gold must be one of A-D");
    std::set<std::string> seen(o.begin(), o.end());
    if (seen.size() != 5) fail("options are not distinct");
    int hits = 0;
    for (std::size_t k = 0; k < 4; ++k) hits += o[k] == it.answer;
    if (hits != 1) fail("ground truth must appear exactly once");
    if (o[static_cast<std::size_t>(it.gold[0] - 'A')] != it.answer) fail("gold letter does not hold the answer");
  } else {
    if (it.options) fail("reasoning item with options");
    if (it.gold.empty()) fail("empty reference text");
  }
}

inline BenchItem bench_item_from_json(const nlohmann::json& j) {
  try {
    BenchItem it;
    it.id = j.at("id").get<std::string>();
    it.task = parse_task(j.at("task_id").get<std::string>());
    it.question_text = j.at("question_text").get<std::string>();
    it.signal_ref = j.at("signal_ref").get<std::string>();
    it.gold = j.at("gold").get<std::string>();
    it.answer = j.at("answer").get<std::string>();
    it.snr_db = j.at("snr_db").get<double>();
    it.meta = j.at("meta").get<SignalMeta>();
    if (j.contains("options")) {
      std::array<std::string, 5> o;
      for (std::size_t k = 0; k < 5; ++k) o[k] = j.at("options").at(std::string(1, kLetters[k])).get<std::string>();
      it.options = o;
    }
    validate_item(it);
    return it;
  } catch (const nlohmann::json::exception& e) {
    throw data_error(std::string("malformed bench item: ") + e.what());
  }
}

namespace detail {

inline double leading_number(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

inline std::pair<double, double> segment_of(const std::string& s) {
  const auto dash = s.find('-');
  if (dash == std::string::npos) throw data_error("segment answer without '-': " + s);
  return {std::strtod(s.substr(0, dash).c_str(), nullptr), std::strtod(s.substr(dash + 1).c_str(), nullptr)};
}

}  // namespace detail

/// Whether two answers of `task` are far enough apart to serve as competing
/// options: numeric answers differ by >= 10% of `reference`, segments move an
/// endpoint by >= 10% of the window, labels just differ.
inline bool distinguishable(Task task, const std::string& a, const std::string& b, const std::string& reference,
                            std::size_t window = kWindowLength) {
  if (a == b) return false;
  if (task == Task::SD) {
    const auto [a0, a1] = detail::segment_of(a);
    const auto [b0, b1] = detail::segment_of(b);
    const double tol = 0.1 * static_cast<double>(window);
    return std::abs(a0 - b0) >= tol || std::abs(a1 - b1) >= tol;
  }
  if (is_numeric(task)) {
    const double ref = std::abs(detail::leading_number(reference));
    return std::abs(detail::leading_number(a) - detail::leading_number(b)) >= 0.1 * ref;
  }
  return true;
}

/// Gold plus three pool distractors shuffled into A-D; E is "Unable to answer".
inline BenchItem build_choice_item(Task task, const Labeled& sig, const std::vector<std::string>& answer_pool, Rng& rng) {
  if (!is_perception(task)) throw config_error("build_choice_item: not a perception task");
  BenchItem it;
  it.task = task;
  it.meta = sig.meta;
  it.answer = answer_string(task, sig.meta);
  std::vector<std::string> cand;
  {
    std::set<std::string> uniq(answer_pool.begin(), answer_pool.end());
    cand.assign(uniq.begin(), uniq.end());
  }
  rng.shuffle(cand);
  // first mutually distinguishable triple in shuffled order (depth-first, so a
  // greedy dead end does not hide a valid triple)
  std::erase_if(cand, [&](const std::string& c) { return !distinguishable(task, c, it.answer, it.answer); });
  std::vector<std::string> picked;
  const auto search = [&](auto&& self, std::size_t from) -> bool {
    if (picked.size() == 3) return true;
    for (std::size_t i = from; i < cand.size(); ++i) {
      bool ok = true;
      for (const auto& p : picked) ok = ok && distinguishable(task, cand[i], p, it.answer);
      if (!ok) continue;
      picked.push_back(cand[i]);
      if (self(self, i + 1)) return true;
      picked.pop_back();
    }
    return false;
  };
  if (!search(search, 0)) {
    throw data_error("answer pool for " + std::string(task_name(task)) + " has fewer than 3 usable distractors");
  }
  std::vector<std::string> opts = picked;
  opts.push_back(it.answer);
  rng.shuffle(opts);
  std::array<std::string, 5> o;
  for (std::size_t k = 0; k < 4; ++k) {
    o[k] = opts[k];
    if (opts[k] == it.answer) it.gold = std::string(1, kLetters[k]);
  }
  o[4] = kUnableToAnswer;
  it.options = o;
  return it;
}

inline BenchItem build_reasoning_item(Task task, const Labeled& sig, Rng& rng,
                                      const StrategyTable& table = builtin_strategy_table()) {
  if (!is_reasoning(task)) throw config_error("build_reasoning_item: not a reasoning task");
  BenchItem it;
  it.task = task;
  it.meta = sig.meta;
  it.answer = reasoning_key(task, sig.meta);
  it.gold = lookup_strategy(table, task, it.answer).text;
  (void)rng;
  return it;
}

struct BenchConfig {
  fs::path out_dir = "bench";
  std::size_t per_task = 300;
  std::vector<Task> tasks{kAllTasks.begin(), kAllTasks.end()};
  double snr_min_db = -20.0;
  double snr_max_db = 20.0;
  double snr_bin_db = 5.0;
  std::uint64_t seed = 3;
  std::size_t workers = 1;
  SynthOptions synth;
};

inline std::size_t snr_bin_count(const BenchConfig& c) {
  return static_cast<std::size_t>(std::llround((c.snr_max_db - c.snr_min_db) / c.snr_bin_db));
}

inline std::string options_block(const std::array<std::string, 5>& o) {
  std::string s;
  for (std::size_t k = 0; k < 5; ++k) s += std::string(k ? " " : "") + kLetters[k] + ") " + o[k];
  return s;
}

struct BenchManifest {
  std::size_t total = 0;
  std::map<std::string, std::size_t> per_task;
  std::string content_sha256;
  nlohmann::json json;
};

/// Items of one task with their (noisy) signals, in index order. Item k lies in
/// SNR bin k mod B, so bin counts differ by at most one.
inline std::vector<std::pair<BenchItem, IqSignal>> generate_task_items(Task task, const BenchConfig& cfg) {
  const std::size_t bins = snr_bin_count(cfg);
  if (bins == 0) throw config_error("bench: SNR range narrower than one bin");
  const std::uint64_t tseed = derive_seed(cfg.seed, hash_label("bench:" + std::string(task_name(task))));
  struct Raw {
    Labeled sig;
    IqSignal noisy;
    double snr;
    Dialogue d;
  };
  auto raws = parallel_map(cfg.per_task, cfg.workers, [&](std::size_t k) {
    const std::uint64_t s = derive_seed(tseed, k);
    Rng rng(s);
    Labeled sig = synth_from_task(task, rng, cfg.synth);
    const double lo = cfg.snr_min_db + static_cast<double>(k % bins) * cfg.snr_bin_db;
    const double snr = rng.uniform(lo, lo + cfg.snr_bin_db);
    IqSignal noisy = quantize_f32(add_awgn(sig.signal, snr, derive_seed(s, hash_label("noise")), sig.reference_power()));
    sig.meta.snr_db = snr;
    Dialogue d = render_template(task, sig.meta, rng);
    return Raw{std::move(sig), std::move(noisy), snr, std::move(d)};
  });
  std::vector<std::string> pool;
  if (is_perception(task))
    for (const auto& r : raws) pool.push_back(answer_string(task, r.sig.meta));

  std::vector<std::pair<BenchItem, IqSignal>> out;
  out.reserve(raws.size());
  for (std::size_t k = 0; k < raws.size(); ++k) {
    Rng orng(derive_seed(tseed, hash_label("options") + k));
    BenchItem it = is_perception(task) ? build_choice_item(task, raws[k].sig, pool, orng)
                                       : build_reasoning_item(task, raws[k].sig, orng);
    char num[32];
    std::snprintf(num, sizeof num, "%04zu", k + 1);
    it.id = "bench-" + std::string(task_name(task)) + "-" + num;
    it.signal_ref = std::string(task_name(task)) + "/signals/" + it.id + ".iq";
    it.snr_db = raws[k].snr;
    it.question_text = raws[k].d.instruction;
    if (it.options) it.question_text += " Options: " + options_block(*it.options);
    validate_item(it);
    out.emplace_back(std::move(it), std::move(raws[k].noisy));
  }
  return out;
}

/// Writes <TASK>/items.jsonl and <TASK>/signals/ for every task plus a
/// manifest with per-task counts and a content hash.
inline BenchManifest build_bench(const BenchConfig& cfg) {
  if (cfg.per_task == 0) throw config_error("bench: per_task must be positive");
  BenchManifest m;
  Sha256 h;
  for (Task t : cfg.tasks) {
    const fs::path tdir = cfg.out_dir / std::string(task_name(t));
    detail::ensure_dir(tdir / "signals");
    auto items = generate_task_items(t, cfg);
    std::string jsonl;
    for (const auto& [it, sig] : items) {
      jsonl += to_json(it).dump() + "\n";
      const std::string bytes = detail::iq_bytes(sig);
      write_file(cfg.out_dir / it.signal_ref, bytes);
      h.update(bytes);
    }
    write_file(tdir / "items.jsonl", jsonl);
    h.update(jsonl);
    m.per_task[std::string(task_name(t))] = items.size();
    m.total += items.size();
  }
  m.content_sha256 = h.hex_digest();
  m.json = {{"kind", "bench"},
            {"version", 1},
            {"seed", cfg.seed},
            {"total", m.total},
            {"per_task", m.per_task},
            {"snr_range_db", {cfg.snr_min_db, cfg.snr_max_db}},
            {"snr_bin_db", cfg.snr_bin_db},
            {"content_sha256", m.content_sha256}};
  write_file(cfg.out_dir / "manifest.json", m.json.dump(2) + "\n");
  return m;
}

/// All items of a bench directory, tasks in manifest order.
inline std::vector<BenchItem> read_bench(const fs::path& dir) {
  const auto man = nlohmann::json::parse(read_file(dir / "manifest.json"));
  std::vector<BenchItem> out;
  for (Task t : kAllTasks) {
    const std::string name(task_name(t));
    if (!man.at("per_task").contains(name)) continue;
    std::ifstream is(dir / name / "items.jsonl");
    if (!is) throw data_error("bench task file missing: " + (dir / name / "items.jsonl").string());
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      try {
        out.push_back(bench_item_from_json(nlohmann::json::parse(line)));
      } catch (const nlohmann::json::parse_error& e) {
        throw data_error("bench line is not JSON: " + std::string(e.what()));
      }
    }
  }
  return out;
}

}  // namespace embench
