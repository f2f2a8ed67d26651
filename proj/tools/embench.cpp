// Command-line driver: synth, corpus, kd, bench, train, distill, respond,
// eval and analyze. Every run writes config.ini and config.sha256 into its
// output directory and is skipped when an identical completed run exists.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "embench/analysis.hpp"
#include "embench/bench.hpp"
#include "embench/checkpoint.hpp"
#include "embench/config.hpp"
#include "embench/corpus.hpp"
#include "embench/eval.hpp"
#include "embench/trainer.hpp"

namespace fs = std::filesystem;
using namespace embench;

namespace {

const std::set<std::string> kKnownKeys = {
    "seed", "workers",
    "synth.task", "synth.count", "synth.snr_db", "synth.mod_classes",
    "corpus.total", "corpus.per_task", "corpus.tasks", "corpus.snr_min", "corpus.snr_max", "corpus.mod_classes",
    "kd.pairs", "kd.replay_fraction", "kd.corpus", "kd.tasks", "kd.mod_classes",
    "bench.per_task", "bench.tasks", "bench.snr_min", "bench.snr_max", "bench.snr_bin", "bench.mod_classes",
    "train.corpus", "train.tasks", "train.epochs", "train.batch", "train.lr", "train.weight_decay",
    "distill.kd", "distill.teacher", "distill.tasks", "distill.epochs", "distill.batch", "distill.lr",
    "distill.weight_decay", "distill.lambda_logits", "distill.lambda_feat", "distill.temperature", "distill.mode",
    "distill.use_dsm", "distill.train_head",
    "respond.bench", "respond.model", "respond.gold",
    "eval.bench", "eval.responses",
    "analyze.model", "analyze.data",
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<Task> tasks_of(const Config& c, const std::string& key) {
  if (!c.has(key)) return {kAllTasks.begin(), kAllTasks.end()};
  std::vector<Task> out;
  for (const auto& t : split_list(c.get<std::string>(key, ""))) out.push_back(parse_task(t));
  if (out.empty()) throw config_error(key + ": empty task list");
  return out;
}

SynthOptions synth_of(const Config& c, const std::string& section) {
  SynthOptions so;
  const std::string key = section + ".mod_classes";
  if (c.has(key)) {
    so.mod_classes.clear();
    for (const auto& k : split_list(c.get<std::string>(key, ""))) so.mod_classes.push_back(parse_comm_kind(k));
  }
  return so;
}

fs::path need_path(const Config& c, const std::string& key) {
  const auto v = c.get<std::string>(key, "");
  if (v.empty()) throw config_error("missing required setting: " + key);
  return v;
}

struct Run {
  std::string command;
  Config config;
  fs::path out;
  bool force = false;
  std::uint64_t seed() const { return config.get<std::uint64_t>("seed", 1); }
  std::size_t workers() const { return config.get<std::size_t>("workers", 1); }
};

// True when `out` already holds a completed run of the same configuration.
bool up_to_date(const Run& r) {
  const fs::path marker = r.out / ".complete";
  return !r.force && fs::exists(marker) && read_file(marker) == r.config.hash() + "\n";
}

void begin(const Run& r) {
  fs::create_directories(r.out);
  fs::remove(r.out / ".complete");
  write_file(r.out / "config.ini", r.config.echo());
  write_file(r.out / "config.sha256", r.config.hash() + "\n");
}

void finish(const Run& r, const nlohmann::json& summary) {
  write_file(r.out / ".complete", r.config.hash() + "\n");
  std::cout << summary.dump(2) << "\n";
}

Mat load_input(const fs::path& p) { return signal_input(read_iq(p), static_cast<int>(kWindowLength)); }

void cmd_synth(const Run& r) {
  const Config& c = r.config;
  const Task task = parse_task(c.get<std::string>("synth.task", "MOD"));
  const auto count = c.get<std::size_t>("synth.count", 10);
  const auto snr = c.get<double>("synth.snr_db", 10.0);
  const SynthOptions so = synth_of(c, "synth");
  fs::create_directories(r.out / "signals");
  std::string jsonl;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = derive_seed(derive_seed(r.seed(), hash_label("synth")), i);
    Rng rng(s);
    Labeled sig = synth_from_task(task, rng, so);
    const IqSignal noisy = quantize_f32(add_awgn(sig.signal, snr, derive_seed(s, hash_label("noise")), sig.reference_power()));
    sig.meta.snr_db = snr;
    const std::string ref = "signals/synth-" + std::to_string(i + 1) + ".iq";
    write_iq(r.out / ref, noisy);
    jsonl += nlohmann::json{{"signal_ref", ref}, {"task_id", std::string(task_name(task))}, {"meta", sig.meta},
                            {"answer", answer_string(task, sig.meta)}}.dump() + "\n";
  }
  write_file(r.out / "signals.jsonl", jsonl);
  finish(r, {{"command", "synth"}, {"count", count}, {"sha256", sha256_hex(jsonl)}});
}

void cmd_corpus(const Run& r) {
  const Config& c = r.config;
  CorpusConfig cc;
  cc.out_dir = r.out;
  const auto tasks = tasks_of(c, "corpus.tasks");
  if (c.has("corpus.per_task")) {
    cc.counts.clear();
    for (Task t : tasks) cc.counts.emplace_back(t, c.get<std::size_t>("corpus.per_task", 0));
  } else {
    cc.counts = uniform_counts(c.get<std::size_t>("corpus.total", 10000), tasks);
  }
  cc.snr_min_db = c.get<double>("corpus.snr_min", -20.0);
  cc.snr_max_db = c.get<double>("corpus.snr_max", 20.0);
  cc.seed = r.seed();
  cc.workers = r.workers();
  cc.synth = synth_of(c, "corpus");
  const auto m = build_corpus(cc);
  finish(r, m.json);
}

void cmd_kd(const Run& r) {
  const Config& c = r.config;
  KdDatasetConfig kc;
  kc.out_dir = r.out;
  kc.corpus_dir = c.get<std::string>("kd.corpus", "");
  kc.pairs = c.get<std::size_t>("kd.pairs", 1000);
  kc.replay_fraction = c.get<double>("kd.replay_fraction", 0.2);
  kc.tasks = tasks_of(c, "kd.tasks");
  kc.seed = r.seed();
  kc.workers = r.workers();
  kc.synth = synth_of(c, "kd");
  finish(r, build_kd_dataset(kc).json);
}

void cmd_bench(const Run& r) {
  const Config& c = r.config;
  BenchConfig bc;
  bc.out_dir = r.out;
  bc.per_task = c.get<std::size_t>("bench.per_task", 300);
  bc.tasks = tasks_of(c, "bench.tasks");
  bc.snr_min_db = c.get<double>("bench.snr_min", -20.0);
  bc.snr_max_db = c.get<double>("bench.snr_max", 20.0);
  bc.snr_bin_db = c.get<double>("bench.snr_bin", 5.0);
  bc.seed = r.seed();
  bc.workers = r.workers();
  bc.synth = synth_of(c, "bench");
  finish(r, build_bench(bc).json);
}

nlohmann::json train_summary(const std::string& kind, const TrainResult& res, const fs::path& ckpt) {
  return {{"kind", kind},
          {"steps", res.log.size()},
          {"epoch_loss", res.epoch_loss},
          {"model_sha256", state_hash(res.state)},
          {"checkpoint_sha256", sha256_file(ckpt)}};
}

void cmd_train(const Run& r) {
  const Config& c = r.config;
  TrainConfig tc;
  tc.epochs = c.get<std::size_t>("train.epochs", tc.epochs);
  tc.batch = c.get<std::size_t>("train.batch", tc.batch);
  tc.lr = c.get<double>("train.lr", tc.lr);
  tc.weight_decay = c.get<double>("train.weight_decay", tc.weight_decay);
  tc.seed = r.seed();
  const fs::path corpus = need_path(c, "train.corpus");
  const auto tasks = c.has("train.tasks") ? tasks_of(c, "train.tasks") : std::vector<Task>{};
  const auto res = train_stage1(load_corpus_examples(corpus, tasks, r.workers()), tc);
  const fs::path ckpt = r.out / "model.ckpt";
  save_checkpoint(ckpt, res.state, {{"stage", 1}, {"config_sha256", c.hash()}});
  write_file(r.out / "train_log.csv", log_csv(res.log));
  const auto summary = train_summary("stage1", res, ckpt);
  write_file(r.out / "manifest.json", summary.dump(2) + "\n");
  finish(r, summary);
}

void cmd_distill(const Run& r) {
  const Config& c = r.config;
  KdConfig k;
  k.epochs = c.get<std::size_t>("distill.epochs", k.epochs);
  k.batch = c.get<std::size_t>("distill.batch", k.batch);
  k.lr = c.get<double>("distill.lr", k.lr);
  k.weight_decay = c.get<double>("distill.weight_decay", k.weight_decay);
  k.lambda_logits = c.get<double>("distill.lambda_logits", k.lambda_logits);
  k.lambda_feat = c.get<double>("distill.lambda_feat", k.lambda_feat);
  k.temperature = c.get<double>("distill.temperature", k.temperature);
  k.mode = parse_feat_mode(c.get<std::string>("distill.mode", feat_mode_name(k.mode)));
  k.use_dsm = c.get<bool>("distill.use_dsm", k.use_dsm);
  k.train_head = c.get<bool>("distill.train_head", k.train_head);
  k.seed = r.seed();
  validate(k);
  const ModelState teacher = load_checkpoint(need_path(c, "distill.teacher")).state;
  const std::string before = state_hash(teacher);
  const auto tasks = c.has("distill.tasks") ? tasks_of(c, "distill.tasks") : std::vector<Task>{};
  const auto data = make_kd_examples(teacher, load_kd_sources(need_path(c, "distill.kd"), tasks, r.workers()));
  const auto res = train_stage2(data, teacher, k);
  if (state_hash(teacher) != before) throw numeric_error("teacher parameters changed during distillation");
  const fs::path ckpt = r.out / "model.ckpt";
  save_checkpoint(ckpt, res.state, {{"stage", 2}, {"teacher_sha256", before}, {"config_sha256", c.hash()}});
  write_file(r.out / "distill_log.csv", log_csv(res.log));
  auto summary = train_summary("stage2", res, ckpt);
  summary["teacher_sha256"] = before;
  write_file(r.out / "manifest.json", summary.dump(2) + "\n");
  finish(r, summary);
}

void cmd_respond(const Run& r) {
  const Config& c = r.config;
  const fs::path bench = need_path(c, "respond.bench");
  const auto items = read_bench(bench);
  const bool gold = c.get<bool>("respond.gold", false);
  std::optional<ModelState> model;
  if (!gold) model = load_checkpoint(need_path(c, "respond.model")).state;
  const auto texts = parallel_map(items.size(), r.workers(), [&](std::size_t i) {
    if (gold) return items[i].gold;
    return model_response(*model, encode(*model, read_iq(bench / items[i].signal_ref)), items[i]);
  });
  std::string jsonl;
  for (std::size_t i = 0; i < items.size(); ++i) jsonl += nlohmann::json{{"id", items[i].id}, {"text", texts[i]}}.dump() + "\n";
  write_file(r.out / "responses.jsonl", jsonl);
  finish(r, {{"kind", "responses"}, {"items", items.size()}, {"sha256", sha256_hex(jsonl)}});
}

void cmd_eval(const Run& r) {
  const Config& c = r.config;
  const auto rep = evaluate_run(need_path(c, "eval.bench"), need_path(c, "eval.responses"));
  write_file(r.out / "report.json", rep.to_json().dump(2) + "\n");
  write_file(r.out / "snr_accuracy.csv", rep.snr_csv());
  finish(r, rep.to_json());
}

// Separability of high- and low-SNR features and the interpolation sweep, on
// the non-replay pairs of a KD-format directory.
void cmd_analyze(const Run& r) {
  const Config& c = r.config;
  const ModelState st = load_checkpoint(need_path(c, "analyze.model")).state;
  const fs::path data = need_path(c, "analyze.data");
  std::vector<KdPair> pairs;
  for (auto& p : read_kd(data)) {
    if (!p.is_replay) pairs.push_back(std::move(p));
  }
  if (pairs.empty()) throw data_error("analyze: no matched high/low pairs");
  const auto inputs = parallel_map(pairs.size(), r.workers(), [&](std::size_t i) {
    return std::pair{load_input(data / pairs[i].high_ref), load_input(data / pairs[i].low_ref)};
  });
  std::vector<const Mat*> hi, lo;
  for (const auto& [h, l] : inputs) {
    hi.push_back(&h);
    lo.push_back(&l);
  }
  const Mat fh = encode_batch(st, hi), fl = encode_batch(st, lo);

  std::map<std::string, int> label_ids;
  std::map<Task, std::vector<std::string>> candidates;
  std::vector<int> labels;
  std::vector<std::string> answers;
  for (const auto& p : pairs) {
    const std::string key = std::string(task_name(p.task)) + "/" + answer_string(p.task, p.meta);
    const auto [it, fresh] = label_ids.emplace(key, static_cast<int>(label_ids.size()));
    if (fresh) candidates[p.task].push_back(answer_string(p.task, p.meta));
    labels.push_back(it->second);
    answers.push_back(answer_string(p.task, p.meta));
  }
  // silhouette needs every class to have two members
  std::map<int, int> sizes;
  for (int l : labels) ++sizes[l];
  std::vector<Eigen::Index> keep;
  std::vector<int> kept_labels;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (sizes[labels[i]] >= 2) {
      keep.push_back(static_cast<Eigen::Index>(i));
      kept_labels.push_back(labels[i]);
    }
  }
  std::string sep = "set,snr_min_db,snr_max_db,points,silhouette\n";
  auto snr_span = [&](bool high) {
    double lo_db = 1e9, hi_db = -1e9;
    for (const auto& p : pairs) {
      const double s = high ? p.snr_high_db : p.snr_low_db;
      lo_db = std::min(lo_db, s), hi_db = std::max(hi_db, s);
    }
    return std::pair{lo_db, hi_db};
  };
  nlohmann::json summary = {{"kind", "analysis"}, {"pairs", pairs.size()}};
  for (const bool high : {true, false}) {
    const Mat& f = high ? fh : fl;
    Mat sub(f.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) sub.col(static_cast<Eigen::Index>(j)) = f.col(keep[j]);
    const double s = feature_separability(sub, kept_labels);
    const auto [a, b] = snr_span(high);
    std::ostringstream row;
    row << (high ? "high" : "low") << ',' << a << ',' << b << ',' << keep.size() << ',' << s << '\n';
    sep += row.str();
    summary[high ? "silhouette_high" : "silhouette_low"] = s;
  }
  write_file(r.out / "separability.csv", sep);

  std::string interp = "alpha,accuracy\n";
  nlohmann::json sweep = nlohmann::json::array();
  for (const double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto idx = static_cast<Eigen::Index>(i);
      const Vec f = interpolate_features(fl.col(idx), fh.col(idx), alpha);
      const auto& cands = candidates[pairs[i].task];
      hits += cands[best_option(st, f, pairs[i].task, cands)] == answers[i];
    }
    const double acc = static_cast<double>(hits) / static_cast<double>(pairs.size());
    std::ostringstream row;
    row << alpha << ',' << acc << '\n';
    interp += row.str();
    sweep.push_back({{"alpha", alpha}, {"accuracy", acc}});
  }
  write_file(r.out / "interpolation.csv", interp);
  summary["interpolation"] = sweep;
  finish(r, summary);
}

int fail(const std::string& kind, const std::string& message, int code) {
  std::cerr << nlohmann::json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic electromagnetic benchmark and distillation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  bool force = false;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "INI file with [section] key = value settings");
  app.add_option("--seed", seed, "global seed");
  app.add_option("--out", out_dir, "output directory (default $EMBENCH_OUT/<command>)");
  app.add_option("--workers", workers, "data-generation threads");
  app.add_flag("--force", force, "rerun even when the output is up to date");
  app.add_option("--set", sets, "override a setting, e.g. --set train.epochs=2");

  // command -> (flag, config key) shortcuts
  struct Shortcut {
    const char* flag;
    const char* key;
    const char* help;
  };
  const std::vector<std::pair<std::string, std::vector<Shortcut>>> commands = {
      {"synth", {{"--task", "synth.task", "task id"}, {"--count", "synth.count", "signals to draw"},
                 {"--snr", "synth.snr_db", "SNR in dB"}}},
      {"corpus", {{"--per-task", "corpus.per_task", "samples per task"}, {"--total", "corpus.total", "total samples"},
                  {"--tasks", "corpus.tasks", "comma-separated task ids"}}},
      {"kd", {{"--pairs", "kd.pairs", "KD entries"}, {"--corpus", "kd.corpus", "corpus directory for replay"},
              {"--tasks", "kd.tasks", "comma-separated task ids"}}},
      {"bench", {{"--per-task", "bench.per_task", "items per task"}, {"--tasks", "bench.tasks", "task ids"}}},
      {"train", {{"--corpus", "train.corpus", "corpus directory"}, {"--epochs", "train.epochs", "epochs"}}},
      {"distill", {{"--kd", "distill.kd", "KD dataset directory"}, {"--teacher", "distill.teacher", "Stage-1 checkpoint"},
                   {"--epochs", "distill.epochs", "epochs"}}},
      {"respond", {{"--bench", "respond.bench", "bench directory"}, {"--model", "respond.model", "checkpoint"}}},
      {"eval", {{"--bench", "eval.bench", "bench directory"}, {"--responses", "eval.responses", "responses JSONL"}}},
      {"analyze", {{"--model", "analyze.model", "checkpoint"}, {"--data", "analyze.data", "KD-format pair directory"}}},
  };
  const std::map<std::string, std::string> about = {
      {"synth", "draw labeled signals for one task"},
      {"corpus", "build the Stage-1 instruction corpus"},
      {"kd", "build matched high/low SNR distillation pairs"},
      {"bench", "build the evaluation bench"},
      {"train", "Stage-1 training from scratch"},
      {"distill", "Stage-2 distillation from a Stage-1 checkpoint"},
      {"respond", "answer bench items with a model (or echo gold)"},
      {"eval", "score a responses file against a bench"},
      {"analyze", "silhouette and interpolation analysis on matched pairs"},
  };
  std::map<std::string, std::map<std::string, std::string>> flag_values;
  std::map<std::string, CLI::App*> subs;
  bool gold = false;
  for (const auto& [name, shortcuts] : commands) {
    auto* sub = app.add_subcommand(name, about.at(name));
    subs[name] = sub;
    for (const auto& s : shortcuts) sub->add_option(s.flag, flag_values[name][s.key], s.help);
    if (name == "respond") sub->add_flag("--gold", gold, "echo the gold answers");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("config", e.what(), 2);
  }

  try {
    Run run;
    for (const auto& [name, sub] : subs) {
      if (sub->parsed()) run.command = name;
    }
    run.config = config_path.empty() ? Config() : Config::load(config_path);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw config_error("--set expects key=value, got " + s);
      run.config.set(s.substr(0, eq), s.substr(eq + 1));
    }
    for (const auto& [key, value] : flag_values[run.command]) {
      if (!value.empty()) run.config.set(key, value);
    }
    if (seed) run.config.set("seed", std::to_string(*seed));
    if (workers) run.config.set("workers", std::to_string(*workers));
    if (gold) run.config.set("respond.gold", "true");
    run.config.require_known(kKnownKeys);
    run.force = force;
    if (!out_dir.empty()) {
      run.out = out_dir;
    } else {
      const char* root = std::getenv("EMBENCH_OUT");
      run.out = fs::path(root && *root ? root : "out") / run.command;
    }
    if (up_to_date(run)) {
      std::cout << nlohmann::json{{"status", "up to date"}, {"out", run.out.string()}}.dump() << "\n";
      return 0;
    }
    begin(run);
    if (run.command == "synth") cmd_synth(run);
    else if (run.command == "corpus") cmd_corpus(run);
    else if (run.command == "kd") cmd_kd(run);
    else if (run.command == "bench") cmd_bench(run);
    else if (run.command == "train") cmd_train(run);
    else if (run.command == "distill") cmd_distill(run);
    else if (run.command == "respond") cmd_respond(run);
    else if (run.command == "eval") cmd_eval(run);
    else if (run.command == "analyze") cmd_analyze(run);
    return 0;
  } catch (const Error& e) {
    return fail(e.kind_name(), e.what(), e.exit_code());
  } catch (const std::exception& e) {
    return fail("data", e.what(), 3);
  }
}
