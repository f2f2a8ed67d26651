#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "embench/bench.hpp"
#include "embench/metrics.hpp"

namespace embench {

struct TaskMetrics {
  std::size_t n = 0;
  double accuracy = 0.0;  // perception
  double rouge_l_f = 0.0;  // reasoning
  double bleu = 0.0;
};

struct SnrBinRow {
  std::string task;
  double snr_lo = 0.0, snr_hi = 0.0;
  std::size_t n = 0;
  double accuracy = 0.0;
};

struct MetricReport {
  std::map<std::string, TaskMetrics> tasks;
  double perception_macro_avg = 0.0;
  std::vector<SnrBinRow> snr_bins;

  nlohmann::json to_json() const {
    nlohmann::json j;
    for (const auto& [name, m] : tasks) {
      const Task t = parse_task(name);
      if (is_perception(t)) {
        j["tasks"][name] = {{"type", "perception"}, {"n", m.n}, {"accuracy", m.accuracy}};
      } else {
        j["tasks"][name] = {{"type", "reasoning"}, {"n", m.n}, {"rouge_l_f", m.rouge_l_f}, {"bleu", m.bleu}};
      }
    }
    j["perception_macro_avg"] = perception_macro_avg;
    return j;
  }

  std::string snr_csv() const {
    std::ostringstream os;
    os << "task,snr_lo_db,snr_hi_db,n,accuracy\n";
    for (const auto& r : snr_bins) os << r.task << ',' << r.snr_lo << ',' << r.snr_hi << ',' << r.n << ',' << r.accuracy << '\n';
    return os.str();
  }
};

/// Responses file: JSONL of {"id", "text"}.
inline std::map<std::string, std::string> read_responses(const std::filesystem::path& p) {
  std::ifstream is(p);
  if (!is) throw data_error("responses file not found: " + p.string());
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out[j.at("id").get<std::string>()] = j.at("text").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw data_error("malformed response line: " + std::string(e.what()));
    }
  }
  return out;
}

inline bool choice_correct(const BenchItem& it, const std::string& response) {
  const auto c = extract_choice(response);
  return c && std::string(1, *c) == it.gold;
}

/// Scores responses against bench items. Perception: gold-letter accuracy;
/// reasoning: mean ROUGE-L F and BLEU against the reference text. Every item id
/// must have a response.
inline MetricReport evaluate(const std::vector<BenchItem>& items, const std::map<std::string, std::string>& responses,
                             double snr_min_db = -20.0, double snr_bin_db = 5.0, std::size_t snr_bins = 8) {
  std::vector<std::string> missing;
  for (const auto& it : items)
    if (!responses.count(it.id)) missing.push_back(it.id);
  if (!missing.empty()) {
    std::string msg = std::to_string(missing.size()) + " bench items have no response:";
    for (std::size_t i = 0; i < missing.size(); ++i) msg += (i ? ", " : " ") + missing[i];
    throw data_error(msg);
  }
  MetricReport rep;
  std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>> bins;  // task -> (hits, n) per bin
  for (const auto& it : items) {
    const std::string name(task_name(it.task));
    auto& m = rep.tasks[name];
    ++m.n;
    const std::string& resp = responses.at(it.id);
    if (is_perception(it.task)) {
      const bool ok = choice_correct(it, resp);
      m.accuracy += ok;
      auto& b = bins[name];
      b.resize(snr_bins);
      auto k = static_cast<std::ptrdiff_t>(std::floor((it.snr_db - snr_min_db) / snr_bin_db));
      k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(snr_bins) - 1);
      b[static_cast<std::size_t>(k)].first += ok;
      ++b[static_cast<std::size_t>(k)].second;
    } else {
      const auto c = tokenize_text(resp), r = tokenize_text(it.gold);
      m.rouge_l_f += rouge_l(c, r).f1;
      m.bleu += bleu(c, r);
    }
  }
  double macro = 0.0;
  std::size_t np = 0;
  for (auto& [name, m] : rep.tasks) {
    const auto n = static_cast<double>(m.n);
    m.accuracy /= n;
    m.rouge_l_f /= n;
    m.bleu /= n;
    if (is_perception(parse_task(name))) {
      macro += m.accuracy;
      ++np;
    }
  }
  rep.perception_macro_avg = np ? macro / static_cast<double>(np) : 0.0;
  for (const auto& [name, b] : bins) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      SnrBinRow row{name, snr_min_db + static_cast<double>(k) * snr_bin_db,
                    snr_min_db + static_cast<double>(k + 1) * snr_bin_db, b[k].second, 0.0};
      row.accuracy = b[k].second ? static_cast<double>(b[k].first) / static_cast<double>(b[k].second) : 0.0;
      rep.snr_bins.push_back(row);
    }
  }
  return rep;
}

inline MetricReport evaluate_run(const std::filesystem::path& bench_dir, const std::filesystem::path& responses) {
  return evaluate(read_bench(bench_dir), read_responses(responses));
}

}  // namespace embench
