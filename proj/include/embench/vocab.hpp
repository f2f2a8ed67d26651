#pragma once

#include <cctype>
#include <cstdio>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "embench/error.hpp"
#include "embench/labels.hpp"
#include "embench/meta.hpp"
#include "embench/tasks.hpp"

namespace embench {

/// Answer vocabulary: end marker, digits, number punctuation, units, every
/// label name and the question keywords.
class Vocab {
 public:
  Vocab() {
    add("<eos>");
    for (char c = '0'; c <= '9'; ++c) add(std::string(1, c));
    for (const char* s : {".", "-", "µs", "kHz", "MHz", "%"}) add(s);
    for (RadarKind k : kRadarKinds) add(std::string(radar_kind_name(k)));
    for (CommKind k : kCommKinds) add(std::string(comm_kind_name(k)));
    for (Protocol p : kProtocols) add(std::string(protocol_name(p)));
    for (JamKind k : kRadarJamKinds) add(std::string(jam_kind_name(k)));
    for (JamKind k : kCommJamKinds) add(std::string(jam_kind_name(k)));
    for (const char* s : {"modulation", "duty", "cycle", "repetition", "frequency", "bandwidth", "pulse", "width",
                          "number", "protocol", "radar", "communication", "jamming", "segment", "strategy",
                          "counter", "type"}) {
      add(s);
    }
  }

  int id(std::string_view tok) const {
    auto it = ids_.find(std::string(tok));
    if (it == ids_.end()) throw data_error("token not in vocabulary: " + std::string(tok));
    return it->second;
  }
  bool contains(std::string_view tok) const { return ids_.count(std::string(tok)) != 0; }
  const std::string& token(int id) const {
    if (id < 0 || id >= size()) throw data_error("token id out of range: " + std::to_string(id));
    return tokens_[static_cast<std::size_t>(id)];
  }
  int size() const { return static_cast<int>(tokens_.size()); }
  static constexpr int kEos = 0;

 private:
  void add(const std::string& t) {
    if (ids_.count(t)) return;  // "Noise" style collisions map to one token
    ids_[t] = static_cast<int>(tokens_.size());
    tokens_.push_back(t);
  }
  std::vector<std::string> tokens_;
  std::map<std::string, int> ids_;
};

inline const Vocab& vocab() {
  static const Vocab v;
  return v;
}

/// Four significant digits, never in exponent form.
inline std::string format_sig4(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  std::string s(buf);
  if (s.find('e') != std::string::npos) {
    std::snprintf(buf, sizeof buf, "%.4f", x);
    s = buf;
    while (s.find('.') != std::string::npos && (s.back() == '0' || s.back() == '.')) {
      const bool dot = s.back() == '.';
      s.pop_back();
      if (dot) break;
    }
  }
  return s;
}

namespace detail {

inline const PulseParams& need_pulse(const SignalMeta& m) {
  if (!m.pulse) throw data_error("meta is missing field: pulse");
  return *m.pulse;
}

}  // namespace detail

/// The key a reasoning answer is looked up by: the jamming kind for
/// anti-jamming tasks, the victim waveform for jamming-strategy tasks.
inline std::string reasoning_key(Task task, const SignalMeta& m) {
  switch (task) {
    case Task::Anti_CJ:
    case Task::Anti_RJ:
      if (!m.jamming) throw data_error("meta is missing field: jamming");
      return m.jamming->kind;
    case Task::CJS:
    case Task::RJS:
      if (m.waveform.empty()) throw data_error("meta is missing field: waveform");
      return m.waveform;
    default: throw config_error("not a reasoning task: " + std::string(task_name(task)));
  }
}

/// Canonical short answer derived from meta alone. Reasoning tasks answer with
/// their key label; the strategy table expands it to text.
inline std::string answer_string(Task task, const SignalMeta& m) {
  switch (task) {
    case Task::MOD:
      if (m.family != "comm") throw data_error("MOD needs a communication signal");
      return m.waveform;
    case Task::PE_DC: return format_sig4(detail::need_pulse(m).duty_cycle * 100.0) + " %";
    case Task::PE_PRF: {
      const auto& p = detail::need_pulse(m);
      if (!p.prf_valid) throw data_error("meta field pulse.prf_hz is not valid");
      return format_sig4(p.prf_hz / 1e3) + " kHz";
    }
    case Task::PE_BW: {
      const auto& p = detail::need_pulse(m);
      if (!p.bandwidth_valid) throw data_error("meta field pulse.bandwidth_hz is not valid");
      return format_sig4(p.bandwidth_hz / 1e6) + " MHz";
    }
    case Task::PE_PW: return format_sig4(detail::need_pulse(m).pulse_width_s * 1e6) + " µs";
    case Task::PE_NoP: return std::to_string(detail::need_pulse(m).num_pulses);
    case Task::PI:
      if (!m.protocol) throw data_error("meta is missing field: protocol");
      return *m.protocol;
    case Task::RJR:
    case Task::CJR:
      if (!m.jamming) throw data_error("meta is missing field: jamming");
      return m.jamming->kind;
    case Task::SD:
      if (!m.jamming) throw data_error("meta is missing field: jamming");
      return std::to_string(m.jamming->start) + "-" + std::to_string(m.jamming->end);
    case Task::Anti_CJ:
    case Task::Anti_RJ:
    case Task::CJS:
    case Task::RJS: return reasoning_key(task, m);
  }
  throw config_error("unknown task");
}

/// Token ids of an answer string, terminated by <eos>. Label answers are one
/// token; numbers are spelled character by character followed by a unit token.
inline std::vector<int> tokenize_answer(Task task, std::string_view answer) {
  const Vocab& v = vocab();
  std::vector<int> out;
  if (!is_numeric(task)) {
    out.push_back(v.id(answer));
  } else {
    const auto sp = answer.find(' ');
    const std::string_view num = answer.substr(0, sp);
    for (char c : num) out.push_back(v.id(std::string_view(&c, 1)));
    if (sp != std::string_view::npos) out.push_back(v.id(answer.substr(sp + 1)));
  }
  out.push_back(Vocab::kEos);
  return out;
}

/// Inverse of tokenize_answer (stops at <eos>).
inline std::string detokenize(const std::vector<int>& ids) {
  const Vocab& v = vocab();
  std::string s;
  bool prev_char = false;
  for (int id : ids) {
    if (id == Vocab::kEos) break;
    const std::string& t = v.token(id);
    const bool is_char = t.size() == 1 && (std::isdigit(static_cast<unsigned char>(t[0])) || t == "." || t == "-");
    if (!s.empty() && !(is_char && prev_char)) s += ' ';
    s += t;
    prev_char = is_char;
  }
  return s;
}

/// Keyword-only question encoding fed to the answer head.
inline std::vector<int> question_tokens(Task task) {
  auto ids = [](std::initializer_list<const char*> ws) {
    std::vector<int> out;
    for (const char* w : ws) out.push_back(vocab().id(w));
    return out;
  };
  switch (task) {
    case Task::MOD: return ids({"modulation", "type"});
    case Task::PE_DC: return ids({"radar", "duty", "cycle"});
    case Task::PE_PRF: return ids({"radar", "pulse", "repetition", "frequency"});
    case Task::PE_BW: return ids({"radar", "bandwidth"});
    case Task::PE_PW: return ids({"radar", "pulse", "width"});
    case Task::PE_NoP: return ids({"radar", "pulse", "number"});
    case Task::PI: return ids({"communication", "protocol", "type"});
    case Task::RJR: return ids({"radar", "jamming", "type"});
    case Task::CJR: return ids({"communication", "jamming", "type"});
    case Task::SD: return ids({"jamming", "segment"});
    case Task::Anti_CJ: return ids({"communication", "jamming", "counter", "strategy"});
    case Task::Anti_RJ: return ids({"radar", "jamming", "counter", "strategy"});
    case Task::CJS: return ids({"communication", "jamming", "strategy"});
    case Task::RJS: return ids({"radar", "jamming", "strategy"});
  }
  throw config_error("unknown task");
}

}  // namespace embench
