#pragma once

#include <array>
#include <string>
#include <utility>

#include "embench/rng.hpp"
#include "embench/strategy.hpp"
#include "embench/vocab.hpp"

namespace embench {

struct Dialogue {
  std::string instruction;
  std::string response;

  bool operator==(const Dialogue&) const = default;
};

namespace detail {

struct TaskPhrases {
  std::array<const char*, 3> questions;
  std::array<const char*, 3> responses;  // {} is replaced by the answer
};

inline const TaskPhrases& phrases(Task t) {
  static const std::array<TaskPhrases, 14> table = {{
      {{"What is the modulation type of this signal?", "Identify the modulation scheme of the signal.",
        "Which modulation does this IQ recording use?"},
       {"The modulation type is {}.", "This signal is {} modulated.", "Modulation: {}."}},
      {{"What is the duty cycle of this radar pulse train?", "Estimate the duty cycle of the radar signal.",
        "Determine the fraction of time the radar transmitter is on."},
       {"The duty cycle is {}.", "Estimated duty cycle: {}.", "The transmitter is on {} of the time."}},
      {{"What is the pulse repetition frequency of this radar signal?", "Estimate the PRF of the pulse train.",
        "Determine how often the radar pulses repeat."},
       {"The pulse repetition frequency is {}.", "Estimated PRF: {}.", "Pulses repeat at {}."}},
      {{"What is the bandwidth of this radar signal?", "Estimate the occupied bandwidth of the radar pulse.",
        "Determine the swept bandwidth of the chirp."},
       {"The bandwidth is {}.", "Estimated bandwidth: {}.", "The signal occupies {}."}},
      {{"What is the pulse width of this radar signal?", "Estimate the duration of each radar pulse.",
        "Determine the pulse width of the pulse train."},
       {"The pulse width is {}.", "Estimated pulse width: {}.", "Each pulse lasts {}."}},
      {{"How many pulses does this radar signal contain?", "Count the radar pulses in the observation window.",
        "Determine the number of pulses in the recording."},
       {"The signal contains {} pulses.", "Number of pulses: {}.", "I count {} pulses."}},
      {{"Which communication protocol does this signal follow?", "Identify the protocol of the transmission.",
        "Determine the protocol behind this burst."},
       {"The protocol is {}.", "This transmission follows {}.", "Protocol: {}."}},
      {{"What type of jamming affects this radar signal?", "Identify the radar jamming technique present.",
        "Classify the interference applied to the radar echo."},
       {"The radar jamming type is {}.", "This is {} jamming.", "Jamming type: {}."}},
      {{"What type of jamming affects this communication signal?",
        "Identify the communication jamming technique present.", "Classify the interference on this link."},
       {"The communication jamming type is {}.", "This is {} jamming.", "Jamming type: {}."}},
      {{"Which sample range of the signal is jammed?", "Locate the start and end samples of the interfered segment.",
        "Determine where the jamming segment begins and ends."},
       {"The jammed segment spans samples {}.", "Jamming occupies samples {}.", "Interfered segment: {}."}},
      {{"How should the receiver counter the jamming on this communication signal?",
        "Propose an anti-jamming strategy for this communication link.",
        "What countermeasure suits the interference on this link?"},
       {"{}", "{}", "{}"}},
      {{"How should the radar counter the jamming in this signal?",
        "Propose an anti-jamming strategy for this radar.", "What countermeasure suits the radar interference?"},
       {"{}", "{}", "{}"}},
      {{"How would you jam this communication signal?", "Propose a jamming strategy against this link.",
        "Which jamming technique is most effective against this transmission?"},
       {"{}", "{}", "{}"}},
      {{"How would you jam this radar?", "Propose a jamming strategy against this radar signal.",
        "Which jamming technique is most effective against this radar?"},
       {"{}", "{}", "{}"}},
  }};
  return table[static_cast<std::size_t>(t)];
}

inline std::string fill(std::string pattern, const std::string& value) {
  const auto p = pattern.find("{}");
  if (p != std::string::npos) pattern.replace(p, 2, value);
  return pattern;
}

}  // namespace detail

/// Single-turn instruction/response text for `task`. The instruction embeds
/// sampling rate and SNR; the response states the ground truth from meta.
inline Dialogue render_template(Task task, const SignalMeta& meta, Rng& rng,
                                const StrategyTable& table = builtin_strategy_table()) {
  if (!(meta.sample_rate_hz > 0.0)) throw data_error("meta is missing field: sample_rate_hz");
  if (!meta.snr_db) throw data_error("meta is missing field: snr_db");
  const auto& ph = detail::phrases(task);
  const std::size_t qi = rng.index(3);
  const std::size_t ri = rng.index(3);
  std::string header;
  switch (rng.index(3)) {
    case 0: header = "IQ signal sampled at " + format_sig4(meta.sample_rate_hz / 1e6) + " MHz, SNR " +
                     format_sig4(*meta.snr_db) + " dB. ";
      break;
    case 1: header = "Sampling rate: " + format_sig4(meta.sample_rate_hz / 1e6) + " MHz. SNR: " +
                     format_sig4(*meta.snr_db) + " dB. ";
      break;
    default: header = "The following " + std::to_string(meta.length) + "-sample recording was captured at " +
                      format_sig4(meta.sample_rate_hz / 1e6) + " MHz with an SNR of " + format_sig4(*meta.snr_db) +
                      " dB. ";
  }
  Dialogue d;
  d.instruction = header + ph.questions[qi];
  if (is_reasoning(task)) {
    const std::string key = reasoning_key(task, meta);
    d.response = lookup_strategy(table, task, key).text;
  } else {
    d.response = detail::fill(ph.responses[ri], answer_string(task, meta));
  }
  return d;
}

}  // namespace embench
