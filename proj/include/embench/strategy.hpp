#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "embench/error.hpp"
#include "embench/hash.hpp"
#include "embench/labels.hpp"
#include "embench/tasks.hpp"

namespace embench {

struct Strategy {
  std::string text;
  std::vector<std::string> keywords;

  bool operator==(const Strategy&) const = default;
};

/// Section name -> (key label -> reference strategy).
using StrategyTable = std::map<std::string, std::map<std::string, Strategy>>;

inline std::string strategy_section(Task task) {
  switch (task) {
    case Task::Anti_CJ: return "anti_comm_jamming";
    case Task::Anti_RJ: return "anti_radar_jamming";
    case Task::CJS: return "comm_jamming_strategy";
    case Task::RJS: return "radar_jamming_strategy";
    default: throw config_error("no strategy section for task " + std::string(task_name(task)));
  }
}

inline const StrategyTable& builtin_strategy_table() {
  static const StrategyTable t = [] {
    StrategyTable s;
    auto& ac = s["anti_comm_jamming"];
    ac["single tone"] = {"Estimate the tone frequency and apply adaptive notch filtering at that frequency; spread-spectrum processing gain suppresses the residual.", {"notch filtering"}};
    ac["multitone"] = {"Locate each tone in the spectrum and cascade notch filtering across the tone set, or hop the carrier away from the occupied tones.", {"notch filtering", "hop"}};
    ac["narrowband noise"] = {"Move the carrier out of the jammed band with frequency hopping and excise the noisy subband with a transform-domain filter.", {"frequency hopping", "excise"}};
    ac["broadband noise"] = {"Increase processing gain with direct-sequence spreading, lower the code rate and use a directional antenna to null the jammer.", {"spreading", "null"}};
    ac["swept tone"] = {"Track the sweep and apply a time-varying notch filter; interleaving and forward error correction recover the symbols hit by each sweep pass.", {"notch", "interleaving"}};
    ac["pulsed noise"] = {"Blank the receiver during jamming pulses and rely on interleaving with erasure decoding to fill the blanked symbols.", {"blank", "erasure"}};
    ac["comb"] = {"Choose hop frequencies between the comb teeth, or filter the periodic comb with a comb notch filter matched to the tooth spacing.", {"comb notch", "hop"}};
    ac["follower"] = {"Hop faster than the follower's reaction time so each dwell ends before the repeat arrives; authenticate packets to reject replays.", {"hop faster", "authenticate"}};
    ac["modulated carrier"] = {"Separate the interfering carrier by its modulation signature with an interference cancellation receiver and steer an antenna null toward it.", {"cancellation", "null"}};

    auto& ar = s["anti_radar_jamming"];
    ar["spot noise"] = {"Perform frequency agility to move the carrier outside the spot band and use sidelobe cancellation against the noise source.", {"frequency agility", "sidelobe"}};
    ar["barrage noise"] = {"Raise pulse-compression gain, use sidelobe blanking and adaptive array nulling toward the jammer direction, and track the jammer with home-on-jam.", {"pulse compression", "nulling", "home-on-jam"}};
    ar["swept noise"] = {"Schedule transmissions when the sweep is away from the operating band and combine frequency agility with constant false alarm rate detection.", {"frequency agility", "constant false alarm rate"}};
    ar["comb spectrum"] = {"Place the carrier between the comb lines with frequency agility and suppress the lines with notch filters before pulse compression.", {"frequency agility", "notch"}};
    ar["single false target"] = {"Check target consistency across pulses with a randomized pulse repetition interval; the repeater lags and its range jitters while the true echo does not.", {"pulse repetition interval", "consistency"}};
    ar["dense false targets"] = {"Use pulse diversity with intra-pulse code agility so stored replicas no longer match, and cluster detections by kinematic consistency.", {"code agility", "kinematic"}};
    ar["range gate pull-off"] = {"Track the leading edge of the return and run a guard gate that rejects the walking-off echo; cross-check range rate against Doppler.", {"leading edge", "Doppler"}};
    ar["velocity deception"] = {"Compare range rate derived from range tracking with the measured Doppler; a mismatch exposes the shifted repeat.", {"range rate", "Doppler"}};
    ar["interrupted sampling repeater"] = {"Exploit the gaps of the repeater with time-frequency analysis, reconstruct the uncorrupted slices and apply a band-pass filter in the fractional Fourier domain.", {"time-frequency", "fractional Fourier"}};
    ar["smart noise"] = {"Use waveform diversity with pulse-to-pulse coding so the noise-modulated replica decorrelates, and apply adaptive beamforming.", {"waveform diversity", "beamforming"}};
    ar["narrowband CW"] = {"Reject the continuous wave line with a notch filter and move the radar band with frequency agility.", {"notch", "frequency agility"}};
    ar["chirp slice"] = {"Detect the repeated chirp slices by their periodic time-frequency pattern and excise them before matched filtering; change the chirp slope from pulse to pulse.", {"time-frequency", "chirp slope"}};

    auto& cs = s["comm_jamming_strategy"];
    const std::map<std::string, Strategy> cjs = {
        {"BPSK", {"Use a phase-coherent tone or a matched BPSK carrier at the symbol rate; concentrate power at the carrier to break the binary phase decision.", {"carrier", "phase"}}},
        {"QPSK", {"Use a matched QPSK modulated carrier at the victim symbol rate with a small frequency offset to rotate the constellation.", {"modulated carrier", "symbol rate"}}},
        {"8PSK", {"Use narrowband noise over the main lobe; the close phase spacing of 8PSK makes it sensitive to phase noise injection.", {"narrowband noise", "phase"}}},
        {"16QAM", {"Use narrowband noise matched to the occupied bandwidth; amplitude and phase errors of moderate power collapse the dense grid.", {"narrowband noise", "amplitude"}}},
        {"64QAM", {"Use low-power narrowband noise in band; the dense 64QAM grid fails at modest jammer-to-signal ratio.", {"narrowband noise", "low-power"}}},
        {"256QAM", {"Use low-power broadband noise in band; 256QAM needs high SNR so even weak noise degrades it.", {"broadband noise", "low-power"}}},
        {"GFSK", {"Use a follower jammer or a pair of tones at the two deviation frequencies to corrupt the frequency decision.", {"follower", "tones"}}},
        {"CPFSK", {"Place tones at the mark and space frequencies or use a follower jammer to corrupt the frequency decision.", {"tones", "follower"}}},
        {"PAM4", {"Use an amplitude-modulated carrier or narrowband noise; amplitude levels are the decision variable of PAM4.", {"amplitude", "narrowband noise"}}},
        {"AM-DSB", {"Use a strong tone at the carrier to capture the envelope detector, or narrowband noise across the message band.", {"tone", "envelope"}}},
        {"AM-SSB", {"Use narrowband noise across the sideband; there is no carrier to capture.", {"narrowband noise", "sideband"}}},
        {"WBFM", {"Use a swept tone or a stronger FM carrier to trigger the capture effect of the discriminator.", {"capture effect", "swept tone"}}},
        {"OOK", {"Use pulsed noise during the off intervals so the energy detector sees false marks.", {"pulsed noise", "energy detector"}}},
        {"4FSK", {"Place a multitone jammer on the four tone frequencies, or use a follower jammer.", {"multitone", "follower"}}},
    };
    cs = cjs;

    auto& rs = s["radar_jamming_strategy"];
    rs["LFM"] = {"Use interrupted sampling repeater jamming or chirp slice jamming matched to the chirp rate; range-Doppler coupling of LFM turns frequency-shifted repeats into false targets.", {"interrupted sampling", "chirp", "range-Doppler coupling"}};
    rs["Barker"] = {"Use a digital radio frequency memory repeater to replay the coded pulse; the short Barker code offers little processing gain against noise.", {"repeater", "processing gain"}};
    rs["Frank"] = {"Use a digital radio frequency memory repeater with Doppler offset; polyphase codes are Doppler-sensitive so a shifted replica produces displaced false targets.", {"repeater", "Doppler"}};
    rs["Stepped-Frequency"] = {"Use comb spectrum jamming on the frequency steps, or a repeater that follows the step sequence.", {"comb spectrum", "step"}};
    rs["Rectangular"] = {"Use range gate pull-off and spot noise; an uncoded pulse has no pulse-compression gain.", {"range gate pull-off", "spot noise"}};
    rs["Noise"] = {"Use barrage noise over the full band; a noise waveform cannot be replayed coherently.", {"barrage noise"}};
    rs["Sinusoid"] = {"Use velocity deception with a Doppler-shifted repeat, or narrowband noise on the continuous wave line.", {"velocity deception", "Doppler"}};
    return s;
  }();
  return t;
}

inline nlohmann::json to_json(const StrategyTable& t) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [sec, entries] : t)
    for (const auto& [k, s] : entries) j[sec][k] = {{"text", s.text}, {"keywords", s.keywords}};
  return j;
}

inline StrategyTable strategy_table_from_json(const nlohmann::json& j) {
  StrategyTable t;
  try {
    for (const auto& [sec, entries] : j.items())
      for (const auto& [k, v] : entries.items())
        t[sec][k] = {v.at("text").get<std::string>(), v.at("keywords").get<std::vector<std::string>>()};
  } catch (const nlohmann::json::exception& e) {
    throw data_error(std::string("malformed strategy table: ") + e.what());
  }
  return t;
}

inline StrategyTable load_strategy_table(const std::filesystem::path& p) {
  try {
    return strategy_table_from_json(nlohmann::json::parse(read_file(p)));
  } catch (const nlohmann::json::parse_error& e) {
    throw data_error("strategy table is not JSON: " + std::string(e.what()));
  }
}

inline const Strategy& lookup_strategy(const StrategyTable& t, Task task, const std::string& key) {
  if (key.empty()) throw config_error("empty strategy key");
  const auto sec = t.find(strategy_section(task));
  if (sec == t.end()) throw data_error("strategy table has no section " + strategy_section(task));
  const auto it = sec->second.find(key);
  if (it == sec->second.end()) {
    throw config_error("no strategy for '" + key + "' in " + strategy_section(task));
  }
  return it->second;
}

inline const Strategy& lookup_strategy(Task task, const std::string& key) {
  return lookup_strategy(builtin_strategy_table(), task, key);
}

}  // namespace embench
