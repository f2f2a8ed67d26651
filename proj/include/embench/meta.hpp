#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "embench/error.hpp"

namespace embench {

/// Ground-truth pulse parameters of a radar emission.
struct PulseParams {
  double bandwidth_hz = 0.0;
  bool bandwidth_valid = false;  // true when bandwidth is a generator parameter (LFM, stepped)
  double pulse_width_s = 0.0;
  double prf_hz = 0.0;
  bool prf_valid = false;
  int num_pulses = 0;
  double duty_cycle = 0.0;

  bool operator==(const PulseParams&) const = default;
};

struct JamInfo {
  std::string domain;  // "radar" | "comm"
  std::string kind;
  double jsr_db = 0.0;
  std::size_t start = 0;
  std::size_t end = 0;  // half-open

  bool operator==(const JamInfo&) const = default;
};

/// Generation ground truth attached to every signal.
struct SignalMeta {
  std::string family;    // "radar" | "comm"
  std::string waveform;  // radar kind name or modulation name
  std::optional<std::string> protocol;
  double sample_rate_hz = 0.0;
  std::size_t length = 0;
  std::optional<PulseParams> pulse;
  std::optional<double> symbol_rate_hz;
  std::optional<double> rolloff;
  std::uint64_t seed = 0;
  std::optional<double> snr_db;
  std::optional<JamInfo> jamming;

  bool operator==(const SignalMeta&) const = default;
};

inline void to_json(nlohmann::json& j, const PulseParams& p) {
  j = nlohmann::json{{"bandwidth_hz", p.bandwidth_hz},   {"bandwidth_valid", p.bandwidth_valid},
                     {"pulse_width_s", p.pulse_width_s}, {"prf_hz", p.prf_hz},
                     {"prf_valid", p.prf_valid},         {"num_pulses", p.num_pulses},
                     {"duty_cycle", p.duty_cycle}};
}

inline void from_json(const nlohmann::json& j, PulseParams& p) {
  j.at("bandwidth_hz").get_to(p.bandwidth_hz);
  j.at("bandwidth_valid").get_to(p.bandwidth_valid);
  j.at("pulse_width_s").get_to(p.pulse_width_s);
  j.at("prf_hz").get_to(p.prf_hz);
  j.at("prf_valid").get_to(p.prf_valid);
  j.at("num_pulses").get_to(p.num_pulses);
  j.at("duty_cycle").get_to(p.duty_cycle);
}

inline void to_json(nlohmann::json& j, const JamInfo& m) {
  j = nlohmann::json{{"domain", m.domain}, {"kind", m.kind}, {"jsr_db", m.jsr_db},
                     {"start", m.start},   {"end", m.end}};
}

inline void from_json(const nlohmann::json& j, JamInfo& m) {
  j.at("domain").get_to(m.domain);
  j.at("kind").get_to(m.kind);
  j.at("jsr_db").get_to(m.jsr_db);
  j.at("start").get_to(m.start);
  j.at("end").get_to(m.end);
}

inline void to_json(nlohmann::json& j, const SignalMeta& m) {
  j = nlohmann::json{{"family", m.family},
                     {"waveform", m.waveform},
                     {"sample_rate_hz", m.sample_rate_hz},
                     {"length", m.length},
                     {"seed", m.seed}};
  if (m.protocol) j["protocol"] = *m.protocol;
  if (m.pulse) j["pulse"] = *m.pulse;
  if (m.symbol_rate_hz) j["symbol_rate_hz"] = *m.symbol_rate_hz;
  if (m.rolloff) j["rolloff"] = *m.rolloff;
  if (m.snr_db) j["snr_db"] = *m.snr_db;
  if (m.jamming) j["jamming"] = *m.jamming;
}

inline void from_json(const nlohmann::json& j, SignalMeta& m) {
  try {
    j.at("family").get_to(m.family);
    j.at("waveform").get_to(m.waveform);
    j.at("sample_rate_hz").get_to(m.sample_rate_hz);
    j.at("length").get_to(m.length);
    j.at("seed").get_to(m.seed);
    m.protocol = j.contains("protocol") ? std::optional(j["protocol"].get<std::string>()) : std::nullopt;
    m.pulse = j.contains("pulse") ? std::optional(j["pulse"].get<PulseParams>()) : std::nullopt;
    m.symbol_rate_hz =
        j.contains("symbol_rate_hz") ? std::optional(j["symbol_rate_hz"].get<double>()) : std::nullopt;
    m.rolloff = j.contains("rolloff") ? std::optional(j["rolloff"].get<double>()) : std::nullopt;
    m.snr_db = j.contains("snr_db") ? std::optional(j["snr_db"].get<double>()) : std::nullopt;
    m.jamming = j.contains("jamming") ? std::optional(j["jamming"].get<JamInfo>()) : std::nullopt;
  } catch (const nlohmann::json::exception& e) {
    throw data_error(std::string("malformed signal meta: ") + e.what());
  }
}

}  // namespace embench
