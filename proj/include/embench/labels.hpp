#pragma once

#include <array>
#include <string>
#include <string_view>

#include "embench/error.hpp"

namespace embench {

enum class RadarKind { LFM, Barker, Frank, SteppedFreq, Rectangular, NoiseWaveform, Sinusoid };

inline constexpr std::array<RadarKind, 7> kRadarKinds = {
    RadarKind::LFM,         RadarKind::Barker,        RadarKind::Frank,   RadarKind::SteppedFreq,
    RadarKind::Rectangular, RadarKind::NoiseWaveform, RadarKind::Sinusoid};

inline constexpr std::string_view radar_kind_name(RadarKind k) {
  switch (k) {
    case RadarKind::LFM: return "LFM";
    case RadarKind::Barker: return "Barker";
    case RadarKind::Frank: return "Frank";
    case RadarKind::SteppedFreq: return "Stepped-Frequency";
    case RadarKind::Rectangular: return "Rectangular";
    case RadarKind::NoiseWaveform: return "Noise";
    case RadarKind::Sinusoid: return "Sinusoid";
  }
  return "?";
}

/// The 14-class modulation set.
enum class CommKind {
  BPSK, QPSK, PSK8, QAM16, QAM64, QAM256, GFSK, CPFSK, PAM4, AM_DSB, AM_SSB, WBFM, OOK, FSK4,
};

inline constexpr std::array<CommKind, 14> kCommKinds = {
    CommKind::BPSK,  CommKind::QPSK, CommKind::PSK8,   CommKind::QAM16,  CommKind::QAM64,
    CommKind::QAM256, CommKind::GFSK, CommKind::CPFSK, CommKind::PAM4,   CommKind::AM_DSB,
    CommKind::AM_SSB, CommKind::WBFM, CommKind::OOK,   CommKind::FSK4};

inline constexpr std::string_view comm_kind_name(CommKind k) {
  switch (k) {
    case CommKind::BPSK: return "BPSK";
    case CommKind::QPSK: return "QPSK";
    case CommKind::PSK8: return "8PSK";
    case CommKind::QAM16: return "16QAM";
    case CommKind::QAM64: return "64QAM";
    case CommKind::QAM256: return "256QAM";
    case CommKind::GFSK: return "GFSK";
    case CommKind::CPFSK: return "CPFSK";
    case CommKind::PAM4: return "PAM4";
    case CommKind::AM_DSB: return "AM-DSB";
    case CommKind::AM_SSB: return "AM-SSB";
    case CommKind::WBFM: return "WBFM";
    case CommKind::OOK: return "OOK";
    case CommKind::FSK4: return "4FSK";
  }
  return "?";
}

inline constexpr bool is_linear(CommKind k) {
  switch (k) {
    case CommKind::BPSK:
    case CommKind::QPSK:
    case CommKind::PSK8:
    case CommKind::QAM16:
    case CommKind::QAM64:
    case CommKind::QAM256:
    case CommKind::PAM4:
    case CommKind::OOK:
      return true;
    default:
      return false;
  }
}

inline constexpr bool is_analog(CommKind k) {
  return k == CommKind::AM_DSB || k == CommKind::AM_SSB || k == CommKind::WBFM;
}

enum class Protocol { BLE1M, BLE2M, ZigBee, ADSB, DSSS, QpskBurst, Qam16Burst, Fsk4Telemetry };

inline constexpr std::array<Protocol, 8> kProtocols = {
    Protocol::BLE1M,     Protocol::BLE2M,      Protocol::ZigBee,       Protocol::ADSB,
    Protocol::DSSS,      Protocol::QpskBurst,  Protocol::Qam16Burst,   Protocol::Fsk4Telemetry};

inline constexpr std::string_view protocol_name(Protocol p) {
  switch (p) {
    case Protocol::BLE1M: return "BLE-1M";
    case Protocol::BLE2M: return "BLE-2M";
    case Protocol::ZigBee: return "ZigBee-OQPSK";
    case Protocol::ADSB: return "ADS-B-PPM";
    case Protocol::DSSS: return "DSSS-BPSK";
    case Protocol::QpskBurst: return "QPSK-Burst";
    case Protocol::Qam16Burst: return "16QAM-Burst";
    case Protocol::Fsk4Telemetry: return "4FSK-Telemetry";
  }
  return "?";
}

enum class JamDomain { Radar, Comm };

/// 12 radar jamming kinds followed by 9 communication jamming kinds.
enum class JamKind {
  SpotNoise, BarrageNoise, SweptNoise, CombSpectrum, SingleFalseTarget, DenseFalseTargets,
  RangeGatePullOff, VelocityDeception, InterruptedSamplingRepeater, SmartNoise, NarrowbandCw,
  ChirpSlice,
  SingleTone, Multitone, NarrowbandNoise, BroadbandNoise, SweptTone, PulsedNoise, Comb, Follower,
  ModulatedCarrier,
};

inline constexpr std::array<JamKind, 12> kRadarJamKinds = {
    JamKind::SpotNoise,         JamKind::BarrageNoise,      JamKind::SweptNoise,
    JamKind::CombSpectrum,      JamKind::SingleFalseTarget, JamKind::DenseFalseTargets,
    JamKind::RangeGatePullOff,  JamKind::VelocityDeception, JamKind::InterruptedSamplingRepeater,
    JamKind::SmartNoise,        JamKind::NarrowbandCw,      JamKind::ChirpSlice};

inline constexpr std::array<JamKind, 9> kCommJamKinds = {
    JamKind::SingleTone, JamKind::Multitone,   JamKind::NarrowbandNoise,
    JamKind::BroadbandNoise, JamKind::SweptTone, JamKind::PulsedNoise,
    JamKind::Comb,       JamKind::Follower,    JamKind::ModulatedCarrier};

inline constexpr JamDomain jam_domain(JamKind k) {
  return static_cast<int>(k) <= static_cast<int>(JamKind::ChirpSlice) ? JamDomain::Radar : JamDomain::Comm;
}

inline constexpr std::string_view jam_domain_name(JamDomain d) {
  return d == JamDomain::Radar ? "radar" : "comm";
}

inline constexpr std::string_view jam_kind_name(JamKind k) {
  switch (k) {
    case JamKind::SpotNoise: return "spot noise";
    case JamKind::BarrageNoise: return "barrage noise";
    case JamKind::SweptNoise: return "swept noise";
    case JamKind::CombSpectrum: return "comb spectrum";
    case JamKind::SingleFalseTarget: return "single false target";
    case JamKind::DenseFalseTargets: return "dense false targets";
    case JamKind::RangeGatePullOff: return "range gate pull-off";
    case JamKind::VelocityDeception: return "velocity deception";
    case JamKind::InterruptedSamplingRepeater: return "interrupted sampling repeater";
    case JamKind::SmartNoise: return "smart noise";
    case JamKind::NarrowbandCw: return "narrowband CW";
    case JamKind::ChirpSlice: return "chirp slice";
    case JamKind::SingleTone: return "single tone";
    case JamKind::Multitone: return "multitone";
    case JamKind::NarrowbandNoise: return "narrowband noise";
    case JamKind::BroadbandNoise: return "broadband noise";
    case JamKind::SweptTone: return "swept tone";
    case JamKind::PulsedNoise: return "pulsed noise";
    case JamKind::Comb: return "comb";
    case JamKind::Follower: return "follower";
    case JamKind::ModulatedCarrier: return "modulated carrier";
  }
  return "?";
}

// Name lookups. All throw config errors on unknown names, including "none".

inline RadarKind parse_radar_kind(std::string_view s) {
  for (RadarKind k : kRadarKinds)
    if (radar_kind_name(k) == s) return k;
  throw config_error("unknown radar waveform kind: " + std::string(s));
}

inline CommKind parse_comm_kind(std::string_view s) {
  for (CommKind k : kCommKinds)
    if (comm_kind_name(k) == s) return k;
  throw config_error("unsupported modulation kind: " + std::string(s));
}

inline Protocol parse_protocol(std::string_view s) {
  for (Protocol p : kProtocols)
    if (protocol_name(p) == s) return p;
  throw config_error("unknown protocol: " + std::string(s));
}

inline JamKind parse_jam_kind(std::string_view s) {
  for (JamKind k : kRadarJamKinds)
    if (jam_kind_name(k) == s) return k;
  for (JamKind k : kCommJamKinds)
    if (jam_kind_name(k) == s) return k;
  throw config_error("unknown jamming kind: " + std::string(s));
}

}  // namespace embench
