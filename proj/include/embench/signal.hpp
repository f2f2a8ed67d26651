#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "embench/error.hpp"

namespace embench {

using cplx = std::complex<double>;

inline constexpr double kSampleRateHz = 20e6;
inline constexpr std::size_t kWindowLength = 1024;

/// Complex baseband samples plus their sample rate. Non-empty and finite by
/// construction; immutable afterwards.
class IqSignal {
 public:
  IqSignal(std::vector<cplx> samples, double sample_rate_hz = kSampleRateHz)
      : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
    if (samples_.empty()) throw data_error("empty signal");
    if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
      throw config_error("sample rate must be positive");
    }
    for (const cplx& s : samples_) {
      if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
        throw data_error("signal contains non-finite samples");
      }
    }
  }

  std::span<const cplx> samples() const noexcept { return samples_; }
  const cplx& operator[](std::size_t i) const { return samples_[i]; }
  std::size_t size() const noexcept { return samples_.size(); }
  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  double duration_s() const noexcept { return static_cast<double>(samples_.size()) / sample_rate_hz_; }

  bool operator==(const IqSignal&) const = default;

 private:
  std::vector<cplx> samples_;
  double sample_rate_hz_;
};

/// Power per DFT bin, DC-centred: bin k holds frequency (k - N/2) * bin_width_hz.
struct Spectrum {
  std::vector<double> bins;
  double bin_width_hz = 0.0;

  std::size_t center_bin() const noexcept { return bins.size() / 2; }
  double frequency_hz(std::size_t k) const noexcept {
    return (static_cast<double>(k) - static_cast<double>(center_bin())) * bin_width_hz;
  }
  double total() const noexcept {
    double s = 0.0;
    for (double b : bins) s += b;
    return s;
  }
};

inline double mean_power(std::span<const cplx> samples) {
  if (samples.empty()) throw data_error("empty signal");
  double acc = 0.0;
  for (const cplx& s : samples) acc += std::norm(s);
  return acc / static_cast<double>(samples.size());
}

inline double mean_power(const IqSignal& signal) { return mean_power(signal.samples()); }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

/// SNR of `noisy` taking `noisy - clean` as the noise.
inline double measured_snr_db(const IqSignal& clean, const IqSignal& noisy) {
  if (clean.size() != noisy.size()) throw data_error("measured_snr_db: length mismatch");
  double noise = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) noise += std::norm(noisy[i] - clean[i]);
  noise /= static_cast<double>(clean.size());
  if (noise == 0.0) throw data_error("infinite SNR");
  return linear_to_db(mean_power(clean) / noise);
}

inline IqSignal scale(const IqSignal& signal, double gain) {
  std::vector<cplx> out(signal.samples().begin(), signal.samples().end());
  for (cplx& s : out) s *= gain;
  return IqSignal(std::move(out), signal.sample_rate_hz());
}

inline IqSignal normalize_power(const IqSignal& signal, double target_power) {
  if (!(target_power > 0.0)) throw config_error("normalize_power: target power must be positive");
  const double p = mean_power(signal);
  if (p == 0.0) throw data_error("normalize_power: zero-power signal");
  return scale(signal, std::sqrt(target_power / p));
}

/// Rectangular-window periodogram. bins[k] = |X_k|^2 / N^2, so the bin sum
/// equals the time-domain mean power (Parseval with unit constant).
inline Spectrum periodogram(std::span<const cplx> samples, double sample_rate_hz) {
  const std::size_t n = samples.size();
  if (n < 2) throw data_error("periodogram needs at least 2 samples");
  std::vector<cplx> in(samples.begin(), samples.end());
  std::vector<cplx> out;
  Eigen::FFT<double> fft;
  fft.fwd(out, in);
  Spectrum spec;
  spec.bin_width_hz = sample_rate_hz / static_cast<double>(n);
  spec.bins.resize(n);
  const double norm = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k < n; ++k) {
    // shifted index k holds FFT bin (k - half) mod n
    const std::size_t src = (k + n - half) % n;
    spec.bins[k] = std::norm(out[src]) * norm;
  }
  return spec;
}

inline Spectrum periodogram(const IqSignal& signal) {
  return periodogram(signal.samples(), signal.sample_rate_hz());
}

/// Width of the smallest DC-centred band holding `fraction` of the total power.
/// Returns 0 for an all-zero spectrum.
inline double occupied_bandwidth(const Spectrum& spec, double fraction = 0.99) {
  const double total = spec.total();
  if (total <= 0.0) return 0.0;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(spec.bins.size());
  const std::ptrdiff_t c = static_cast<std::ptrdiff_t>(spec.center_bin());
  double acc = spec.bins[static_cast<std::size_t>(c)];
  std::ptrdiff_t h = 0;
  while (acc < fraction * total && (c - h > 0 || c + h + 1 < n)) {
    ++h;
    if (c - h >= 0) acc += spec.bins[static_cast<std::size_t>(c - h)];
    if (c + h < n) acc += spec.bins[static_cast<std::size_t>(c + h)];
  }
  const std::ptrdiff_t width = std::min<std::ptrdiff_t>(2 * h + 1, n);
  return static_cast<double>(width) * spec.bin_width_hz;
}

// ---------------------------------------------------------------------------
// Binary IQ files: little-endian float32, interleaved I,Q,I,Q...

inline void write_iq(const std::filesystem::path& path, const IqSignal& signal) {
  std::vector<unsigned char> bytes(signal.size() * 8);
  auto put = [&](std::size_t offset, float v) {
    auto u = std::bit_cast<std::uint32_t>(v);
    for (int b = 0; b < 4; ++b) bytes[offset + b] = static_cast<unsigned char>(u >> (8 * b));
  };
  for (std::size_t i = 0; i < signal.size(); ++i) {
    put(8 * i, static_cast<float>(signal[i].real()));
    put(8 * i + 4, static_cast<float>(signal[i].imag()));
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw data_error("cannot open for writing: " + path.string());
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw data_error("write failed: " + path.string());
}

inline IqSignal read_iq(const std::filesystem::path& path, double sample_rate_hz = kSampleRateHz) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw data_error("cannot open IQ file: " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (bytes.empty() || bytes.size() % 8 != 0) {
    throw data_error("IQ file size is not a positive multiple of 8 bytes: " + path.string());
  }
  auto get = [&](std::size_t offset) {
    std::uint32_t u = 0;
    for (int b = 0; b < 4; ++b) u |= static_cast<std::uint32_t>(bytes[offset + b]) << (8 * b);
    return static_cast<double>(std::bit_cast<float>(u));
  };
  std::vector<cplx> samples(bytes.size() / 8);
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = {get(8 * i), get(8 * i + 4)};
  return IqSignal(std::move(samples), sample_rate_hz);
}

/// Rounds every sample through float32, i.e. what a write_iq/read_iq cycle yields.
inline IqSignal quantize_f32(const IqSignal& signal) {
  std::vector<cplx> out(signal.size());
  for (std::size_t i = 0; i < signal.size(); ++i) {
    out[i] = {static_cast<double>(static_cast<float>(signal[i].real())),
              static_cast<double>(static_cast<float>(signal[i].imag()))};
  }
  return IqSignal(std::move(out), signal.sample_rate_hz());
}

}  // namespace embench
