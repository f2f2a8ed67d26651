#pragma once

#include <bit>
#include <cstring>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "embench/hash.hpp"
#include "embench/model.hpp"

namespace embench {

static_assert(std::endian::native == std::endian::little, "checkpoint blobs assume a little-endian host");

inline constexpr char kCheckpointMagic[8] = {'E', 'M', 'B', 'C', 'K', 'P', 'T', '1'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

template <typename T>
void put(std::string& out, T v) {
  char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  out.append(b, sizeof(T));
}

template <typename T>
T take(const std::string& in, std::size_t& at) {
  if (at + sizeof(T) > in.size()) throw data_error("checkpoint truncated");
  T v;
  std::memcpy(&v, in.data() + at, sizeof(T));
  at += sizeof(T);
  return v;
}

}  // namespace detail

/// SHA-256 of the little-endian parameter blob.
inline std::string state_hash(const ModelState& st) {
  return Sha256()
      .update(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(st.params.data()),
                                            st.params.size() * sizeof(double)))
      .hex_digest();
}

/// Layout: magic, u32 version, u64 length + config JSON, u64 count + f64
/// parameters, 32-byte SHA-256 of everything before it.
inline std::string encode_checkpoint(const ModelState& st, const nlohmann::json& extra = nlohmann::json::object()) {
  nlohmann::json cfg = {{"model", st.config}, {"seed", st.seed}, {"extra", extra}};
  const std::string text = cfg.dump();
  std::string out(kCheckpointMagic, sizeof kCheckpointMagic);
  detail::put<std::uint32_t>(out, kCheckpointVersion);
  detail::put<std::uint64_t>(out, text.size());
  out += text;
  detail::put<std::uint64_t>(out, st.params.size());
  out.append(reinterpret_cast<const char*>(st.params.data()), st.params.size() * sizeof(double));
  const auto digest = Sha256().update(out).digest();
  out.append(reinterpret_cast<const char*>(digest.data()), digest.size());
  return out;
}

struct Checkpoint {
  ModelState state;
  nlohmann::json extra;
};

inline Checkpoint decode_checkpoint(const std::string& bytes) {
  if (bytes.size() < sizeof kCheckpointMagic + 32 || std::memcmp(bytes.data(), kCheckpointMagic, 8) != 0) {
    throw data_error("not a checkpoint file");
  }
  const std::string body = bytes.substr(0, bytes.size() - 32);
  const auto digest = Sha256().update(body).digest();
  if (std::memcmp(digest.data(), bytes.data() + body.size(), 32) != 0) throw data_error("checkpoint checksum mismatch");
  std::size_t at = sizeof kCheckpointMagic;
  if (detail::take<std::uint32_t>(body, at) != kCheckpointVersion) throw data_error("unsupported checkpoint version");
  const auto len = detail::take<std::uint64_t>(body, at);
  if (at + len > body.size()) throw data_error("checkpoint truncated");
  Checkpoint c;
  try {
    const auto cfg = nlohmann::json::parse(body.substr(at, len));
    c.state.config = cfg.at("model").get<ModelConfig>();
    c.state.seed = cfg.at("seed").get<std::uint64_t>();
    c.extra = cfg.at("extra");
  } catch (const nlohmann::json::exception& e) {
    throw data_error(std::string("checkpoint config: ") + e.what());
  }
  at += len;
  const auto n = detail::take<std::uint64_t>(body, at);
  if (n != c.state.layout().total || at + n * sizeof(double) != body.size()) {
    throw data_error("checkpoint parameter count does not match its config");
  }
  c.state.params.resize(n);
  std::memcpy(c.state.params.data(), body.data() + at, n * sizeof(double));
  return c;
}

inline void save_checkpoint(const std::filesystem::path& path, const ModelState& st,
                            const nlohmann::json& extra = nlohmann::json::object()) {
  write_file(path, encode_checkpoint(st, extra));
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) { return decode_checkpoint(read_file(path)); }

}  // namespace embench
