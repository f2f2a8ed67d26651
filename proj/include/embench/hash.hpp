#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include <openssl/evp.h>

#include "embench/error.hpp"

namespace embench {

/// Incremental SHA-256 over OpenSSL's EVP interface.
class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw data_error("sha256: digest init failed");
    }
  }

  Sha256& update(std::span<const unsigned char> bytes) {
    if (EVP_DigestUpdate(ctx_.get(), bytes.data(), bytes.size()) != 1) throw data_error("sha256: update failed");
    return *this;
  }

  Sha256& update(std::string_view s) {
    return update(std::span(reinterpret_cast<const unsigned char*>(s.data()), s.size()));
  }

  std::array<unsigned char, 32> digest() {
    std::array<unsigned char, 32> out{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), out.data(), &len) != 1 || len != 32) {
      throw data_error("sha256: finalize failed");
    }
    return out;
  }

  std::string hex_digest() { return to_hex(digest()); }

  static std::string to_hex(std::span<const unsigned char> d) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string s;
    s.reserve(d.size() * 2);
    for (unsigned char c : d) {
      s.push_back(kHex[c >> 4]);
      s.push_back(kHex[c & 15]);
    }
    return s;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

inline std::string sha256_hex(std::string_view s) { return Sha256().update(s).hex_digest(); }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw data_error("cannot open " + p.string());
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& p, std::string_view content) {
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os) throw data_error("cannot open for writing: " + p.string());
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!os) throw data_error("write failed: " + p.string());
}

inline std::string sha256_file(const std::filesystem::path& p) { return sha256_hex(read_file(p)); }

}  // namespace embench
