#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "embench/error.hpp"
#include "embench/hash.hpp"

namespace embench {

/// Flat `[section]` / `key = value` configuration. Keys are addressed as
/// "section.key"; values are kept as text and converted on access.
class Config {
 public:
  Config() = default;

  static Config parse(const std::string& text) {
    boost::property_tree::ptree tree;
    std::istringstream is(text);
    try {
      boost::property_tree::ini_parser::read_ini(is, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw config_error(std::string("config parse error: ") + e.what());
    }
    Config c;
    for (const auto& [section, body] : tree) {
      if (body.empty()) {
        c.values_[section] = body.data();  // top-level key
        continue;
      }
      for (const auto& [key, leaf] : body) c.values_[section + "." + key] = leaf.data();
    }
    return c;
  }

  static Config load(const std::filesystem::path& p) {
    if (!std::filesystem::exists(p)) throw config_error("config file not found: " + p.string());
    return parse(read_file(p));
  }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  template <typename T>
  T get(const std::string& key, T fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if constexpr (std::is_same_v<T, std::string>) {
      return it->second;
    } else if constexpr (std::is_same_v<T, bool>) {
      const std::string& v = it->second;
      if (v == "true" || v == "1" || v == "yes") return true;
      if (v == "false" || v == "0" || v == "no") return false;
      throw config_error("config key " + key + ": expected a boolean, got '" + v + "'");
    } else {
      std::istringstream is(it->second);
      T v{};
      is >> v;
      if (is.fail() || !(is >> std::ws).eof()) {
        throw config_error("config key " + key + ": cannot parse '" + it->second + "'");
      }
      return v;
    }
  }

  /// Throws on the first key outside `allowed`.
  void require_known(const std::set<std::string>& allowed) const {
    for (const auto& [k, v] : values_) {
      if (!allowed.count(k)) throw config_error("unknown config key: " + k);
    }
  }

  /// Canonical text form, sections and keys sorted.
  std::string echo() const {
    std::map<std::string, std::map<std::string, std::string>> sections;
    for (const auto& [k, v] : values_) {
      const auto dot = k.find('.');
      if (dot == std::string::npos) {
        sections[""][k] = v;
      } else {
        sections[k.substr(0, dot)][k.substr(dot + 1)] = v;
      }
    }
    std::ostringstream os;
    for (const auto& [s, kv] : sections) {
      if (!s.empty()) os << "[" << s << "]\n";
      for (const auto& [k, v] : kv) os << k << " = " << v << "\n";
    }
    return os.str();
  }

  std::string hash() const { return sha256_hex(echo()); }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace embench
