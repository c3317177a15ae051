#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fqc/scan.hpp"

namespace fqc::cli {

/// Malformed or missing configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigValue {
  std::string text;
  bool quoted = false;
  bool operator==(const ConfigValue&) const = default;
};

/// Flat `key = value` file. `[section]` headers prefix the keys that follow
/// with `section.`; `#` starts a comment outside quotes.
class Config {
 public:
  static Config parse(std::string_view text);
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  long long get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;

  std::string string_or(const std::string& key, const std::string& fallback) const;
  double double_or(const std::string& key, double fallback) const;
  long long int_or(const std::string& key, long long fallback) const;
  bool bool_or(const std::string& key, bool fallback) const;

  void set(const std::string& key, ConfigValue v) { entries_[key] = std::move(v); }
  const std::map<std::string, ConfigValue>& entries() const { return entries_; }

  /// Canonical text: sorted dotted keys, one per line.
  std::string serialize() const;
  bool operator==(const Config&) const = default;

  /// Keys no reader has asked about.
  std::vector<std::string> unknown_keys(const std::vector<std::string>& known_prefixes) const;

 private:
  const ConfigValue& require(const std::string& key) const;
  std::map<std::string, ConfigValue> entries_;
};

std::pair<std::int64_t, std::int64_t> parse_fraction(std::string_view s);
Boundary parse_boundary(std::string_view s);
std::string format_boundary(const Boundary& b);

ModelSpec model_from_config(const Config& c);
LatticeConfig lattice_from_config(const Config& c);
DriveConfig drive_from_config(const Config& c);
ScanConfig scan_from_config(const Config& c);

/// FNV-1a 64 of the canonical serialization, as 16 hex digits.
std::string config_digest(const Config& c);

}  // namespace fqc::cli
