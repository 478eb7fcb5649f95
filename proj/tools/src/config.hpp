#pragma once

// Strict JSON scenario configs. Every key read is recorded (with its default
// filled in) in a resolved document; keys never read are rejected.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "polaronlab/units.hpp"

namespace polaronlab::cli {

using nlohmann::json;

class ConfigError : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

class Config;

/// View of one JSON object inside a config.
class Section {
 public:
  double number(const std::string& key, double fallback);
  double number(const std::string& key);
  double positive(const std::string& key, double fallback);
  double non_negative(const std::string& key, double fallback);
  std::size_t count(const std::string& key, std::size_t fallback);
  bool flag(const std::string& key, bool fallback);
  std::string choice(const std::string& key, const std::string& fallback,
                     const std::vector<std::string>& allowed);
  std::optional<std::string> text(const std::string& key);
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback);
  bool has(const std::string& key) const;
  bool has_object(const std::string& key) const;
  Section child(const std::string& key);
  const std::string& path() const { return path_; }

 private:
  friend class Config;
  Section(Config* owner, const json* node, std::string path);
  const json* lookup(const std::string& key);
  void record(const std::string& key, const json& value);
  std::string where(const std::string& key) const;

  Config* owner_;
  const json* node_;  // null when the section is absent
  std::string path_;
};

class Config {
 public:
  /// Empty config: every value takes its default.
  Config();
  static Config parse(const std::string& text);
  static Config load(const std::string& file);

  Section root();
  /// Throws ConfigError naming every key that was never read.
  void finish() const;
  /// Canonical serialization of the values actually used.
  const json& resolved() const { return resolved_; }

 private:
  friend class Section;
  json input_;
  json resolved_;
  std::set<std::string> consumed_;
};

/// Linear grid helper for {"start":..,"stop":..,"count":..} objects or plain
/// lists.
std::vector<double> grid(Section s, const std::string& key, const std::vector<double>& fallback);

std::vector<double> linspace(double start, double stop, std::size_t n);

}  // namespace polaronlab::cli
