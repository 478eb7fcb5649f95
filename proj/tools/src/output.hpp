#pragma once

// Output directory bookkeeping: every file written goes through OutputDir so
// the run manifest can list it with its size and digest.

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace polaronlab::cli {

std::string sha256_hex(const std::string& bytes);

/// UTC timestamp in ISO-8601; honours SOURCE_DATE_EPOCH for reproducible runs.
std::string utc_timestamp();

class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path dir);

  const std::filesystem::path& path() const { return dir_; }

  /// Writes a file produced by fn; the name is relative to the directory.
  void write(const std::string& name, const std::function<void(std::ostream&)>& fn);
  void write_json(const std::string& name, const nlohmann::json& j);

  /// manifest.json: version, command, config hash, timestamps and files.
  void write_manifest(const std::string& command, const nlohmann::json& resolved_config,
                      const std::string& started) const;

  const std::vector<std::string>& files() const { return names_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> names_;
  std::vector<std::string> digests_;
  std::vector<std::size_t> sizes_;
};

/// Stable JSON text: sorted keys, two-space indent, trailing newline.
std::string dump_json(const nlohmann::json& j);

}  // namespace polaronlab::cli
