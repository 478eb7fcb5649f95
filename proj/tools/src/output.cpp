#include "output.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "config.hpp"

#ifndef POLARONLAB_VERSION
#define POLARONLAB_VERSION "0.0.0"
#endif

namespace polaronlab::cli {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  }
  return os.str();
}

std::string utc_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (end != epoch && *end == '\0' && v >= 0) t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

OutputDir::OutputDir(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec || !fs::is_directory(dir_)) {
    throw ConfigError("cannot create output directory " + dir_.string());
  }
}

void OutputDir::write(const std::string& name, const std::function<void(std::ostream&)>& fn) {
  std::ostringstream buf;
  fn(buf);
  const std::string bytes = buf.str();
  const fs::path p = dir_ / name;
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << bytes;
  out.close();
  if (!out) throw std::runtime_error("cannot write " + p.string());
  names_.push_back(name);
  digests_.push_back(sha256_hex(bytes));
  sizes_.push_back(bytes.size());
}

void OutputDir::write_json(const std::string& name, const nlohmann::json& j) {
  write(name, [&](std::ostream& os) { os << dump_json(j); });
}

void OutputDir::write_manifest(const std::string& command, const nlohmann::json& resolved,
                               const std::string& started) const {
  nlohmann::json m;
  m["toolkit"] = "polaronlab";
  m["version"] = POLARONLAB_VERSION;
  m["command"] = command;
  m["config_hash"] = "sha256:" + sha256_hex(resolved.dump());
  m["invocation"] = resolved;
  m["started_utc"] = started;
  m["finished_utc"] = utc_timestamp();
  nlohmann::json files = nlohmann::json::array();
  for (std::size_t i = 0; i < names_.size(); ++i) {
    files.push_back({{"name", names_[i]}, {"bytes", sizes_[i]}, {"sha256", digests_[i]}});
  }
  m["files"] = files;
  std::ofstream out(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
  out << dump_json(m);
  if (!out) throw std::runtime_error("cannot write manifest in " + dir_.string());
}

}  // namespace polaronlab::cli
