#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "satmdp/oracle.hpp"

namespace satmdp::cli {

using json = nlohmann::json;

// Process exit codes.
enum Exit : int { kOk = 0, kVerifyFailed = 1, kUsage = 2, kRefused = 3 };

// Bad flags, unreadable files or malformed config.
class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string out;
  bool timing = false;
  std::vector<std::string> argv;
};

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// defaults overlaid with the file at `path` (if any). Keys absent from the
// defaults are rejected so that typos do not silently fall back.
json load_config(const json& defaults, const std::string& path);

// FNV-1a over the compact dump of the effective config.
std::string config_hash(const json& config);

json counters_json(const QueryCounters& c);

class Report {
 public:
  Report(std::string command, const CommonOptions& opts, json config, std::uint64_t seed);
  json& outcome() { return outcome_; }
  void set_pass(bool pass) { pass_ = pass; }
  bool pass() const { return pass_; }
  // Serialised report; wallclock only when timing was requested.
  std::string dump() const;
  // Writes to `path` when non-empty, else stdout.
  void emit(const std::string& path) const;

 private:
  std::string command_;
  const CommonOptions* opts_;
  json config_;
  std::uint64_t seed_;
  json outcome_ = json::object();
  bool pass_ = true;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace satmdp::cli
