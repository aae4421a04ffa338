#include "report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace satmdp::cli {

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CliError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw CliError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError("cannot write " + path.string());
  out << text;
  if (!out) throw CliError("write failed for " + path.string());
}

namespace {

void check_keys(const json& defaults, const json& user, const std::string& where) {
  if (!user.is_object()) throw CliError("config " + where + " must be an object");
  for (const auto& [key, value] : user.items()) {
    if (!defaults.contains(key)) throw CliError("unknown config key " + where + key);
    if (defaults[key].is_object() && value.is_object()) check_keys(defaults[key], value, where + key + ".");
  }
}

}  // namespace

json load_config(const json& defaults, const std::string& path) {
  json cfg = defaults;
  if (path.empty()) return cfg;
  const json user = read_json_file(path);
  check_keys(defaults, user, "");
  cfg.merge_patch(user);
  return cfg;
}

std::string config_hash(const json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json counters_json(const QueryCounters& c) {
  return {{"transitions", c.transitions}, {"rewards", c.rewards}, {"features", c.features}, {"total", c.total()}};
}

Report::Report(std::string command, const CommonOptions& opts, json config, std::uint64_t seed)
    : command_(std::move(command)),
      opts_(&opts),
      config_(std::move(config)),
      seed_(seed),
      start_(std::chrono::steady_clock::now()) {}

std::string Report::dump() const {
  json j;
  j["schema"] = "satmdp.report/1";
  j["command"] = command_;
  j["argv"] = opts_->argv;
  j["config"] = config_;
  j["config_hash"] = config_hash(config_);
  j["seed"] = seed_;
  j["pass"] = pass_;
  j["outcome"] = outcome_;
  if (opts_->timing)
    j["wallclock_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  return j.dump(2) + "\n";
}

void Report::emit(const std::string& path) const {
  const std::string text = dump();
  if (path.empty())
    std::cout << text << std::flush;
  else
    write_text_file(path, text);
}

}  // namespace satmdp::cli
