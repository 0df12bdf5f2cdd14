#ifndef STYVAR_PIPELINE_HPP
#define STYVAR_PIPELINE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace styvar::pipeline {

inline constexpr const char* kVersion = "0.1.0";

// INI-style key = value configuration grouped into [section] blocks.
// CLI flags are merged in as ordinary keys before a command runs, so the
// config hash covers the effective configuration.
struct Config {
  std::map<std::string, std::map<std::string, std::string>> sections;

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) const;
  std::string require(const std::string& section, const std::string& key) const;
  double get_num(const std::string& section, const std::string& key,
                 double fallback) const;
  long long get_int(const std::string& section, const std::string& key,
                    long long fallback) const;
  bool get_flag(const std::string& section, const std::string& key,
                bool fallback) const;
  void set(const std::string& section, const std::string& key,
           const std::string& value);
  std::uint64_t seed() const;  // [run] seed, default 1
  std::string hash() const;    // fnv-1a over sorted section.key=value lines
};

Config load_config(const std::string& path);

// Commands write their tables and a *_report.json (config hash + version
// embedded) into [io] out_dir and return a process exit code:
// 0 ok, 2 input error, 3 insufficient data, 4 internal invariant violation.
int cmd_features(const Config& config);
int cmd_trend(const Config& config);
int cmd_compare(const Config& config);
int cmd_similarity(const Config& config);
int cmd_traits(const Config& config);
int cmd_lexicon(const Config& config);
int cmd_synth(const Config& config);

int run_command(const std::string& name, const Config& config);

}  // namespace styvar::pipeline

#endif
