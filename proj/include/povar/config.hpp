#pragma once
// Flat key-value configuration files with [section] headers. Lines starting
// with '#' or ';' are comments, as is anything after ' #' on a value line.
// Parsing keeps section/key order so parse -> serialize -> parse is identity.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "povar/experiments.hpp"
#include "povar/model.hpp"

namespace povar {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct ConfigSection {
  std::string name;
  std::vector<ConfigEntry> entries;
  int line = 0;
};

struct Config {
  std::vector<ConfigSection> sections;

  const ConfigSection* find_section(const std::string& name) const;
  const ConfigEntry* find(const std::string& section, const std::string& key) const;
};

Config parse_config(const std::string& text);
Config load_config(const std::string& path);
std::string serialize_config(const Config& cfg);
bool config_equal(const Config& lhs, const Config& rhs);  // ignores line numbers

// Typed lookups; throw ConfigError anchored at the offending line.
std::string get_string(const Config& cfg, const std::string& section,
                       const std::string& key, const std::string& fallback);
double get_double(const Config& cfg, const std::string& section, const std::string& key,
                  double fallback);
long long get_int(const Config& cfg, const std::string& section, const std::string& key,
                  long long fallback);
bool get_bool(const Config& cfg, const std::string& section, const std::string& key,
              bool fallback);
bool has_key(const Config& cfg, const std::string& section, const std::string& key);

// Model assembled from [model]; sigma/s/vartheta are echoed because sweeps
// and bound reports need the generation parameters, not just the instance.
struct ModelBundle {
  ModelConfig config;
  int s = 0;
  double vartheta = 0.5;
  double sigma = 1.0;
};

// base_dir anchors relative theta_csv / sigma_csv paths.
ModelBundle build_model_config(const Config& cfg,
                               const std::filesystem::path& base_dir = ".");
SweepSpec build_sweep_spec(const Config& cfg,
                           const std::filesystem::path& base_dir = ".");

}  // namespace povar
