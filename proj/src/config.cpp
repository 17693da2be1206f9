#include "povar/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "povar/csv.hpp"
#include "povar/rng.hpp"

namespace povar {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Cut an inline comment: '#' at line start or preceded by whitespace.
std::string strip_comment(const std::string& line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] != '#' && line[i] != ';') continue;
    if (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1])))
      return line.substr(0, i);
  }
  return line;
}

const ConfigEntry& require(const Config& cfg, const std::string& section,
                           const std::string& key) {
  const ConfigEntry* e = cfg.find(section, key);
  if (!e) {
    const ConfigSection* sec = cfg.find_section(section);
    throw ConfigError("missing key '" + key + "' in [" + section + "]",
                      sec ? sec->line : 0);
  }
  return *e;
}

double parse_double_entry(const ConfigEntry& e) {
  try {
    return parse_double(e.value);
  } catch (const std::invalid_argument&) {
    throw ConfigError("key '" + e.key + "' is not a number: '" + e.value + "'", e.line);
  }
}

long long parse_int_entry(const ConfigEntry& e) {
  long long v = 0;
  auto res = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
  if (res.ec != std::errc() || res.ptr != e.value.data() + e.value.size())
    throw ConfigError("key '" + e.key + "' is not an integer: '" + e.value + "'", e.line);
  return v;
}

std::vector<double> parse_grid_entry(const ConfigEntry& e) {
  std::vector<double> out;
  std::stringstream ss(e.value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty())
      throw ConfigError("empty item in list for key '" + e.key + "'", e.line);
    try {
      out.push_back(parse_double(item));
    } catch (const std::invalid_argument&) {
      throw ConfigError("bad list item '" + item + "' for key '" + e.key + "'", e.line);
    }
  }
  if (out.empty()) throw ConfigError("empty list for key '" + e.key + "'", e.line);
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base_dir,
                              const std::string& value) {
  std::filesystem::path p(value);
  return p.is_absolute() ? p : base_dir / p;
}

}  // namespace

const ConfigSection* Config::find_section(const std::string& name) const {
  for (const auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

const ConfigEntry* Config::find(const std::string& section, const std::string& key) const {
  const ConfigSection* s = find_section(section);
  if (!s) return nullptr;
  for (const auto& e : s->entries)
    if (e.key == key) return &e;
  return nullptr;
}

Config parse_config(const std::string& text) {
  Config cfg;
  std::stringstream ss(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(ss, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3)
        throw ConfigError("malformed section header", lineno);
      std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw ConfigError("empty section name", lineno);
      if (cfg.find_section(name))
        throw ConfigError("duplicate section [" + name + "]", lineno);
      cfg.sections.push_back({name, {}, lineno});
      continue;
    }

    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value' or '[section]'", lineno);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", lineno);
    if (cfg.sections.empty())
      throw ConfigError("key '" + key + "' appears before any [section]", lineno);
    for (const auto& e : cfg.sections.back().entries)
      if (e.key == key)
        throw ConfigError("duplicate key '" + key + "' in [" +
                              cfg.sections.back().name + "]",
                          lineno);
    cfg.sections.back().entries.push_back({key, value, lineno});
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const Config& cfg) {
  std::string out;
  for (std::size_t i = 0; i < cfg.sections.size(); ++i) {
    if (i > 0) out += '\n';
    out += '[' + cfg.sections[i].name + "]\n";
    for (const auto& e : cfg.sections[i].entries) out += e.key + " = " + e.value + '\n';
  }
  return out;
}

bool config_equal(const Config& lhs, const Config& rhs) {
  if (lhs.sections.size() != rhs.sections.size()) return false;
  for (std::size_t i = 0; i < lhs.sections.size(); ++i) {
    const auto& a = lhs.sections[i];
    const auto& b = rhs.sections[i];
    if (a.name != b.name || a.entries.size() != b.entries.size()) return false;
    for (std::size_t j = 0; j < a.entries.size(); ++j)
      if (a.entries[j].key != b.entries[j].key || a.entries[j].value != b.entries[j].value)
        return false;
  }
  return true;
}

std::string get_string(const Config& cfg, const std::string& section,
                       const std::string& key, const std::string& fallback) {
  const ConfigEntry* e = cfg.find(section, key);
  return e ? e->value : fallback;
}

double get_double(const Config& cfg, const std::string& section, const std::string& key,
                  double fallback) {
  const ConfigEntry* e = cfg.find(section, key);
  return e ? parse_double_entry(*e) : fallback;
}

long long get_int(const Config& cfg, const std::string& section, const std::string& key,
                  long long fallback) {
  const ConfigEntry* e = cfg.find(section, key);
  return e ? parse_int_entry(*e) : fallback;
}

bool get_bool(const Config& cfg, const std::string& section, const std::string& key,
              bool fallback) {
  const ConfigEntry* e = cfg.find(section, key);
  if (!e) return fallback;
  const std::string& v = e->value;
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError("key '" + key + "' is not a boolean: '" + v + "'", e->line);
}

bool has_key(const Config& cfg, const std::string& section, const std::string& key) {
  return cfg.find(section, key) != nullptr;
}

ModelBundle build_model_config(const Config& cfg, const std::filesystem::path& base_dir) {
  const ConfigSection* model = cfg.find_section("model");
  if (!model) throw ConfigError("missing [model] section");

  ModelBundle bundle;
  ModelConfig& mc = bundle.config;
  mc.D = static_cast<int>(parse_int_entry(require(cfg, "model", "D")));
  mc.T = static_cast<int>(parse_int_entry(require(cfg, "model", "T")));
  mc.N = static_cast<int>(get_int(cfg, "model", "N", 1));

  // Determinism contract: every run names its seed explicitly.
  const ConfigEntry& seed_entry = require(cfg, "model", "seed");
  long long seed = parse_int_entry(seed_entry);
  if (seed < 0) throw ConfigError("seed must be nonnegative", seed_entry.line);
  mc.seed = static_cast<std::uint64_t>(seed);

  bundle.s = static_cast<int>(get_int(cfg, "model", "s", mc.D));
  bundle.vartheta = get_double(cfg, "model", "vartheta", 0.5);
  bundle.sigma = get_double(cfg, "model", "sigma", 1.0);
  double omega = get_double(cfg, "model", "omega", 0.1);
  if (omega < 0.0) throw ConfigError("omega must be nonnegative",
                                     cfg.find("model", "omega")->line);
  mc.omega2 = omega * omega;
  mc.p = get_double(cfg, "model", "p", 1.0);
  mc.a = get_double(cfg, "model", "a", mc.p);
  mc.b = get_double(cfg, "model", "b", 1.0 - mc.p);
  mc.h0 = static_cast<int>(get_int(cfg, "model", "h0", 0));

  if (mc.D < 1) throw ConfigError("D must be >= 1", cfg.find("model", "D")->line);

  if (has_key(cfg, "model", "sigma_csv")) {
    mc.Sigma = read_matrix_csv(
        resolve(base_dir, get_string(cfg, "model", "sigma_csv", "")).string());
  } else {
    if (bundle.sigma <= 0.0)
      throw ConfigError("sigma must be positive", cfg.find("model", "sigma")->line);
    mc.Sigma = (bundle.sigma * bundle.sigma) *
               Matrix::identity(static_cast<std::size_t>(mc.D));
  }

  if (has_key(cfg, "model", "theta_csv")) {
    Matrix entries = read_matrix_csv(
        resolve(base_dir, get_string(cfg, "model", "theta_csv", "")).string());
    try {
      mc.theta = make_transition(std::move(entries), bundle.s, bundle.vartheta);
    } catch (const std::domain_error& e) {
      throw ConfigError(std::string("theta_csv: ") + e.what(),
                        cfg.find("model", "theta_csv")->line);
    }
  } else {
    Rng rng(derive_seed(mc.seed, 0xC0FFEE));
    try {
      mc.theta = gen_sparse_theta(mc.D, bundle.s, bundle.vartheta, rng);
    } catch (const std::domain_error& e) {
      throw ConfigError(std::string("cannot draw theta: ") + e.what(), model->line);
    }
  }

  auto violations = validate_config(mc);
  if (!violations.empty()) throw ConfigError(violations.front(), model->line);
  return bundle;
}

SweepSpec build_sweep_spec(const Config& cfg, const std::filesystem::path& base_dir) {
  ModelBundle bundle = build_model_config(cfg, base_dir);
  const ConfigSection* sweep = cfg.find_section("sweep");
  if (!sweep) throw ConfigError("missing [sweep] section");

  SweepSpec spec;
  spec.base = bundle.config;
  spec.s = bundle.s;
  spec.vartheta = bundle.vartheta;
  spec.swept = [&] {
    const ConfigEntry& e = require(cfg, "sweep", "panel");
    try {
      return swept_from_string(e.value);
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(ex.what(), e.line);
    }
  }();
  spec.grid = parse_grid_entry(require(cfg, "sweep", "grid"));
  if (has_key(cfg, "sweep", "grid2"))
    spec.grid2 = parse_grid_entry(*cfg.find("sweep", "grid2"));
  spec.replications = static_cast<int>(get_int(cfg, "sweep", "replications", 5));

  bool sparse_panel =
      spec.swept == Swept::D_fixed_s || spec.swept == Swept::s_fixed_D;
  std::string est = get_string(cfg, "sweep", "estimator",
                               sparse_panel ? "both" : "dense");
  try {
    spec.estimator = estimator_from_string(est);
  } catch (const std::invalid_argument& ex) {
    const ConfigEntry* e = cfg.find("sweep", "estimator");
    throw ConfigError(ex.what(), e ? e->line : sweep->line);
  }

  long long ms = get_int(cfg, "sweep", "master_seed",
                         static_cast<long long>(bundle.config.seed));
  if (ms < 0) throw ConfigError("master_seed must be nonnegative",
                                cfg.find("sweep", "master_seed")->line);
  spec.master_seed = static_cast<std::uint64_t>(ms);
  spec.fixed_theta = get_bool(cfg, "sweep", "fixed_theta", false);

  auto problems = check_sweep_spec(spec);
  if (!problems.empty()) throw ConfigError(problems.front(), sweep->line);
  return spec;
}

}  // namespace povar
