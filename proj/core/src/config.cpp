#include "quasichaos/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "quasichaos/constants.hpp"
#include "quasichaos/errors.hpp"

namespace quasichaos::config {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::parse_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
    }
    cfg.values_[key] = value;
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

double Config::get_double(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key: " + key);
  char* end = nullptr;
  const double v = std::strtod(it->second.c_str(), &end);
  if (end == it->second.c_str() || *end != '\0') {
    throw ConfigError("config key " + key + ": not a number: " + it->second);
  }
  used_[key] = it->second;
  return v;
}

double Config::get_double(const std::string& key, double fallback) const {
  if (!has(key)) {
    std::ostringstream os;
    os.precision(17);
    os << fallback;
    used_[key] = os.str() + " (default)";
    return fallback;
  }
  return get_double(key);
}

int Config::get_int(const std::string& key) const {
  const double v = get_double(key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) throw ConfigError("config key " + key + ": not an integer");
  return i;
}

int Config::get_int(const std::string& key, int fallback) const {
  if (!has(key)) {
    used_[key] = std::to_string(fallback) + " (default)";
    return fallback;
  }
  return get_int(key);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) {
    used_[key] = std::string(fallback ? "true" : "false") + " (default)";
    return fallback;
  }
  const std::string& v = values_.at(key);
  used_[key] = v;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key " + key + ": not a boolean: " + v);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    used_[key] = fallback + " (default)";
    return fallback;
  }
  used_[key] = it->second;
  return it->second;
}

model::TransmonParams load_transmon(const Config& cfg) {
  const bool absolute = cfg.has("transmon.EC_GHz") || cfg.has("transmon.EC");
  const bool reduced = cfg.has("reduced.hbar_eff_inv");
  if (absolute && reduced) {
    throw ConfigError("give either transmon.* or reduced.*, not both");
  }

  if (reduced) {
    const double omega_p = ghz_to_angular(cfg.get_double("scale.omega_p_GHz", kDefaultOmegaPGHz));
    double eps_tilde = cfg.get_double("reduced.eps_tilde", 0.0);
    const double hbar_inv = cfg.get_double("reduced.hbar_eff_inv");
    if (cfg.has("drive.photons")) {
      const double g = ghz_to_angular(cfg.get_double("drive.g_GHz"));
      eps_tilde = model::drive_from_photons(g, cfg.get_double("drive.photons")) / omega_p;
    }
    return model::from_reduced(hbar_inv, eps_tilde, cfg.get_double("reduced.omega_tilde"),
                               cfg.get_double("reduced.ng", 0.0), omega_p);
  }

  model::TransmonParams p;
  p.ec = ghz_to_angular(cfg.has("transmon.EC_GHz") ? cfg.get_double("transmon.EC_GHz")
                                                   : cfg.get_double("transmon.EC"));
  p.ej = ghz_to_angular(cfg.has("transmon.EJ_GHz") ? cfg.get_double("transmon.EJ_GHz")
                                                   : cfg.get_double("transmon.EJ"));
  p.ng = cfg.get_double("transmon.ng", 0.0);
  p.omega_d = ghz_to_angular(cfg.has("drive.frequency_GHz") ? cfg.get_double("drive.frequency_GHz")
                                                            : cfg.get_double("drive.frequency"));
  if (cfg.has("drive.photons")) {
    const double g = ghz_to_angular(cfg.get_double("drive.g_GHz"));
    p.eps_d = model::drive_from_photons(g, cfg.get_double("drive.photons"));
  } else {
    p.eps_d = ghz_to_angular(cfg.has("drive.amplitude_GHz")
                                 ? cfg.get_double("drive.amplitude_GHz")
                                 : cfg.get_double("drive.amplitude", 0.0));
  }
  p.validate();
  return p;
}

model::ChargeBasis load_basis(const Config& cfg) {
  model::ChargeBasis basis;
  basis.cutoff = cfg.get_int("basis.cutoff", 17);
  if (basis.cutoff < 1) throw ConfigError("basis.cutoff must be >= 1");
  return basis;
}

}  // namespace quasichaos::config
