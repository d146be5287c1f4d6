#pragma once

#include <map>
#include <string>

#include "quasichaos/model.hpp"

namespace quasichaos::config {

// Flat key-value configuration with dotted keys ("transmon.EC_GHz = 0.23").
// '#' starts a comment. Frequencies carry their unit in the key name and are
// converted to angular internally. Every key actually consumed, including
// defaulted ones, is recorded for the run manifest.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;

  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  const std::map<std::string, std::string>& values() const { return values_; }
  // Keys consumed so far with the values actually used (defaults included).
  const std::map<std::string, std::string>& used() const { return used_; }

 private:
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, std::string> used_;
};

// Default absolute frequency anchor: omega_p/2pi such that omega_tilde = 1.34
// lands the drive at 7.5 GHz.
inline constexpr double kDefaultOmegaPGHz = 7.5 / 1.34;

// Builds transmon parameters from either the absolute block
// (transmon.{EC_GHz,EJ_GHz,ng} + drive.{amplitude_GHz|photons,g_GHz} +
// drive.frequency_GHz) or the rescaled block (reduced.{hbar_eff_inv,
// eps_tilde, omega_tilde, ng} with the scale.omega_p_GHz anchor).
model::TransmonParams load_transmon(const Config& cfg);

model::ChargeBasis load_basis(const Config& cfg);

}  // namespace quasichaos::config
