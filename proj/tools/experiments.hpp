#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quasichaos/config.hpp"

namespace quasichaos::cli {

struct RunOptions {
  std::string experiment;
  std::string config_path;
  std::string out_path;
  std::string out_fourier;  // dispersion only
  std::string preset = "paper";
  int workers = 0;
  std::uint64_t seed = 0;
  int state_index = -1;       // husimi
  double time_fraction = 0.125;  // husimi
  int level = 1;              // dispersion
  int ng_samples = -1;        // level-stats
  double ncrit_g = 0.0;       // ncrit (GHz)
  double ncrit_omega_d = 0.0;  // ncrit (GHz)
  int ncrit_nch = 0;
};

extern const std::vector<std::string> kExperiments;

// Runs one experiment: writes its CSV/JSON artifacts and the sidecar
// manifest. Throws ConfigError / AccuracyError / std::exception on failure;
// nothing is written in that case except nothing (no partial outputs).
void run(const RunOptions& opts);

}  // namespace quasichaos::cli
