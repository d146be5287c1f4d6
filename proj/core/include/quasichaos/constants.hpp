#pragma once

#include <numbers>

namespace quasichaos {

// All energies and frequencies in the library are angular (rad/ns).
// Plain frequencies in GHz enter and leave only at the CLI/config boundary
// through these two helpers.
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double ghz_to_angular(double f_ghz) { return kTwoPi * f_ghz; }
constexpr double angular_to_ghz(double w) { return w / kTwoPi; }

// k_B / h in GHz/K (exact SI constants).
inline constexpr double kBoltzmannGHzPerK = 1.380649e-23 / 6.62607015e-34 * 1e-9;

// hbar * omega / (k_B * T) for omega in rad/ns and T in kelvin.
constexpr double thermal_exponent(double omega, double temperature_K) {
  return omega / (kTwoPi * kBoltzmannGHzPerK * temperature_K);
}

}  // namespace quasichaos
