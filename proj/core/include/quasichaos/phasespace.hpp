#pragma once

#include "quasichaos/model.hpp"

namespace quasichaos::phasespace {

using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

struct CoherentState {
  VectorXcd amplitudes;  // normalized charge-basis amplitudes
  double tail_mass = 0.0;  // weight on the outermost charge states
  bool truncated = false;  // tail_mass > 1e-6
};

// Coherent state on the circle, centered at (phi0, n0) with n0 in charge
// units: c_m ~ exp(-hbar_eff (m - n0)^2 / 2) exp(-i m phi0). The Gaussian
// envelope gives symmetric widths var(phi) = var(n_tilde) = hbar_eff/2 in the
// rescaled phase space.
CoherentState circle_coherent_state(double phi0, double n0, double hbar_eff,
                                    const model::ChargeBasis& basis);

struct HusimiGridSpec {
  int n_phi = 201;
  int n_n = 201;
  double n_lo = -4.0;  // momentum window, rescaled units
  double n_hi = 4.0;
};

struct HusimiGrid {
  VectorXd phi;     // grid over (-pi, pi]
  VectorXd n;       // rescaled momentum grid
  MatrixXd values;  // Q(phi_i, n_j) = |<z|psi>|^2, indexed (i, j)
  double sample_time = 0.0;

  // Discrete integral with the circle measure dphi dn / (2 pi hbar_eff).
  double integral(double hbar_eff) const;
};

HusimiGrid husimi(const VectorXcd& state, const HusimiGridSpec& spec, double hbar_eff,
                  const model::ChargeBasis& basis);

}  // namespace quasichaos::phasespace
