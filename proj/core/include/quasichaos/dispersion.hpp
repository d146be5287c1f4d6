#pragma once

#include <complex>
#include <vector>

#include "quasichaos/dissipation.hpp"
#include "quasichaos/floquet.hpp"

namespace quasichaos::dispersion {

using Eigen::VectorXd;

// Energy of one tracked level versus offset charge. `energy` stores the
// deviation from `energy_offset` so that exponentially small undriven
// dispersions survive in double precision.
struct BandCurve {
  int level = 0;
  VectorXd ng;        // [-0.5, 0.5], both endpoints included
  VectorXd energy;    // deviation from energy_offset (angular)
  double energy_offset = 0.0;
  std::vector<char> spike;    // local jump > 10x trend
  std::vector<char> tracked;  // tracking confidence per point
  double dispersion = 0.0;    // max - min

  double absolute(int i) const { return energy_offset + energy(i); }
};

struct BandOptions {
  int ng_points = 64;               // interior sampling; +1 duplicated endpoint stored
  double track_step_eps_tilde = 0.005;  // amplitude sweep resolution for tracking
  floquet::SolveOptions solve;
  int workers = 0;
};

// Driven band: at each n_g the level is tracked from the undriven eigenstate
// along an amplitude sweep up to base.eps_d, with the quasienergy unfolded by
// branch continuity.
BandCurve driven_band(const model::TransmonParams& base, const model::ChargeBasis& basis,
                      int level, const BandOptions& opts);

// Undriven band from static diagonalization in extended precision (double
// underflows beyond hbar_eff_inv ~ 5).
BandCurve undriven_band(const model::TransmonParams& base, const model::ChargeBasis& basis,
                        int level, int ng_points);

// Phase-slip Fourier components t_n = integral dn_g eps(n_g) e^{i 2 pi n_g n};
// |t_n| is the order-n phase-slip rate.
struct PhaseSlipSpectrum {
  std::vector<std::complex<double>> tn;  // n = 0 .. n_max
  VectorXd abs_tn;

  // Reconstruction of the band at grid point i from the retained components.
  double reconstruct(const BandCurve& band, int i) const;
};

PhaseSlipSpectrum phase_slip_spectrum(const BandCurve& band, int n_max);

// Coupling of state i to all states with index >= j through the k = -1, 0
// charge harmonics: N_ij = sqrt(sum_{l >= j} |n_{il,-1}|^2 + |n_{il,0}|^2),
// monotone nonincreasing in j. States follow the tensor's mean-energy order.
VectorXd chaotic_coupling(const dissipation::MatrixElementTensor& elements, int i);

}  // namespace quasichaos::dispersion
