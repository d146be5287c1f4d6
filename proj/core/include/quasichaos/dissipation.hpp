#pragma once

#include <vector>

#include "quasichaos/floquet.hpp"

namespace quasichaos::dissipation {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Fourier components of the periodic mode matrix elements
// <phi_i(t)| op |phi_j(t)> at frequencies k omega_d, k in [-kmax, kmax].
// The quasienergy difference enters transition energies as
// Delta_ijk = eps_j - eps_i - k omega_d.
struct MatrixElementTensor {
  std::vector<MatrixXcd> comp;  // comp[kmax + k](i, j)
  int kmax = 0;
  int n_t = 0;
  double omega_d = 0.0;
  VectorXd quasienergies;
  double discarded_weight = 0.0;  // fraction of Fourier weight outside [-kmax, kmax]

  const MatrixXcd& at(int k) const { return comp[kmax + k]; }
  int dim() const { return static_cast<int>(quasienergies.size()); }
  double delta(int i, int j, int k) const {
    return quasienergies(j) - quasienergies(i) - k * omega_d;
  }
  // Reconstructs <phi_i(t_m)| op |phi_j(t_m)> from the retained components.
  std::complex<double> reconstruct(int i, int j, double t) const;
};

// Discrete Fourier transform of the mode matrix-element time series over one
// period. kmax = 0 selects the default n_t/4. Throws AccuracyError when more
// than alias_tol of the Fourier weight falls outside the retained harmonics.
MatrixElementTensor matrix_elements(const floquet::FloquetSolution& sol, const MatrixXd& op,
                                    int kmax = 0, double alias_tol = 1e-6);

struct BathSpec {
  double temperature_K = 0.010;
  double cutoff = 0.0;  // high-frequency cutoff omega_c (angular)
  double scale = 1.0;   // J(x) = scale * x * exp(-|x|/cutoff)

  void validate() const;
  double spectral(double x) const;  // J(|x|)
  double thermal_occupation(double x) const;
};

// Normalizes the ohmic prefactor so that J(omega_ref) = rate_scale; rates are
// then reported in units of the bath coupling at the reference transition.
BathSpec calibrated_bath(double temperature_K, double omega_ref, double cutoff,
                         double rate_scale = 1.0);

// Gamma(i, j) is the rate from Floquet state j to i, split into even-k and
// odd-k drive-photon channels.
struct RateMatrix {
  MatrixXd even, odd;

  MatrixXd total() const { return even + odd; }
};

RateMatrix rates(const MatrixElementTensor& elements, const BathSpec& bath);

struct SteadyState {
  VectorXd populations;  // normalized, entrywise >= 0
  double residual = 0.0;  // stationarity residual, normalized
  std::vector<std::vector<int>> components;  // connected components of the rate graph
  bool multi_component = false;
};

// Stationary populations of dp/dt = (Gamma - diag(outflow)) p. Weights are
// computed from log-cofactors of the generator (matrix-tree), which keeps
// Boltzmann tails accurate far below double-precision null-space solves.
// With several disconnected components, the distribution is supported on the
// component containing `anchor` and the result is flagged.
SteadyState steady_state(const MatrixXd& gamma, int anchor = 0);

struct NoiseSpec {
  double charge_amplitude = 1e-4;  // A_e, in charge quanta
  double log_factor = 4.0;         // sqrt(|log(omega_IR t_m)|)
  double dielectric_scale = 1.0;   // multiplies the ohmic S(omega)
  BathSpec bath;                   // spectral shape shared with the rate bath
};

struct DephasingResult {
  double total = 0.0;
  double one_over_f = 0.0;   // A_e |2 g_0| sqrt|log ...|
  double dielectric = 0.0;   // sum_k 2 S(k w_d) |g_k|^2
  bool confident = true;
};

// Pure dephasing of the 0-1 transition from the charge-element differences
// g_k = n_{11k} - n_{00k}.
DephasingResult dephasing_rate(const MatrixElementTensor& elements, int idx0, int idx1,
                               const NoiseSpec& noise, bool tracked_ok = true);

}  // namespace quasichaos::dissipation
