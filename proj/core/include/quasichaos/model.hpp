#pragma once

#include <Eigen/Dense>

#include "quasichaos/linalg.hpp"

namespace quasichaos::model {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Driven transmon, H(t) = 4 E_C (n - n_g)^2 - E_J cos(phi) + eps_d cos(w_d t) n.
// All energies are angular (rad/ns).
struct TransmonParams {
  double ec = 0.0;       // charging energy
  double ej = 0.0;       // Josephson energy
  double ng = 0.0;       // offset charge, stored unreduced
  double eps_d = 0.0;    // drive amplitude
  double omega_d = 0.0;  // drive angular frequency

  void validate() const;
  double ng_mod1() const;  // reduced to [0, 1)
};

// Dimensionless form of the same system. hbar_eff = sqrt(8 E_C / E_J) is the
// effective Planck constant of the rescaled pendulum; omega_p = sqrt(8 E_J E_C).
struct ReducedParams {
  double hbar_eff = 0.0;
  double eps_tilde = 0.0;
  double omega_tilde = 0.0;
  double ng_tilde = 0.0;
  double omega_p = 0.0;
};

ReducedParams rescale(const TransmonParams& p);

// Inverse map; recovers a TransmonParams from the reduced quantities.
// `ng` is passed separately because ng_tilde = hbar_eff * ng is redundant
// with hbar_eff.
TransmonParams from_reduced(double hbar_eff_inv, double eps_tilde,
                            double omega_tilde, double ng, double omega_p);

// eps_d = 2 g sqrt(n_bar).
double drive_from_photons(double g, double n_bar);

// Symmetric charge-basis truncation, m in {-cutoff, ..., cutoff}.
struct ChargeBasis {
  int cutoff = 17;

  int dim() const { return 2 * cutoff + 1; }
  int label(int index) const { return index - cutoff; }  // basis index -> m
  int index(int m) const { return m + cutoff; }
};

// 4 E_C (m - n_g)^2 on the diagonal, -E_J/2 on the first off-diagonals.
MatrixXd build_static_hamiltonian(const TransmonParams& p, const ChargeBasis& basis);

// diag(m); the drive and bath coupling operator.
MatrixXd charge_operator(const ChargeBasis& basis);

// Static spectrum, ascending.
linalg::SymEig diagonalize_static(const TransmonParams& p, const ChargeBasis& basis);

// Long-double static eigenvalues for exponentially small charge-dispersion
// differences that underflow double precision beyond hbar_eff_inv ~ 5.
linalg::VectorXld static_eigenvalues_ld(const TransmonParams& p, const ChargeBasis& basis);

}  // namespace quasichaos::model
