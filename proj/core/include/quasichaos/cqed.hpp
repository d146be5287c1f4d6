#pragma once

#include <vector>

#include "quasichaos/dissipation.hpp"
#include "quasichaos/floquet.hpp"

namespace quasichaos::cqed {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Driven transmon capacitively coupled to a resonator,
// H(t) = H_transmon(t) + omega_a a^dag a - i g n (a - a^dag).
// Internally a Fock-phase gauge (a -> -i a) turns the coupling into
// -g n (a + a^dag), keeping every Hamiltonian real symmetric; all reported
// quantities are gauge-invariant.
struct CqedParams {
  model::TransmonParams transmon;
  double omega_a = 0.0;
  double g = 0.0;
  double kappa = 0.0;
  int dim_t = 35;
  int dim_r = 20;

  int dim() const { return dim_t * dim_r; }
  void validate() const;
};

MatrixXd kron(const MatrixXd& a, const MatrixXd& b);

// Joint-space Hamiltonian in the real gauge; the transmon block is truncated
// to its lowest dim_t bare eigenstates of the charge-basis Hamiltonian.
floquet::DrivenHamiltonian make_cqed_hamiltonian(const CqedParams& p,
                                                 const model::ChargeBasis& basis);

struct CqedSolveOptions {
  int n_steps = 1024;
  int n_times = 64;   // samples per period for averages and the tensor
  int kmax = 16;      // retained resonator-element harmonics
  bool want_tensor = true;
  bool store_modes = false;  // keep full mode samples (test-scale dims only)
  double alias_tol = 1e-6;
  bool check_alias = false;
  model::ChargeBasis basis{17};
};

// Joint Floquet solution plus per-mode time-averaged diagnostics.
struct CqedSolution {
  floquet::FloquetSolution fl;
  VectorXd nt_avg;      // <<N_t>> (bare transmon excitation number)
  VectorXd nr_avg;      // <<N_r>>
  VectorXd purity;      // time-averaged purity of the reduced transmon state
  VectorXd comm_error;  // |1 - <<[a, a^dag]>>|
  dissipation::MatrixElementTensor res_elements;  // resonator charge operator
  CqedParams params;
};

CqedSolution cqed_floquet(const CqedParams& p, const CqedSolveOptions& opts = {});

struct GridPoint {
  int mode = 0;
  double nt_avg = 0.0, nr_avg = 0.0, purity = 0.0, steady_pop = 0.0, comm_error = 0.0;
};

std::vector<GridPoint> grid(const CqedSolution& sol, const VectorXd* steady = nullptr);

struct ResonatorSteadyState {
  dissipation::RateMatrix rate_matrix;
  dissipation::SteadyState steady;
  double n_occ = 0.0;   // exp(-sum p log p), occupied-mode count
  double nt_ss = 0.0, nr_ss = 0.0;
  int vacuum_mode = 0;
};

// Linear-response rates through the resonator charge at zero temperature,
// with rates involving modes of <<N_r>> >= nr_cutoff zeroed, and the
// resulting Floquet-Markov steady state.
ResonatorSteadyState resonator_rates_and_steady_state(const CqedSolution& sol, double kappa,
                                                      double nr_cutoff = 15.0,
                                                      double bath_cutoff = 0.0);

struct PullRecord {
  int state = 0;
  double pull = 0.0;    // angular frequency relative to bare omega_a
  double weight = 0.0;  // |n^r|^2 of the dominant transition
  double purity = 0.0;
};

// Numerical two-tone spectroscopy: for every vacuum-like mode (purity above
// `purity_min`, <<N_r>> <= nr_max) the transition with the largest
// resonator-charge element near omega_a.
std::vector<PullRecord> cavity_pull_spectroscopy(const CqedSolution& sol,
                                                 double purity_min = 0.85,
                                                 double nr_max = 0.73);

// Second-order cavity pull per transmon Floquet state from the single-transmon
// charge elements: chi_i = sum_{j,k} g^2 |n_ijk|^2 (1/(w_a+D) - 1/(w_a-D)).
// Contributions with |w_a - D| < 2*pi*0.01 (10 MHz) are flagged divergent.
VectorXd perturbative_pull(const dissipation::MatrixElementTensor& transmon_elements,
                           double g, double omega_a,
                           std::vector<int>* divergent_states = nullptr);

struct FoldedSpectrum {
  VectorXd energy;  // Re(E) folded to [-omega_a/2, omega_a/2)
  VectorXd nr, nt;
};

// Undriven joint spectrum folded by the resonator frequency; kappa > 0 uses
// the non-Hermitian generator with the -i kappa/2 a^dag a term. States with
// <N_t> >= 20 are dropped.
FoldedSpectrum undriven_spectrum_folded(const CqedParams& p, bool with_kappa,
                                        const model::ChargeBasis& basis = {});

struct DipoleStats {
  VectorXd per_state;          // <n_i>, RMS over the first M states incl. diagonal
  VectorXd per_state_offdiag;  // <n_i^neq>
  double mean = 0.0;           // <n>
  double mean_offdiag = 0.0;   // <n^neq>
  double rmt_prediction = 0.0;      // sqrt(M/12)
  double projector_identity = 0.0;  // sqrt(sum_{|m|<=(M-1)/2} m^2) / M, exact
};

// Charge-dipole statistics over the first M Floquet states (mean-energy
// order); n_floquet is the charge operator in the Floquet basis at t = 0.
DipoleStats dipole_statistics(const MatrixXcd& n_floquet, int m_states);

struct CriticalPhotonNumber {
  double g_eff = 0.0;       // 2 g sqrt(n+1) sqrt(N_ch/12) at n = 0
  double delta_eff = 0.0;   // omega_d / N_ch
  double n_crit = 0.0;      // 3 omega_d^2 / (g^2 N_ch^3), closed form
  double n_crit_balance = 0.0;  // n_crit - 1: the n+1 reading of g_eff = delta_eff
};

CriticalPhotonNumber critical_photon_number(double g, double omega_d, int n_ch);

}  // namespace quasichaos::cqed
