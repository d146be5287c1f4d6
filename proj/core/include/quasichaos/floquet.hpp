#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "quasichaos/constants.hpp"
#include "quasichaos/linalg.hpp"
#include "quasichaos/model.hpp"

namespace quasichaos::floquet {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using Eigen::VectorXi;

// H(t) = h_static + eps_d cos(omega_d t) h_drive, both parts real symmetric.
struct DrivenHamiltonian {
  MatrixXd h_static;
  MatrixXd h_drive;
  double eps_d = 0.0;
  double omega_d = 0.0;

  int dim() const { return static_cast<int>(h_static.rows()); }
  double period() const { return kTwoPi / omega_d; }
  MatrixXd at(double t) const;
};

DrivenHamiltonian make_transmon_hamiltonian(const model::TransmonParams& p,
                                            const model::ChargeBasis& basis);

// Midpoint-exponential piecewise-constant stepping over one period.
// `on_sample(m, state)` is invoked at the n_samples uniform times
// t_m = m T / n_samples, m = 0 .. n_samples-1 (before the step across t_m).
// Returns U(T, 0); u_half, when non-null, receives U(T/2, 0).
linalg::PropagatorState propagate_period(
    const DrivenHamiltonian& h, int n_steps, int n_samples = 0,
    const std::function<void(int, const linalg::PropagatorState&)>& on_sample = {},
    linalg::PropagatorState* u_half = nullptr);

// One-period propagator U_F; n_steps >= 256.
MatrixXcd propagator(const DrivenHamiltonian& h, int n_steps);

double unitarity_defect(const MatrixXcd& u);

// Fold to the first Brillouin zone (-omega/2, omega/2].
double fold_quasienergy(double eps, double omega);

// Mean energy per cycle measured from the bottom of the Josephson well, in
// units of E_J; the separatrix sits at 2 in this convention.
inline double well_energy_over_ej(double mean_energy, double ej) {
  return mean_energy / ej + 1.0;
}

struct FloquetSolution {
  VectorXd quasienergies;  // folded; index-aligned with modes, sorted by mean energy
  VectorXd mean_energy;    // period-averaged <H> per mode (angular units)
  MatrixXcd modes0;        // column k = |phi_k(0)>
  std::vector<MatrixXcd> modes_t;  // modes at n_times uniform times (may be empty)
  double omega_d = 0.0;
  double eps_d = 0.0;
  int n_steps = 0;
  int n_times = 0;
  VectorXi parity;             // +1/-1 labels when parity-adapted, else empty
  double parity_defect = 0.0;  // max | |sigma|-1 | over modes
  std::vector<std::pair<int, int>> degeneracies;  // eigenphase ties (flagged)

  double period() const { return kTwoPi / omega_d; }
  double sample_time(int m) const { return period() * m / n_times; }
};

struct SolveOptions {
  int n_steps = 1024;
  int n_times = 128;
  bool store_modes = true;
  bool check_convergence = false;
  double convergence_tol = 1e-7;  // quasienergy drift allowed, in units of omega_d
  // When set, the decomposition diagonalizes the commuting half-period parity
  // operator Q = R U(T/2,0) instead of U_F, producing parity-definite modes.
  const VectorXi* parity_perm = nullptr;
};

// Permutation m -> 2 n_g - m on the charge basis; valid when 2 n_g is an
// integer. Indices without a partner inside the truncation map to themselves.
VectorXi parity_permutation(const model::ChargeBasis& basis, double ng);

// Propagator + eigendecomposition + mode propagation + mean energies.
FloquetSolution solve(const DrivenHamiltonian& h, const SolveOptions& opts = {});

// Convenience wrapper: builds the charge-basis Hamiltonian and enables the
// parity-adapted decomposition automatically at n_g = 0, 0.5 (mod 1).
FloquetSolution solve_transmon(const model::TransmonParams& p,
                               const model::ChargeBasis& basis,
                               SolveOptions opts = {});

struct TrackingStep {
  int index = -1;
  double overlap = 0.0;
  bool confident = false;
};

// One tracked row per seed column, one entry per sweep step.
struct TrackingResult {
  std::vector<std::vector<TrackingStep>> per_seed;
  // First sweep index at which confidence was lost for good (sweep size if never).
  std::vector<int> loss_index;
};

inline constexpr double kTrackingConfidence = 0.5;

// Maximum-|overlap| assignment of Floquet modes (at t = 0) along an ordered
// sweep, seeded by the given column vectors.
TrackingResult track(const std::vector<FloquetSolution>& sweep, const MatrixXcd& seeds,
                     double confidence = kTrackingConfidence);

struct StarkCurve {
  std::vector<double> eps_d;   // absolute drive amplitudes
  std::vector<double> shift;   // unfolded [e1 - e0](eps) - [e1 - e0](0), angular
  std::vector<bool> confident;
  int last_confident = -1;  // last index with both states confidently tracked
};

// ac-Stark shift of the 0-1 transition along an amplitude sweep.
StarkCurve ac_stark_shift(const model::TransmonParams& base, const model::ChargeBasis& basis,
                          double eps_d_max, double eps_d_step, const SolveOptions& opts = {});

// Smallest drive amplitude at which the ac-Stark shift reaches `target`
// (angular, signed), bisected to `tol`. Throws if the target is not reached
// before tracking is lost.
double amplitude_for_shift(const model::TransmonParams& base, const model::ChargeBasis& basis,
                           double target, double tol = kTwoPi * 1e-4,
                           const SolveOptions& opts = {});

}  // namespace quasichaos::floquet
