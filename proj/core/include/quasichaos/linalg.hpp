#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace quasichaos::linalg {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// Pins the BLAS backend to a single thread. Called once from any entry point
// that cares about run-to-run reproducibility; parallelism lives in the sweep
// pool instead.
void pin_blas_single_thread();

struct SymEig {
  VectorXd values;   // ascending
  MatrixXd vectors;  // column k is the k-th eigenvector
};

// Dense real-symmetric eigendecomposition (LAPACK dsyevd).
SymEig sym_eig(const MatrixXd& a);

// Long-double variant for exponentially small spectral differences
// (charge-dispersion scans); Eigen's iterative solver, no LAPACK.
using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXld = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
struct SymEigLd {
  VectorXld values;
  MatrixXld vectors;
};
SymEigLd sym_eig_ld(const MatrixXld& a);

struct UnitaryEig {
  VectorXcd values;   // eigenvalues on (numerically near) the unit circle
  MatrixXcd vectors;  // orthonormal (Schur) basis, column-aligned with values
};

// Eigendecomposition of a (near-)unitary matrix via complex Schur form.
// For a normal matrix the Schur basis is an orthonormal eigenbasis, which is
// what keeps Floquet modes orthonormal even across quasienergy
// near-degeneracies.
UnitaryEig unitary_eig(const MatrixXcd& u);

struct GeneralEig {
  VectorXcd values;
  MatrixXcd vectors;  // unit-norm right eigenvectors
};

// General complex eigendecomposition (LAPACK zgeev); used for the
// non-Hermitian resonator-loss Hamiltonian.
GeneralEig general_eig(const MatrixXcd& a);

// log|det| of a square matrix together with its sign (+1/-1, 0 if singular),
// via partial-pivot LU. Never overflows for determinants of any magnitude.
struct LogDet {
  double log_abs;
  int sign;
};
LogDet log_det(const MatrixXd& a);

// Complex propagator accumulated as separate real and imaginary parts so the
// per-step products run as real GEMMs against the real step eigenbasis.
struct PropagatorState {
  MatrixXd re, im;

  explicit PropagatorState(int dim)
      : re(MatrixXd::Identity(dim, dim)), im(MatrixXd::Zero(dim, dim)) {}

  MatrixXcd matrix() const {
    return re + std::complex<double>(0, 1) * im;
  }
};

// In place: state <- exp(-i H dt) * state, with {w, v} = sym_eig(H).
void apply_step(PropagatorState& state, const SymEig& eig, double dt);

}  // namespace quasichaos::linalg
