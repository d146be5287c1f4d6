#include "quasichaos/linalg.hpp"

#include <lapacke.h>

#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>

extern "C" void openblas_set_num_threads(int);

namespace quasichaos::linalg {

void pin_blas_single_thread() {
  static std::once_flag flag;
  std::call_once(flag, [] { openblas_set_num_threads(1); });
}

SymEig sym_eig(const MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  SymEig out;
  out.vectors = a;
  out.values.resize(n);
  const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                  out.vectors.data(), n, out.values.data());
  if (info != 0) {
    throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));
  }
  return out;
}

SymEigLd sym_eig_ld(const MatrixXld& a) {
  Eigen::SelfAdjointEigenSolver<MatrixXld> solver(a);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("long-double eigensolver failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

UnitaryEig unitary_eig(const MatrixXcd& u) {
  const int n = static_cast<int>(u.rows());
  UnitaryEig out;
  MatrixXcd t = u;
  out.values.resize(n);
  out.vectors.resize(n, n);
  int sdim = 0;
  const int info = LAPACKE_zgees(
      LAPACK_COL_MAJOR, 'V', 'N', nullptr, n,
      reinterpret_cast<lapack_complex_double*>(t.data()), n, &sdim,
      reinterpret_cast<lapack_complex_double*>(out.values.data()),
      reinterpret_cast<lapack_complex_double*>(out.vectors.data()), n);
  if (info != 0) {
    throw std::runtime_error("zgees failed, info=" + std::to_string(info));
  }
  return out;
}

GeneralEig general_eig(const MatrixXcd& a) {
  const int n = static_cast<int>(a.rows());
  MatrixXcd work = a;
  GeneralEig out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  const int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'V', n,
      reinterpret_cast<lapack_complex_double*>(work.data()), n,
      reinterpret_cast<lapack_complex_double*>(out.values.data()), nullptr, 1,
      reinterpret_cast<lapack_complex_double*>(out.vectors.data()), n);
  if (info != 0) {
    throw std::runtime_error("zgeev failed, info=" + std::to_string(info));
  }
  return out;
}

LogDet log_det(const MatrixXd& a) {
  Eigen::PartialPivLU<MatrixXd> lu(a);
  const MatrixXd& m = lu.matrixLU();
  double log_abs = 0.0;
  int sign = lu.permutationP().determinant();
  for (int i = 0; i < m.rows(); ++i) {
    const double d = m(i, i);
    if (d == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
    if (d < 0) sign = -sign;
    log_abs += std::log(std::abs(d));
  }
  return {log_abs, sign};
}

void apply_step(PropagatorState& state, const SymEig& eig, double dt) {
  // exp(-i H dt) = V diag(e^{-i w dt}) V^T with V real orthogonal.
  const MatrixXd wr = eig.vectors.transpose() * state.re;
  const MatrixXd wi = eig.vectors.transpose() * state.im;
  const Eigen::ArrayXd c = (eig.values.array() * dt).cos();
  const Eigen::ArrayXd s = (eig.values.array() * dt).sin();
  // (c - i s) (wr + i wi) = (c wr + s wi) + i (c wi - s wr), row-wise.
  MatrixXd pr = c.matrix().asDiagonal() * wr + s.matrix().asDiagonal() * wi;
  MatrixXd pi = c.matrix().asDiagonal() * wi - s.matrix().asDiagonal() * wr;
  state.re.noalias() = eig.vectors * pr;
  state.im.noalias() = eig.vectors * pi;
}

}  // namespace quasichaos::linalg
