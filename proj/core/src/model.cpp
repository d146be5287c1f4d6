#include "quasichaos/model.hpp"

#include <cmath>

#include "quasichaos/errors.hpp"

namespace quasichaos::model {

void TransmonParams::validate() const {
  if (!(ec > 0.0)) throw InvalidParameter("E_C must be positive");
  if (!(ej > 0.0)) throw InvalidParameter("E_J must be positive");
  if (!(omega_d > 0.0)) throw InvalidParameter("omega_d must be positive");
  if (eps_d < 0.0) throw InvalidParameter("eps_d must be nonnegative");
}

double TransmonParams::ng_mod1() const {
  double r = std::fmod(ng, 1.0);
  if (r < 0.0) r += 1.0;
  return r;
}

ReducedParams rescale(const TransmonParams& p) {
  p.validate();
  ReducedParams r;
  r.hbar_eff = std::sqrt(8.0 * p.ec / p.ej);
  r.omega_p = std::sqrt(8.0 * p.ej * p.ec);
  r.eps_tilde = p.eps_d / r.omega_p;
  r.omega_tilde = p.omega_d / r.omega_p;
  r.ng_tilde = r.hbar_eff * p.ng;
  return r;
}

TransmonParams from_reduced(double hbar_eff_inv, double eps_tilde,
                            double omega_tilde, double ng, double omega_p) {
  if (!(hbar_eff_inv > 0.0)) throw InvalidParameter("hbar_eff_inv must be positive");
  if (!(omega_p > 0.0)) throw InvalidParameter("omega_p must be positive");
  TransmonParams p;
  p.ej = omega_p * hbar_eff_inv;        // E_J = omega_p / hbar_eff
  p.ec = omega_p / (8.0 * hbar_eff_inv);  // E_C = omega_p * hbar_eff / 8
  p.ng = ng;
  p.eps_d = eps_tilde * omega_p;
  p.omega_d = omega_tilde * omega_p;
  return p;
}

double drive_from_photons(double g, double n_bar) {
  if (!(g > 0.0)) throw InvalidParameter("coupling g must be positive");
  if (n_bar < 0.0) throw InvalidParameter("photon number must be nonnegative");
  return 2.0 * g * std::sqrt(n_bar);
}

MatrixXd build_static_hamiltonian(const TransmonParams& p, const ChargeBasis& basis) {
  p.validate();
  const int d = basis.dim();
  MatrixXd h = MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double m = basis.label(i);
    h(i, i) = 4.0 * p.ec * (m - p.ng) * (m - p.ng);
    if (i + 1 < d) {
      h(i, i + 1) = -0.5 * p.ej;
      h(i + 1, i) = -0.5 * p.ej;
    }
  }
  return h;
}

MatrixXd charge_operator(const ChargeBasis& basis) {
  const int d = basis.dim();
  MatrixXd n = MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) n(i, i) = basis.label(i);
  return n;
}

linalg::SymEig diagonalize_static(const TransmonParams& p, const ChargeBasis& basis) {
  return linalg::sym_eig(build_static_hamiltonian(p, basis));
}

linalg::VectorXld static_eigenvalues_ld(const TransmonParams& p, const ChargeBasis& basis) {
  p.validate();
  const int d = basis.dim();
  linalg::MatrixXld h = linalg::MatrixXld::Zero(d, d);
  const long double ec = p.ec, ej = p.ej, ng = p.ng;
  for (int i = 0; i < d; ++i) {
    const long double m = basis.label(i);
    h(i, i) = 4.0L * ec * (m - ng) * (m - ng);
    if (i + 1 < d) {
      h(i, i + 1) = -0.5L * ej;
      h(i + 1, i) = -0.5L * ej;
    }
  }
  return linalg::sym_eig_ld(h).values;
}

}  // namespace quasichaos::model
