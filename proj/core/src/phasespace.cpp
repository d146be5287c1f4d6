#include "quasichaos/phasespace.hpp"

#include <cmath>
#include <complex>

#include "quasichaos/constants.hpp"
#include "quasichaos/errors.hpp"

namespace quasichaos::phasespace {

using std::complex;

CoherentState circle_coherent_state(double phi0, double n0, double hbar_eff,
                                    const model::ChargeBasis& basis) {
  if (std::abs(n0) > basis.cutoff) {
    throw InvalidParameter("coherent-state center outside the charge window");
  }
  const int d = basis.dim();
  CoherentState cs;
  cs.amplitudes.resize(d);
  for (int i = 0; i < d; ++i) {
    const double m = basis.label(i);
    const double envelope = std::exp(-0.5 * hbar_eff * (m - n0) * (m - n0));
    cs.amplitudes(i) = envelope * std::exp(complex<double>(0, -m * phi0));
  }
  cs.amplitudes.normalize();
  cs.tail_mass = std::norm(cs.amplitudes(0)) + std::norm(cs.amplitudes(d - 1));
  cs.truncated = cs.tail_mass > 1e-6;
  return cs;
}

HusimiGrid husimi(const VectorXcd& state, const HusimiGridSpec& spec, double hbar_eff,
                  const model::ChargeBasis& basis) {
  const int d = basis.dim();
  if (state.size() != d) throw InvalidParameter("state dimension does not match basis");

  HusimiGrid grid;
  grid.phi.resize(spec.n_phi);
  for (int i = 0; i < spec.n_phi; ++i) {
    grid.phi(i) = -M_PI + kTwoPi * (i + 1) / spec.n_phi;  // (-pi, pi]
  }
  grid.n.resize(spec.n_n);
  for (int j = 0; j < spec.n_n; ++j) {
    grid.n(j) = spec.n_lo + (spec.n_hi - spec.n_lo) * j / (spec.n_n - 1);
  }

  grid.values.resize(spec.n_phi, spec.n_n);
  VectorXd envelope(d);
  for (int j = 0; j < spec.n_n; ++j) {
    const double n0 = grid.n(j) / hbar_eff;  // rescaled -> charge units
    double norm2 = 0.0;
    for (int m = 0; m < d; ++m) {
      const double x = basis.label(m) - n0;
      envelope(m) = std::exp(-0.5 * hbar_eff * x * x);
      norm2 += envelope(m) * envelope(m);
    }
    envelope /= std::sqrt(norm2);
    for (int i = 0; i < spec.n_phi; ++i) {
      // <z(phi, n)|psi> = sum_m conj(c_m) psi_m with c_m = env * e^{-im phi}
      complex<double> acc = 0.0;
      for (int m = 0; m < d; ++m) {
        const double mphi = basis.label(m) * grid.phi(i);
        acc += envelope(m) * std::exp(complex<double>(0, mphi)) * state(m);
      }
      grid.values(i, j) = std::norm(acc);
    }
  }
  return grid;
}

double HusimiGrid::integral(double hbar_eff) const {
  const double dphi = kTwoPi / phi.size();
  const double dn = (n(n.size() - 1) - n(0)) / (n.size() - 1);
  return values.sum() * dphi * dn / (kTwoPi * hbar_eff);
}

}  // namespace quasichaos::phasespace
