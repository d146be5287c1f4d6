#include "quasichaos/cqed.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "quasichaos/constants.hpp"
#include "quasichaos/errors.hpp"

namespace quasichaos::cqed {

using Eigen::VectorXcd;
using std::complex;

void CqedParams::validate() const {
  transmon.validate();
  if (!(omega_a > 0.0)) throw InvalidParameter("omega_a must be positive");
  if (!(g > 0.0)) throw InvalidParameter("coupling g must be positive");
  if (kappa < 0.0) throw InvalidParameter("kappa must be nonnegative");
  if (dim_t < 20 || dim_r < 10) {
    throw InvalidParameter("joint dims must be at least (20, 10)");
  }
  if (dim() > 1200) {
    throw ConfigError("joint dimension " + std::to_string(dim()) +
                      " exceeds the 1200 memory guard");
  }
}

MatrixXd kron(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace {

MatrixXd resonator_number(int dim_r) {
  MatrixXd n = MatrixXd::Zero(dim_r, dim_r);
  for (int i = 0; i < dim_r; ++i) n(i, i) = i;
  return n;
}

// a + a^dag in the Fock basis; in the rotated gauge this is the image of
// i(a - a^dag), so -g n (a+a^dag) represents the capacitive coupling.
MatrixXd resonator_quadrature(int dim_r) {
  MatrixXd q = MatrixXd::Zero(dim_r, dim_r);
  for (int i = 0; i + 1 < dim_r; ++i) {
    q(i, i + 1) = std::sqrt(i + 1.0);
    q(i + 1, i) = std::sqrt(i + 1.0);
  }
  return q;
}

// Bare transmon eigenbasis truncated to dim_t levels: energies and the charge
// operator in that basis.
struct TransmonBlock {
  Eigen::VectorXd energies;
  MatrixXd charge;
};

TransmonBlock transmon_block(const model::TransmonParams& p, const model::ChargeBasis& basis,
                             int dim_t) {
  if (basis.dim() < dim_t) {
    throw ConfigError("charge basis too small for the requested transmon dimension");
  }
  model::TransmonParams undriven = p;
  undriven.eps_d = 0.0;
  const auto eig = model::diagonalize_static(undriven, basis);
  const MatrixXd v = eig.vectors.leftCols(dim_t);
  TransmonBlock block;
  block.energies = eig.values.head(dim_t);
  block.charge = v.transpose() * model::charge_operator(basis) * v;
  return block;
}

}  // namespace

floquet::DrivenHamiltonian make_cqed_hamiltonian(const CqedParams& p,
                                                 const model::ChargeBasis& basis) {
  p.validate();
  const TransmonBlock block = transmon_block(p.transmon, basis, p.dim_t);
  const MatrixXd it = MatrixXd::Identity(p.dim_t, p.dim_t);
  const MatrixXd ir = MatrixXd::Identity(p.dim_r, p.dim_r);

  floquet::DrivenHamiltonian h;
  h.h_static = kron(MatrixXd(block.energies.asDiagonal()), ir) +
               kron(it, p.omega_a * resonator_number(p.dim_r)) -
               p.g * kron(block.charge, resonator_quadrature(p.dim_r));
  h.h_drive = kron(block.charge, ir);
  h.eps_d = p.transmon.eps_d;
  h.omega_d = p.transmon.omega_d;
  return h;
}

CqedSolution cqed_floquet(const CqedParams& p, const CqedSolveOptions& opts) {
  const floquet::DrivenHamiltonian h = make_cqed_hamiltonian(p, opts.basis);
  const int dim = h.dim();
  const int n_t = opts.n_times;
  const double period = h.period();

  // Pass 1: one-period propagator and its eigenbasis.
  const MatrixXcd uf = floquet::propagate_period(h, opts.n_steps).matrix();
  auto eig = linalg::unitary_eig(uf);
  Eigen::VectorXd quasi(dim);
  for (int k = 0; k < dim; ++k) {
    quasi(k) = floquet::fold_quasienergy(-std::arg(eig.values(k)) / period, h.omega_d);
  }
  const MatrixXcd& modes0 = eig.vectors;

  // Diagonal observables on the composite index i_t * dim_r + n_r.
  Eigen::VectorXd nt_diag(dim), nr_diag(dim), comm_diag(dim);
  for (int it = 0; it < p.dim_t; ++it) {
    for (int nr = 0; nr < p.dim_r; ++nr) {
      const int idx = it * p.dim_r + nr;
      nt_diag(idx) = it;
      nr_diag(idx) = nr;
      comm_diag(idx) = (nr == p.dim_r - 1) ? 1.0 - p.dim_r : 1.0;
    }
  }
  const MatrixXd nr_charge =
      kron(MatrixXd::Identity(p.dim_t, p.dim_t), -resonator_quadrature(p.dim_r) / std::sqrt(2.0));

  // Pass 2: stream over the mode samples, accumulating averages and the
  // resonator-charge Fourier components.
  const int kmax = opts.kmax > 0 ? opts.kmax : n_t / 4;
  if (n_t < 4 * kmax) throw ConfigError("cqed n_times must be >= 4*kmax");
  CqedSolution sol;
  sol.params = p;
  sol.nt_avg = Eigen::VectorXd::Zero(dim);
  sol.nr_avg = Eigen::VectorXd::Zero(dim);
  sol.purity = Eigen::VectorXd::Zero(dim);
  sol.comm_error = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd mean_energy = Eigen::VectorXd::Zero(dim);
  std::vector<MatrixXcd> comp(2 * kmax + 1, MatrixXcd::Zero(dim, dim));
  double series_weight = 0.0;
  std::vector<MatrixXcd> stored_modes;
  if (opts.store_modes) stored_modes.resize(n_t);

  auto on_sample = [&](int m, const linalg::PropagatorState& u) {
    const double t = period * m / n_t;
    VectorXcd phases(dim);
    for (int k = 0; k < dim; ++k) phases(k) = std::exp(complex<double>(0, quasi(k) * t));
    MatrixXcd phi = u.matrix() * modes0 * phases.asDiagonal();

    const MatrixXd re = phi.real(), im = phi.imag();
    const MatrixXd abs2 = re.cwiseAbs2() + im.cwiseAbs2();
    sol.nt_avg += abs2.transpose() * nt_diag / n_t;
    sol.nr_avg += abs2.transpose() * nr_diag / n_t;
    sol.comm_error += abs2.transpose() * comm_diag / n_t;
    const MatrixXd ht = h.at(t);
    mean_energy += ((re.transpose() * (ht * re)).diagonal() +
                    (im.transpose() * (ht * im)).diagonal()) /
                   n_t;
    for (int k = 0; k < dim; ++k) {
      Eigen::Map<const MatrixXcd> mk(phi.col(k).data(), p.dim_r, p.dim_t);
      const MatrixXcd rho = mk.transpose() * mk.conjugate();
      sol.purity(k) += rho.squaredNorm() / n_t;
    }
    const MatrixXcd a_m = phi.adjoint() * (nr_charge * phi);
    series_weight += a_m.squaredNorm() / n_t;
    for (int k = -kmax; k <= kmax; ++k) {
      const double angle = -kTwoPi * k * m / n_t;
      comp[kmax + k] += a_m * (std::exp(complex<double>(0, angle)) / double(n_t));
    }
    if (opts.store_modes) stored_modes[m] = std::move(phi);
  };
  floquet::propagate_period(h, opts.n_steps, n_t, on_sample);

  // Sort everything by mean energy.
  std::vector<int> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return mean_energy(a) < mean_energy(b); });
  auto permute_vec = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd out(dim);
    for (int k = 0; k < dim; ++k) out(k) = v(order[k]);
    return out;
  };
  sol.fl.omega_d = h.omega_d;
  sol.fl.eps_d = h.eps_d;
  sol.fl.n_steps = opts.n_steps;
  sol.fl.n_times = n_t;
  sol.fl.quasienergies = permute_vec(quasi);
  sol.fl.mean_energy = permute_vec(mean_energy);
  sol.nt_avg = permute_vec(sol.nt_avg);
  sol.nr_avg = permute_vec(sol.nr_avg);
  sol.purity = permute_vec(sol.purity);
  sol.comm_error = (permute_vec(sol.comm_error).array() - 1.0).abs().matrix();
  sol.fl.modes0.resize(dim, dim);
  for (int k = 0; k < dim; ++k) sol.fl.modes0.col(k) = modes0.col(order[k]);
  if (opts.store_modes) {
    sol.fl.modes_t.resize(n_t);
    for (int m = 0; m < n_t; ++m) {
      sol.fl.modes_t[m].resize(dim, dim);
      for (int k = 0; k < dim; ++k) sol.fl.modes_t[m].col(k) = stored_modes[m].col(order[k]);
    }
  }

  auto& tensor = sol.res_elements;
  tensor.kmax = kmax;
  tensor.n_t = n_t;
  tensor.omega_d = h.omega_d;
  tensor.quasienergies = sol.fl.quasienergies;
  tensor.comp.assign(2 * kmax + 1, MatrixXcd(dim, dim));
  double kept = 0.0;
  for (int k = 0; k <= 2 * kmax; ++k) {
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) tensor.comp[k](r, c) = comp[k](order[r], order[c]);
    }
    kept += tensor.comp[k].squaredNorm();
  }
  // Parseval: total weight over all harmonics equals the time-series average.
  tensor.discarded_weight =
      series_weight > 0.0 ? std::max(0.0, (series_weight - kept) / series_weight) : 0.0;
  if (opts.check_alias && tensor.discarded_weight > opts.alias_tol) {
    throw AccuracyError("resonator tensor aliasing beyond kmax: " +
                        std::to_string(tensor.discarded_weight));
  }
  return sol;
}

std::vector<GridPoint> grid(const CqedSolution& sol, const VectorXd* steady) {
  const int dim = static_cast<int>(sol.nt_avg.size());
  std::vector<GridPoint> points(dim);
  for (int k = 0; k < dim; ++k) {
    points[k] = {k,
                 sol.nt_avg(k),
                 sol.nr_avg(k),
                 sol.purity(k),
                 steady ? (*steady)(k) : 0.0,
                 sol.comm_error(k)};
  }
  return points;
}

ResonatorSteadyState resonator_rates_and_steady_state(const CqedSolution& sol, double kappa,
                                                      double nr_cutoff, double bath_cutoff) {
  const int dim = static_cast<int>(sol.nt_avg.size());
  const double omega_a = sol.params.omega_a;
  if (bath_cutoff <= 0.0) bath_cutoff = 10.0 * omega_a;
  const auto bath = dissipation::calibrated_bath(0.0, omega_a, bath_cutoff, kappa);

  ResonatorSteadyState out;
  out.rate_matrix = dissipation::rates(sol.res_elements, bath);
  for (int i = 0; i < dim; ++i) {
    if (sol.nr_avg(i) >= nr_cutoff) {
      out.rate_matrix.even.row(i).setZero();
      out.rate_matrix.even.col(i).setZero();
      out.rate_matrix.odd.row(i).setZero();
      out.rate_matrix.odd.col(i).setZero();
    }
  }

  int vacuum = 0;
  (sol.nt_avg + sol.nr_avg).minCoeff(&vacuum);
  out.vacuum_mode = vacuum;
  out.steady = dissipation::steady_state(out.rate_matrix.total(), vacuum);

  double entropy = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double pi = out.steady.populations(i);
    if (pi > 0.0) entropy -= pi * std::log(pi);
  }
  out.n_occ = std::exp(entropy);
  out.nt_ss = out.steady.populations.dot(sol.nt_avg);
  out.nr_ss = out.steady.populations.dot(sol.nr_avg);
  return out;
}

std::vector<PullRecord> cavity_pull_spectroscopy(const CqedSolution& sol, double purity_min,
                                                 double nr_max) {
  const auto& tensor = sol.res_elements;
  const int dim = tensor.dim();
  const double omega_a = sol.params.omega_a;
  const double omega_d = tensor.omega_d;
  std::vector<PullRecord> records;
  for (int i = 0; i < dim; ++i) {
    if (sol.purity(i) <= purity_min || sol.nr_avg(i) > nr_max) continue;
    double best_w = 0.0, best_f = 0.0;
    for (int k = -tensor.kmax; k <= tensor.kmax; ++k) {
      const auto& nk = tensor.at(k);
      for (int j = 0; j < dim; ++j) {
        if (j == i) continue;
        const double f = std::abs(tensor.delta(i, j, k));
        if (std::abs(f - omega_a) > 0.5 * omega_d) continue;
        const double w = std::norm(nk(i, j));
        if (w > best_w) {
          best_w = w;
          best_f = f;
        }
      }
    }
    if (best_w > 0.0) {
      records.push_back({i, best_f - omega_a, best_w, sol.purity(i)});
    }
  }
  return records;
}

VectorXd perturbative_pull(const dissipation::MatrixElementTensor& transmon_elements,
                           double g, double omega_a, std::vector<int>* divergent_states) {
  const int dim = transmon_elements.dim();
  const double guard = kTwoPi * 0.01;  // 10 MHz
  VectorXd chi = VectorXd::Zero(dim);
  for (int i = 0; i < dim; ++i) {
    bool divergent = false;
    for (int k = -transmon_elements.kmax; k <= transmon_elements.kmax; ++k) {
      const auto& nk = transmon_elements.at(k);
      for (int j = 0; j < dim; ++j) {
        const double delta = transmon_elements.delta(i, j, k);
        const double w2 = std::norm(nk(i, j));
        if (w2 == 0.0) continue;
        if (std::abs(omega_a - delta) < guard || std::abs(omega_a + delta) < guard) {
          divergent = true;
          continue;
        }
        chi(i) += g * g * w2 * (1.0 / (omega_a + delta) - 1.0 / (omega_a - delta));
      }
    }
    if (divergent && divergent_states) divergent_states->push_back(i);
  }
  return chi;
}

FoldedSpectrum undriven_spectrum_folded(const CqedParams& p, bool with_kappa,
                                        const model::ChargeBasis& basis) {
  CqedParams params = p;
  params.transmon.eps_d = 0.0;
  params.transmon.omega_d = params.omega_a;  // placeholder; unused when undriven
  const floquet::DrivenHamiltonian h = make_cqed_hamiltonian(params, basis);
  const int dim = h.dim();

  Eigen::VectorXd nt_diag(dim), nr_diag(dim);
  for (int it = 0; it < p.dim_t; ++it) {
    for (int nr = 0; nr < p.dim_r; ++nr) {
      nt_diag(it * p.dim_r + nr) = it;
      nr_diag(it * p.dim_r + nr) = nr;
    }
  }

  Eigen::VectorXd energies(dim);
  MatrixXcd vectors(dim, dim);
  if (with_kappa && p.kappa > 0.0) {
    MatrixXcd hc = h.h_static.cast<complex<double>>();
    hc -= complex<double>(0, 0.5 * p.kappa) * nr_diag.asDiagonal().toDenseMatrix().cast<complex<double>>();
    auto eig = linalg::general_eig(hc);
    for (int k = 0; k < dim; ++k) {
      energies(k) = eig.values(k).real();
      vectors.col(k) = eig.vectors.col(k).normalized();
    }
  } else {
    auto eig = linalg::sym_eig(h.h_static);
    energies = eig.values;
    vectors = eig.vectors.cast<complex<double>>();
  }

  FoldedSpectrum spec;
  std::vector<double> e, nr, nt;
  for (int k = 0; k < dim; ++k) {
    const Eigen::VectorXd w = vectors.col(k).cwiseAbs2();
    const double nt_k = w.dot(nt_diag);
    if (nt_k >= 20.0) continue;
    e.push_back(floquet::fold_quasienergy(energies(k), p.omega_a));
    nt.push_back(nt_k);
    nr.push_back(w.dot(nr_diag));
  }
  spec.energy = Eigen::Map<Eigen::VectorXd>(e.data(), e.size());
  spec.nr = Eigen::Map<Eigen::VectorXd>(nr.data(), nr.size());
  spec.nt = Eigen::Map<Eigen::VectorXd>(nt.data(), nt.size());
  return spec;
}

DipoleStats dipole_statistics(const MatrixXcd& n_floquet, int m_states) {
  const int dim = static_cast<int>(n_floquet.rows());
  if (m_states > dim) throw InvalidParameter("dipole_statistics: M exceeds state count");
  const int m = m_states;
  DipoleStats stats;
  stats.per_state.resize(m);
  stats.per_state_offdiag.resize(m);
  double acc = 0.0, acc_off = 0.0;
  for (int i = 0; i < m; ++i) {
    double s = 0.0, s_off = 0.0;
    for (int j = 0; j < m; ++j) {
      const double w = std::norm(n_floquet(i, j));
      s += w;
      if (j != i) s_off += w;
    }
    stats.per_state(i) = std::sqrt(s / m);
    stats.per_state_offdiag(i) = std::sqrt(s_off / (m - 1));
    acc += s / m;
    acc_off += s_off / (m - 1);
  }
  stats.mean = std::sqrt(acc / m);
  stats.mean_offdiag = std::sqrt(acc_off / m);
  stats.rmt_prediction = std::sqrt(m / 12.0);
  // Exact projector identity: sum of m^2 over the charge window |m| <= (M-1)/2.
  const int half = (m - 1) / 2;
  double sum_sq = 0.0;
  for (int q = -half; q <= half; ++q) sum_sq += static_cast<double>(q) * q;
  stats.projector_identity = std::sqrt(sum_sq) / m;
  return stats;
}

CriticalPhotonNumber critical_photon_number(double g, double omega_d, int n_ch) {
  if (n_ch < 1) throw InvalidParameter("N_ch must be at least 1");
  CriticalPhotonNumber out;
  out.g_eff = 2.0 * g * std::sqrt(n_ch / 12.0);
  out.delta_eff = omega_d / n_ch;
  out.n_crit = 3.0 * omega_d * omega_d / (g * g * std::pow(n_ch, 3));
  out.n_crit_balance = out.n_crit - 1.0;
  return out;
}

}  // namespace quasichaos::cqed
