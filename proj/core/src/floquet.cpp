#include "quasichaos/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "quasichaos/errors.hpp"

namespace quasichaos::floquet {

using std::complex;

MatrixXd DrivenHamiltonian::at(double t) const {
  if (eps_d == 0.0) return h_static;
  return h_static + (eps_d * std::cos(omega_d * t)) * h_drive;
}

DrivenHamiltonian make_transmon_hamiltonian(const model::TransmonParams& p,
                                            const model::ChargeBasis& basis) {
  DrivenHamiltonian h;
  h.h_static = model::build_static_hamiltonian(p, basis);
  h.h_drive = model::charge_operator(basis);
  h.eps_d = p.eps_d;
  h.omega_d = p.omega_d;
  return h;
}

linalg::PropagatorState propagate_period(
    const DrivenHamiltonian& h, int n_steps, int n_samples,
    const std::function<void(int, const linalg::PropagatorState&)>& on_sample,
    linalg::PropagatorState* u_half) {
  linalg::pin_blas_single_thread();
  if (n_steps < 256) throw ConfigError("propagator needs n_steps >= 256");
  if (n_samples > 0 && n_steps % n_samples != 0) {
    throw ConfigError("n_steps must be a multiple of the sample count");
  }
  if (n_steps % 2 != 0) ++n_steps;

  const double dt = h.period() / n_steps;
  const int stride = n_samples > 0 ? n_steps / n_samples : 0;
  linalg::PropagatorState u(h.dim());
  for (int step = 0; step < n_steps; ++step) {
    if (stride > 0 && step % stride == 0) on_sample(step / stride, u);
    if (u_half && step == n_steps / 2) *u_half = u;
    const auto eig = linalg::sym_eig(h.at((step + 0.5) * dt));
    linalg::apply_step(u, eig, dt);
  }
  return u;
}

MatrixXcd propagator(const DrivenHamiltonian& h, int n_steps) {
  return propagate_period(h, n_steps).matrix();
}

double unitarity_defect(const MatrixXcd& u) {
  const MatrixXcd g = u.adjoint() * u - MatrixXcd::Identity(u.rows(), u.cols());
  return g.cwiseAbs().maxCoeff();
}

double fold_quasienergy(double eps, double omega) {
  double r = std::remainder(eps, omega);
  if (r <= -0.5 * omega) r += omega;
  return r;
}

VectorXi parity_permutation(const model::ChargeBasis& basis, double ng) {
  const double two_ng = 2.0 * ng;
  const long k = std::lround(two_ng);
  if (std::abs(two_ng - k) > 1e-9) {
    throw InvalidParameter("parity permutation requires n_g = 0 or 0.5 (mod 1)");
  }
  const int d = basis.dim();
  VectorXi perm(d);
  for (int i = 0; i < d; ++i) {
    const long target = k - basis.label(i);
    perm(i) = (std::abs(target) <= basis.cutoff) ? basis.index(static_cast<int>(target)) : i;
  }
  return perm;
}

namespace {

struct Decomposition {
  VectorXd quasi;
  MatrixXcd modes0;
  VectorXi parity;  // empty unless parity-adapted
  double parity_defect = 0.0;
};

Decomposition decompose_plain(const MatrixXcd& u_full, double omega) {
  const double period = kTwoPi / omega;
  auto eig = linalg::unitary_eig(u_full);
  Decomposition d;
  d.modes0 = std::move(eig.vectors);
  d.quasi.resize(eig.values.size());
  for (int i = 0; i < d.quasi.size(); ++i) {
    d.quasi(i) = fold_quasienergy(-std::arg(eig.values(i)) / period, omega);
  }
  return d;
}

// Parity refinement against Q = R U(T/2,0), which commutes with U_F and
// squares to it. U_F eigenvectors stay primary (they are exactly periodic);
// Q resolves near-degenerate eigenphase clusters that plain diagonalization
// may mix across parity sectors, and supplies the sigma = <Q> e^{i eps T/2}
// labels. Modes with |sigma| off the unit circle (e.g. boundary charge states
// whose mirror falls outside the truncation) keep label 0.
void refine_parity(Decomposition& d, const MatrixXcd& u_full, const MatrixXcd& u_half,
                   const VectorXi& perm, double omega) {
  const double period = kTwoPi / omega;
  const int n = static_cast<int>(d.quasi.size());
  MatrixXcd q(u_half.rows(), u_half.cols());
  for (int r = 0; r < q.rows(); ++r) q.row(r) = u_half.row(perm(r));

  // Cluster modes whose U_F eigenvalues nearly coincide and diagonalize Q on
  // each cluster, keeping the span (still an eigenspace of U_F).
  VectorXcd lambda(n);
  for (int k = 0; k < n; ++k) {
    lambda(k) = std::exp(complex<double>(0, -d.quasi(k) * period));
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return std::arg(lambda(a)) < std::arg(lambda(b)); });
  const double gap_tol = 1e-8;
  std::vector<std::vector<int>> clusters;
  for (int idx = 0; idx < n; ++idx) {
    const int k = order[idx];
    if (!clusters.empty() &&
        std::abs(lambda(k) - lambda(clusters.back().back())) < gap_tol) {
      clusters.back().push_back(k);
    } else {
      clusters.push_back({k});
    }
  }
  if (clusters.size() > 1 &&
      std::abs(lambda(clusters.front().front()) - lambda(clusters.back().back())) < gap_tol) {
    for (int k : clusters.back()) clusters.front().push_back(k);  // phase wraparound
    clusters.pop_back();
  }
  for (const auto& cluster : clusters) {
    const int s = static_cast<int>(cluster.size());
    if (s < 2) continue;
    MatrixXcd span(n, s);
    for (int c = 0; c < s; ++c) span.col(c) = d.modes0.col(cluster[c]);
    const MatrixXcd q_block = span.adjoint() * (q * span);
    const auto block_eig = linalg::unitary_eig(q_block);
    const MatrixXcd rotated = span * block_eig.vectors;
    for (int c = 0; c < s; ++c) d.modes0.col(cluster[c]) = rotated.col(c);
  }

  // Sigma labels from the expectation of Q; +-1 means parity-definite.
  const MatrixXcd q_modes = q * d.modes0;
  d.parity.resize(n);
  d.parity_defect = 0.0;
  for (int k = 0; k < n; ++k) {
    const complex<double> sigma =
        (d.modes0.col(k).adjoint() * q_modes.col(k))(0, 0) *
        std::exp(complex<double>(0, 0.5 * d.quasi(k) * period));
    if (std::abs(std::abs(sigma) - 1.0) < 0.01) {
      d.parity(k) = sigma.real() >= 0.0 ? 1 : -1;
      d.parity_defect = std::max(d.parity_defect, std::abs(std::abs(sigma) - 1.0));
    } else {
      d.parity(k) = 0;
    }
  }
  // Re-verify that refined columns are still eigenvectors of U_F.
  const MatrixXcd residual = u_full * d.modes0 - d.modes0 * lambda.asDiagonal();
  if (residual.cwiseAbs().maxCoeff() > 1e-6) {
    throw AccuracyError("parity refinement left a non-eigenvector residual");
  }
}

std::vector<int> mean_energy_order(const VectorXd& mean_energy, const VectorXd& quasi) {
  std::vector<int> order(mean_energy.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (mean_energy(a) != mean_energy(b)) return mean_energy(a) < mean_energy(b);
    return quasi(a) < quasi(b);
  });
  return order;
}

FloquetSolution solve_impl(const DrivenHamiltonian& h, const SolveOptions& opts) {
  const int dim = h.dim();
  const int n_times = std::max(opts.n_times, 1);

  std::vector<MatrixXcd> u_samples;
  u_samples.reserve(n_times);
  linalg::PropagatorState u_half(dim);
  auto collect = [&](int, const linalg::PropagatorState& s) {
    u_samples.push_back(s.matrix());
  };
  const auto u_final =
      propagate_period(h, opts.n_steps, n_times, collect, opts.parity_perm ? &u_half : nullptr);

  const MatrixXcd u_full = u_final.matrix();
  Decomposition dec = decompose_plain(u_full, h.omega_d);
  if (opts.parity_perm) {
    refine_parity(dec, u_full, u_half.matrix(), *opts.parity_perm, h.omega_d);
  }

  // Modes at sample times and the mean energy per cycle (uniform average of a
  // periodic integrand == trapezoid).
  const double period = h.period();
  std::vector<MatrixXcd> modes_t(n_times);
  VectorXd mean = VectorXd::Zero(dim);
  for (int m = 0; m < n_times; ++m) {
    const double t = period * m / n_times;
    VectorXcd phases(dim);
    for (int k = 0; k < dim; ++k) {
      phases(k) = std::exp(complex<double>(0, dec.quasi(k) * t));
    }
    modes_t[m] = u_samples[m] * dec.modes0 * phases.asDiagonal();
    const MatrixXd ht = h.at(t);
    const MatrixXd re = modes_t[m].real(), im = modes_t[m].imag();
    mean += ((re.transpose() * (ht * re)).diagonal() +
             (im.transpose() * (ht * im)).diagonal()) /
            n_times;
  }

  const auto order = mean_energy_order(mean, dec.quasi);
  FloquetSolution sol;
  sol.omega_d = h.omega_d;
  sol.eps_d = h.eps_d;
  sol.n_steps = opts.n_steps;
  sol.n_times = n_times;
  sol.parity_defect = dec.parity_defect;
  sol.quasienergies.resize(dim);
  sol.mean_energy.resize(dim);
  sol.modes0.resize(dim, dim);
  if (dec.parity.size() > 0) sol.parity.resize(dim);
  for (int k = 0; k < dim; ++k) {
    sol.quasienergies(k) = dec.quasi(order[k]);
    sol.mean_energy(k) = mean(order[k]);
    sol.modes0.col(k) = dec.modes0.col(order[k]);
    if (dec.parity.size() > 0) sol.parity(k) = dec.parity(order[k]);
  }
  if (opts.store_modes) {
    sol.modes_t.resize(n_times);
    for (int m = 0; m < n_times; ++m) {
      sol.modes_t[m].resize(dim, dim);
      for (int k = 0; k < dim; ++k) sol.modes_t[m].col(k) = modes_t[m].col(order[k]);
    }
  }

  // Flag eigenphase ties; the ordering above is already deterministic.
  for (int a = 0; a < dim; ++a) {
    for (int b = a + 1; b < dim; ++b) {
      const double gap = std::abs(
          std::remainder(sol.quasienergies(a) - sol.quasienergies(b), sol.omega_d));
      if (gap < 1e-12 * sol.omega_d) sol.degeneracies.emplace_back(a, b);
    }
  }
  return sol;
}

}  // namespace

FloquetSolution solve(const DrivenHamiltonian& h, const SolveOptions& opts) {
  FloquetSolution sol = solve_impl(h, opts);
  if (opts.check_convergence) {
    SolveOptions refined = opts;
    refined.check_convergence = false;
    refined.store_modes = false;
    refined.n_steps = 2 * opts.n_steps;
    const FloquetSolution fine = solve_impl(h, refined);
    VectorXd a = sol.quasienergies, b = fine.quasienergies;
    std::sort(a.data(), a.data() + a.size());
    std::sort(b.data(), b.data() + b.size());
    double drift = 0.0;
    for (int i = 0; i < a.size(); ++i) {
      const double d = std::abs(std::remainder(a(i) - b(i), sol.omega_d));
      drift = std::max(drift, d);
    }
    if (drift > opts.convergence_tol * h.omega_d) {
      throw AccuracyError("propagator not converged: quasienergy drift " +
                          std::to_string(drift / h.omega_d) + " omega_d between n_steps=" +
                          std::to_string(opts.n_steps) + " and 2x");
    }
  }
  return sol;
}

FloquetSolution solve_transmon(const model::TransmonParams& p,
                               const model::ChargeBasis& basis, SolveOptions opts) {
  const DrivenHamiltonian h = make_transmon_hamiltonian(p, basis);
  const double two_ng = 2.0 * p.ng;
  VectorXi perm;
  if (!opts.parity_perm && std::abs(two_ng - std::lround(two_ng)) < 1e-9) {
    perm = parity_permutation(basis, p.ng);
    opts.parity_perm = &perm;
  }
  return solve(h, opts);
}

TrackingResult track(const std::vector<FloquetSolution>& sweep, const MatrixXcd& seeds,
                     double confidence) {
  if (sweep.empty()) throw InvalidParameter("track: empty sweep");
  const int n_seeds = static_cast<int>(seeds.cols());
  TrackingResult res;
  res.per_seed.assign(n_seeds, {});
  res.loss_index.assign(n_seeds, static_cast<int>(sweep.size()));

  for (int s = 0; s < n_seeds; ++s) {
    VectorXcd ref = seeds.col(s);
    bool lost = false;
    for (size_t step = 0; step < sweep.size(); ++step) {
      const MatrixXcd& modes = sweep[step].modes0;
      const VectorXd overlaps = (modes.adjoint() * ref).cwiseAbs();
      int best = 0;
      const double ov = overlaps.maxCoeff(&best);
      const bool ok = ov >= confidence;
      res.per_seed[s].push_back({best, ov, ok});
      if (!ok && !lost) {
        lost = true;
        res.loss_index[s] = static_cast<int>(step);
      }
      ref = modes.col(best);
    }
  }
  return res;
}

namespace {

// Continuity-based Brillouin unfolding of a folded transition frequency.
double unfold_near(double folded, double omega, double previous) {
  const double base = folded + omega * std::round((previous - folded) / omega);
  return base;
}

struct StarkSweeper {
  model::TransmonParams params;
  model::ChargeBasis basis;
  SolveOptions opts;
  VectorXi perm;
  MatrixXcd ref0, ref1;  // last confidently tracked modes
  double undriven_transition = 0.0;
  double unfolded_prev = 0.0;

  void init() {
    const double two_ng = 2.0 * params.ng;
    if (std::abs(two_ng - std::lround(two_ng)) < 1e-9) {
      perm = parity_permutation(basis, params.ng);
      opts.parity_perm = &perm;
    }
    const auto stat = model::diagonalize_static(params, basis);
    ref0 = stat.vectors.col(0).cast<std::complex<double>>();
    ref1 = stat.vectors.col(1).cast<std::complex<double>>();
    undriven_transition = stat.values(1) - stat.values(0);
    unfolded_prev = undriven_transition;
  }

  // Returns {shift, confident}; updates tracking references on success.
  std::pair<double, bool> shift_at(double eps_d) {
    model::TransmonParams p = params;
    p.eps_d = eps_d;
    const FloquetSolution sol = solve_transmon(p, basis, opts);
    const VectorXd ov0 = (sol.modes0.adjoint() * ref0).cwiseAbs();
    const VectorXd ov1 = (sol.modes0.adjoint() * ref1).cwiseAbs();
    int i0 = 0, i1 = 0;
    const double m0 = ov0.maxCoeff(&i0);
    const double m1 = ov1.maxCoeff(&i1);
    const bool ok = m0 >= kTrackingConfidence && m1 >= kTrackingConfidence && i0 != i1;
    if (!ok) return {0.0, false};
    const double folded = sol.quasienergies(i1) - sol.quasienergies(i0);
    const double unfolded = unfold_near(folded, sol.omega_d, unfolded_prev);
    unfolded_prev = unfolded;
    ref0 = sol.modes0.col(i0);
    ref1 = sol.modes0.col(i1);
    return {unfolded - undriven_transition, true};
  }
};

}  // namespace

StarkCurve ac_stark_shift(const model::TransmonParams& base, const model::ChargeBasis& basis,
                          double eps_d_max, double eps_d_step, const SolveOptions& opts) {
  if (!(eps_d_step > 0.0)) throw InvalidParameter("eps_d_step must be positive");
  StarkSweeper sweeper{base, basis, opts, {}, {}, {}, 0.0, 0.0};
  sweeper.init();
  StarkCurve curve;
  for (double eps = 0.0; eps <= eps_d_max + 0.5 * eps_d_step; eps += eps_d_step) {
    const auto [shift, ok] = sweeper.shift_at(eps);
    curve.eps_d.push_back(eps);
    curve.shift.push_back(ok ? shift : 0.0);
    curve.confident.push_back(ok);
    if (ok) {
      curve.last_confident = static_cast<int>(curve.eps_d.size()) - 1;
    } else {
      break;  // curve truncated once tracking is lost
    }
  }
  return curve;
}

double amplitude_for_shift(const model::TransmonParams& base, const model::ChargeBasis& basis,
                           double target, double tol, const SolveOptions& opts) {
  if (target == 0.0) return 0.0;
  StarkSweeper sweeper{base, basis, opts, {}, {}, {}, 0.0, 0.0};
  sweeper.init();
  const double omega_p = model::rescale(base).omega_p;
  const double step = 0.02 * omega_p;

  // March until the target is bracketed, then bisect within the last interval.
  double lo = 0.0, shift_lo = 0.0;
  double hi = 0.0, shift_hi = 0.0;
  bool bracketed = false;
  for (double eps = step; eps <= 3.0 * omega_p; eps += step) {
    const auto [shift, ok] = sweeper.shift_at(eps);
    if (!ok) throw ConfigError("ac-Stark target not reached before tracking loss");
    if ((shift - target) * (shift_lo - target) <= 0.0) {
      hi = eps;
      shift_hi = shift;
      bracketed = true;
      break;
    }
    lo = eps;
    shift_lo = shift;
  }
  if (!bracketed) throw ConfigError("ac-Stark target not bracketed within sweep range");

  while (std::abs(shift_hi - target) > tol && hi - lo > 1e-12 * omega_p) {
    const double mid = 0.5 * (lo + hi);
    const auto [shift, ok] = sweeper.shift_at(mid);
    if (!ok) throw ConfigError("tracking lost during bisection");
    if ((shift - target) * (shift_lo - target) <= 0.0) {
      hi = mid;
      shift_hi = shift;
    } else {
      lo = mid;
      shift_lo = shift;
    }
  }
  return hi;
}

}  // namespace quasichaos::floquet
