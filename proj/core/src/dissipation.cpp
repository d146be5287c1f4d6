#include "quasichaos/dissipation.hpp"

#include <cmath>
#include <complex>
#include <numeric>

#include "quasichaos/constants.hpp"
#include "quasichaos/errors.hpp"
#include "quasichaos/linalg.hpp"

namespace quasichaos::dissipation {

using std::complex;

std::complex<double> MatrixElementTensor::reconstruct(int i, int j, double t) const {
  complex<double> acc = 0.0;
  for (int k = -kmax; k <= kmax; ++k) {
    acc += at(k)(i, j) * std::exp(complex<double>(0, k * omega_d * t));
  }
  return acc;
}

MatrixElementTensor matrix_elements(const floquet::FloquetSolution& sol, const MatrixXd& op,
                                    int kmax, double alias_tol) {
  if (sol.modes_t.empty()) throw InvalidParameter("matrix_elements needs stored modes");
  const int n_t = sol.n_times;
  if (kmax <= 0) kmax = n_t / 4;
  if (n_t < 4 * kmax) throw ConfigError("n_times must be >= 4*kmax");

  const int dim = static_cast<int>(sol.modes0.cols());
  // Time series A_m = Phi(t_m)^dag op Phi(t_m), then a full DFT so that the
  // weight in the discarded bins is known.
  std::vector<MatrixXcd> series(n_t);
  for (int m = 0; m < n_t; ++m) {
    series[m] = sol.modes_t[m].adjoint() * (op * sol.modes_t[m]);
  }

  MatrixElementTensor tensor;
  tensor.kmax = kmax;
  tensor.n_t = n_t;
  tensor.omega_d = sol.omega_d;
  tensor.quasienergies = sol.quasienergies;
  tensor.comp.assign(2 * kmax + 1, MatrixXcd::Zero(dim, dim));

  double kept = 0.0, total = 0.0;
  MatrixXcd bin(dim, dim);
  for (int k = -n_t / 2; k < n_t / 2; ++k) {
    bin.setZero();
    for (int m = 0; m < n_t; ++m) {
      const double angle = -kTwoPi * k * m / n_t;
      bin += series[m] * std::exp(complex<double>(0, angle));
    }
    bin /= n_t;
    const double w = bin.squaredNorm();
    total += w;
    if (std::abs(k) <= kmax) {
      kept += w;
      tensor.comp[kmax + k] = bin;
    }
  }
  tensor.discarded_weight = total > 0.0 ? (total - kept) / total : 0.0;
  if (tensor.discarded_weight > alias_tol) {
    throw AccuracyError("matrix-element tensor aliasing: " +
                        std::to_string(tensor.discarded_weight) +
                        " of the Fourier weight lies outside |k| <= " + std::to_string(kmax));
  }
  return tensor;
}

void BathSpec::validate() const {
  if (temperature_K < 0.0) throw InvalidParameter("bath temperature must be >= 0");
  if (!(cutoff > 0.0)) throw InvalidParameter("bath cutoff must be positive");
}

double BathSpec::spectral(double x) const {
  const double a = std::abs(x);
  return scale * a * std::exp(-a / cutoff);
}

double BathSpec::thermal_occupation(double x) const {
  if (temperature_K <= 0.0) return 0.0;
  const double e = thermal_exponent(std::abs(x), temperature_K);
  if (e > 700.0) return 0.0;
  return 1.0 / std::expm1(e);
}

BathSpec calibrated_bath(double temperature_K, double omega_ref, double cutoff,
                         double rate_scale) {
  BathSpec bath;
  bath.temperature_K = temperature_K;
  bath.cutoff = cutoff;
  bath.scale = 1.0;
  bath.scale = rate_scale / bath.spectral(omega_ref);
  bath.validate();
  return bath;
}

RateMatrix rates(const MatrixElementTensor& elements, const BathSpec& bath) {
  bath.validate();
  const int dim = elements.dim();
  RateMatrix rm;
  rm.even = MatrixXd::Zero(dim, dim);
  rm.odd = MatrixXd::Zero(dim, dim);
  const double kt =
      bath.temperature_K > 0.0
          ? kTwoPi * kBoltzmannGHzPerK * bath.temperature_K
          : 0.0;
  for (int k = -elements.kmax; k <= elements.kmax; ++k) {
    const MatrixXcd& n_k = elements.at(k);
    MatrixXd& channel = (((k % 2) + 2) % 2 == 0) ? rm.even : rm.odd;
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        if (i == j) continue;
        const double delta = elements.delta(i, j, k);
        const double w2 = std::norm(n_k(i, j));
        if (w2 == 0.0) continue;
        double weight;
        if (std::abs(delta) < 1e-14) {
          weight = bath.scale * kt;  // x n_B(x) J'(0) limit of the upward part
        } else {
          const double theta = delta > 0.0 ? 1.0 : 0.0;
          weight = (theta + bath.thermal_occupation(delta)) * bath.spectral(delta);
        }
        channel(i, j) += w2 * weight;
      }
    }
  }
  return rm;
}

namespace {

std::vector<std::vector<int>> connected_components(const MatrixXd& gamma) {
  const int n = static_cast<int>(gamma.rows());
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> out;
  for (int seed = 0; seed < n; ++seed) {
    if (comp[seed] >= 0) continue;
    std::vector<int> stack{seed};
    comp[seed] = static_cast<int>(out.size());
    std::vector<int> members;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      members.push_back(v);
      for (int u = 0; u < n; ++u) {
        if (comp[u] < 0 && (gamma(u, v) > 0.0 || gamma(v, u) > 0.0)) {
          comp[u] = comp[seed];
          stack.push_back(u);
        }
      }
    }
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

// log-sum-exp over finite entries; -inf entries are skipped.
double log_sum_exp(const std::vector<double>& v) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : v) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double x : v) {
    if (std::isfinite(x)) s += std::exp(x - mx);
  }
  return mx + std::log(s);
}

}  // namespace

SteadyState steady_state(const MatrixXd& gamma, int anchor) {
  const int n = static_cast<int>(gamma.rows());
  SteadyState out;
  out.components = connected_components(gamma);
  out.multi_component = out.components.size() > 1;

  const auto anchor_comp = [&]() -> const std::vector<int>& {
    for (const auto& c : out.components) {
      if (std::binary_search(c.begin(), c.end(), anchor)) return c;
    }
    return out.components.front();
  }();

  out.populations = VectorXd::Zero(n);
  const int s = static_cast<int>(anchor_comp.size());
  if (s == 1) {
    out.populations(anchor_comp[0]) = 1.0;
    return out;
  }

  // Generator restricted to the component: A = Gamma - diag(column outflow).
  MatrixXd a(s, s);
  for (int c = 0; c < s; ++c) {
    double outflow = 0.0;
    for (int r = 0; r < s; ++r) {
      a(r, c) = gamma(anchor_comp[r], anchor_comp[c]);
      outflow += gamma(anchor_comp[r], anchor_comp[c]);
    }
    a(c, c) = -outflow;
  }

  // Stationary weights are the diagonal cofactors of A (all of one sign);
  // log-space determinants keep exponentially small tails exact.
  std::vector<double> logw(s);
  MatrixXd minor(s - 1, s - 1);
  for (int i = 0; i < s; ++i) {
    for (int r = 0, rr = 0; r < s; ++r) {
      if (r == i) continue;
      for (int c = 0, cc = 0; c < s; ++c) {
        if (c == i) continue;
        minor(rr, cc) = a(r, c);
        ++cc;
      }
      ++rr;
    }
    const auto det = linalg::log_det(minor);
    logw[i] = det.sign == 0 ? -std::numeric_limits<double>::infinity() : det.log_abs;
  }
  const double lse = log_sum_exp(logw);
  for (int i = 0; i < s; ++i) {
    const double p = std::isfinite(logw[i]) ? std::exp(logw[i] - lse) : 0.0;
    out.populations(anchor_comp[i]) = p;
  }

  // Normalized stationarity residual on the solved component.
  VectorXd p(s);
  for (int i = 0; i < s; ++i) p(i) = out.populations(anchor_comp[i]);
  const double scale = a.cwiseAbs().maxCoeff() * p.maxCoeff();
  out.residual = scale > 0.0 ? (a * p).cwiseAbs().maxCoeff() / scale : 0.0;
  return out;
}

DephasingResult dephasing_rate(const MatrixElementTensor& elements, int idx0, int idx1,
                               const NoiseSpec& noise, bool tracked_ok) {
  DephasingResult res;
  res.confident = tracked_ok;
  const complex<double> g0 = elements.at(0)(idx1, idx1) - elements.at(0)(idx0, idx0);
  res.one_over_f = noise.charge_amplitude * 2.0 * std::abs(g0) * noise.log_factor;
  for (int k = -elements.kmax; k <= elements.kmax; ++k) {
    if (k == 0) continue;
    const complex<double> gk =
        elements.at(k)(idx1, idx1) - elements.at(k)(idx0, idx0);
    const double omega = k * elements.omega_d;
    // Quantum spectral function: emission (omega > 0) carries 1 + n_B,
    // absorption n_B; same ohmic envelope as the rate bath.
    const double nb = noise.bath.thermal_occupation(omega);
    const double s = noise.dielectric_scale * noise.bath.spectral(omega) *
                     (omega > 0.0 ? 1.0 + nb : nb);
    res.dielectric += 2.0 * s * std::norm(gk);
  }
  res.total = res.one_over_f + res.dielectric;
  return res;
}

}  // namespace quasichaos::dissipation
