#include "quasichaos/chaosmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "quasichaos/errors.hpp"
#include "quasichaos/sweep.hpp"

namespace quasichaos::chaosmetrics {

std::vector<int> select_chaotic_window(const floquet::FloquetSolution& sol, double lo,
                                       double hi, double ej) {
  std::vector<int> idx;
  for (int k = 0; k < sol.mean_energy.size(); ++k) {
    const double e = floquet::well_energy_over_ej(sol.mean_energy(k), ej);
    if (e > lo && e < hi) idx.push_back(k);
  }
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return sol.quasienergies(a) < sol.quasienergies(b);
  });
  return idx;
}

VectorXd spacings(const VectorXd& sorted_quasienergies, double omega_d) {
  const int n = static_cast<int>(sorted_quasienergies.size());
  if (n < 2) throw InvalidParameter("spacings need at least two levels");
  const double mean_spacing = omega_d / n;
  VectorXd out(n);
  for (int i = 0; i + 1 < n; ++i) {
    out(i) = (sorted_quasienergies(i + 1) - sorted_quasienergies(i)) / mean_spacing;
  }
  // Wraparound across the Brillouin-zone boundary; unnormalized spacings
  // telescope to exactly omega_d.
  out(n - 1) =
      (sorted_quasienergies(0) - sorted_quasienergies(n - 1) + omega_d) / mean_spacing;
  return out;
}

double SpacingEnsemble::mean() const {
  if (pooled.empty()) return 0.0;
  return std::accumulate(pooled.begin(), pooled.end(), 0.0) / pooled.size();
}

double SpacingEnsemble::mean_gap_ratio() const {
  double sum = 0.0;
  int n = 0;
  size_t offset = 0;
  for (int count : counts) {
    for (int i = 0; i + 1 < count; ++i) {
      const double a = pooled[offset + i], b = pooled[offset + i + 1];
      const double hi = std::max(a, b);
      if (hi > 0.0) {
        sum += std::min(a, b) / hi;
        ++n;
      }
    }
    offset += count;
  }
  return n > 0 ? sum / n : 0.0;
}

SpacingEnsemble ensemble(const model::TransmonParams& base, const model::ChargeBasis& basis,
                         const EnsembleOptions& opts) {
  if (opts.ng_samples < 20) throw ConfigError("ensemble needs at least 20 n_g samples");

  struct Sample {
    double ng;
    std::vector<double> spacings;
  };
  const auto outcomes = sweep::map<Sample>(opts.ng_samples, opts.workers, [&](int j) {
    model::TransmonParams p = base;
    p.ng = 0.5 * (j + 0.5) / opts.ng_samples;
    const auto sol = floquet::solve_transmon(p, basis, opts.solve);
    const auto idx = select_chaotic_window(sol, opts.window_lo, opts.window_hi, p.ej);
    Sample s{p.ng, {}};
    if (idx.size() >= 2) {
      VectorXd quasi(idx.size());
      for (size_t i = 0; i < idx.size(); ++i) quasi(i) = sol.quasienergies(idx[i]);
      const VectorXd sp = spacings(quasi, p.omega_d);
      s.spacings.assign(sp.data(), sp.data() + sp.size());
    }
    return s;
  });

  SpacingEnsemble ens;
  for (const auto& outcome : outcomes) {
    const Sample& s = sweep::value_or_throw(outcome);
    ens.ng_values.push_back(s.ng);
    ens.counts.push_back(static_cast<int>(s.spacings.size()));
    ens.pooled.insert(ens.pooled.end(), s.spacings.begin(), s.spacings.end());
  }
  return ens;
}

double reference_pdf(Reference ref, double s) {
  if (s < 0.0) return 0.0;
  switch (ref) {
    case Reference::kPoisson:
      return std::exp(-s);
    case Reference::kWignerDyson:
      return 0.5 * M_PI * s * std::exp(-0.25 * M_PI * s * s);
  }
  return 0.0;
}

double reference_cdf(Reference ref, double s) {
  if (s < 0.0) return 0.0;
  switch (ref) {
    case Reference::kPoisson:
      return 1.0 - std::exp(-s);
    case Reference::kWignerDyson:
      return 1.0 - std::exp(-0.25 * M_PI * s * s);
  }
  return 0.0;
}

double ks_distance(std::vector<double> samples, Reference ref) {
  if (samples.size() < 100) {
    throw InvalidParameter("ks_distance needs at least 100 pooled spacings");
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const double f = reference_cdf(ref, samples[i]);
    d = std::max(d, std::abs(f - (i + 1) / n));
    d = std::max(d, std::abs(f - i / n));
  }
  return d;
}

VectorXi parity_classify(const floquet::FloquetSolution& sol, double ng,
                         const model::ChargeBasis& basis) {
  const double two_ng = 2.0 * ng;
  if (std::abs(two_ng - std::lround(two_ng)) > 1e-9) {
    throw InvalidParameter("parity classification requires n_g = 0 or 0.5 (mod 1)");
  }
  if (sol.parity.size() > 0) return sol.parity;
  if (sol.modes_t.empty() || sol.n_times % 2 != 0) {
    throw InvalidParameter("parity classification needs stored modes at T/2");
  }
  const VectorXi perm = floquet::parity_permutation(basis, ng);
  const Eigen::MatrixXcd& m0 = sol.modes_t.front();
  const Eigen::MatrixXcd& mh = sol.modes_t[sol.n_times / 2];
  const int dim = static_cast<int>(m0.cols());
  VectorXi labels(dim);
  for (int k = 0; k < dim; ++k) {
    std::complex<double> sigma = 0.0;
    for (int r = 0; r < dim; ++r) {
      // <phi_k(0)| R |phi_k(T/2)>, R row r sourced from row perm(r)
      sigma += std::conj(m0(r, k)) * mh(perm(r), k);
    }
    labels(k) = std::abs(std::abs(sigma) - 1.0) < 0.01 ? (sigma.real() > 0 ? 1 : -1) : 0;
  }
  return labels;
}

}  // namespace quasichaos::chaosmetrics
