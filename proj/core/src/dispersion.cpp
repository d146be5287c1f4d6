#include "quasichaos/dispersion.hpp"

#include <algorithm>
#include <cmath>

#include "quasichaos/constants.hpp"
#include "quasichaos/errors.hpp"
#include "quasichaos/sweep.hpp"

namespace quasichaos::dispersion {

using std::complex;

namespace {

void finalize_band(BandCurve& band) {
  const int n = static_cast<int>(band.energy.size());
  const double mean = band.energy.mean();
  band.energy.array() -= mean;
  band.energy_offset += mean;
  band.dispersion = band.energy.maxCoeff() - band.energy.minCoeff();

  // Spike flag: adjacent jump large compared with the median jump.
  band.spike.assign(n, 0);
  std::vector<double> jumps;
  jumps.reserve(n - 1);
  for (int i = 0; i + 1 < n; ++i) jumps.push_back(std::abs(band.energy(i + 1) - band.energy(i)));
  std::vector<double> sorted = jumps;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double trend = std::max(sorted[sorted.size() / 2], 1e-300);
  for (int i = 0; i + 1 < n; ++i) {
    if (jumps[i] > 10.0 * trend) {
      band.spike[i] = 1;
      band.spike[i + 1] = 1;
    }
  }
}

// Tracked, unfolded quasienergy of `level` at one offset charge, seeded from
// the undriven eigenstate and swept up in amplitude.
struct TrackedPoint {
  double energy = 0.0;
  bool tracked = true;
};

TrackedPoint tracked_level_energy(model::TransmonParams p, const model::ChargeBasis& basis,
                                  int level, double step_eps_tilde,
                                  const floquet::SolveOptions& solve) {
  const double eps_target = p.eps_d;
  const double omega_p = model::rescale(p).omega_p;
  const double step = step_eps_tilde * omega_p;

  const auto stat = model::diagonalize_static(p, basis);
  Eigen::VectorXcd ref = stat.vectors.col(level).cast<complex<double>>();
  double unfolded = stat.values(level);

  TrackedPoint out;
  const int n_sweep = std::max(1, static_cast<int>(std::ceil(eps_target / step)));
  for (int s = 1; s <= n_sweep; ++s) {
    p.eps_d = eps_target * s / n_sweep;
    const auto sol = floquet::solve_transmon(p, basis, solve);
    int best = 0;
    const double ov = (sol.modes0.adjoint() * ref).cwiseAbs().maxCoeff(&best);
    if (ov < floquet::kTrackingConfidence) out.tracked = false;
    ref = sol.modes0.col(best);
    const double folded = sol.quasienergies(best);
    unfolded = folded + sol.omega_d * std::round((unfolded - folded) / sol.omega_d);
  }
  out.energy = unfolded;
  return out;
}

}  // namespace

BandCurve driven_band(const model::TransmonParams& base, const model::ChargeBasis& basis,
                      int level, const BandOptions& opts) {
  if (opts.ng_points < 64) throw ConfigError("band scans need ng_points >= 64");
  const int n = opts.ng_points;

  floquet::SolveOptions solve = opts.solve;
  solve.store_modes = false;  // only modes0 and quasienergies are needed here

  BandCurve band;
  band.level = level;
  band.ng.resize(n + 1);
  band.energy.resize(n + 1);
  band.tracked.assign(n + 1, 1);
  for (int i = 0; i <= n; ++i) band.ng(i) = -0.5 + static_cast<double>(i) / n;

  const auto points = sweep::map<TrackedPoint>(n + 1, opts.workers, [&](int i) {
    model::TransmonParams p = base;
    p.ng = band.ng(i);
    return tracked_level_energy(p, basis, level, opts.track_step_eps_tilde, solve);
  });
  for (int i = 0; i <= n; ++i) {
    const TrackedPoint& tp = sweep::value_or_throw(points[i]);
    band.energy(i) = tp.energy;
    band.tracked[i] = tp.tracked ? 1 : 0;
  }
  finalize_band(band);
  return band;
}

BandCurve undriven_band(const model::TransmonParams& base, const model::ChargeBasis& basis,
                        int level, int ng_points) {
  if (ng_points < 64) throw ConfigError("band scans need ng_points >= 64");
  BandCurve band;
  band.level = level;
  band.ng.resize(ng_points + 1);
  std::vector<long double> values(ng_points + 1);
  for (int i = 0; i <= ng_points; ++i) {
    band.ng(i) = -0.5 + static_cast<double>(i) / ng_points;
    model::TransmonParams p = base;
    p.eps_d = 0.0;
    p.ng = band.ng(i);
    values[i] = model::static_eigenvalues_ld(p, basis)(level);
  }
  // Remove the mean in extended precision before narrowing.
  long double mean = 0.0L;
  for (const long double v : values) mean += v;
  mean /= values.size();
  band.energy.resize(ng_points + 1);
  for (int i = 0; i <= ng_points; ++i) {
    band.energy(i) = static_cast<double>(values[i] - mean);
  }
  band.energy_offset = static_cast<double>(mean);
  band.tracked.assign(ng_points + 1, 1);
  finalize_band(band);
  return band;
}

PhaseSlipSpectrum phase_slip_spectrum(const BandCurve& band, int n_max) {
  const int n = static_cast<int>(band.ng.size()) - 1;  // last point duplicates the first
  PhaseSlipSpectrum spec;
  spec.tn.resize(n_max + 1);
  spec.abs_tn.resize(n_max + 1);
  for (int h = 0; h <= n_max; ++h) {
    complex<double> acc = 0.0;
    for (int i = 0; i < n; ++i) {
      acc += band.energy(i) * std::exp(complex<double>(0, kTwoPi * band.ng(i) * h));
    }
    spec.tn[h] = acc / static_cast<double>(n);
    spec.abs_tn(h) = std::abs(spec.tn[h]);
  }
  return spec;
}

double PhaseSlipSpectrum::reconstruct(const BandCurve& band, int i) const {
  // Real band: t_{-n} = conj(t_n).
  double value = tn[0].real();
  for (size_t h = 1; h < tn.size(); ++h) {
    value += 2.0 * (tn[h] * std::exp(complex<double>(0, -kTwoPi * band.ng(i) * h))).real();
  }
  return value;
}

VectorXd chaotic_coupling(const dissipation::MatrixElementTensor& elements, int i) {
  const int dim = elements.dim();
  VectorXd curve(dim);
  double acc = 0.0;
  for (int j = dim - 1; j >= 0; --j) {
    acc += std::norm(elements.at(0)(i, j)) + std::norm(elements.at(-1)(i, j));
    curve(j) = std::sqrt(acc);
  }
  return curve;
}

}  // namespace quasichaos::dispersion
