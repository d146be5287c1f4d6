#pragma once

#include <vector>

#include "quasichaos/floquet.hpp"

namespace quasichaos::chaosmetrics {

using Eigen::VectorXd;
using Eigen::VectorXi;

// Indices of modes with lo < <<H>>/E_J < hi (well-bottom energy convention,
// separatrix at 2), sorted by quasienergy.
std::vector<int> select_chaotic_window(const floquet::FloquetSolution& sol, double lo,
                                       double hi, double ej);

// Normalized spacings of sorted quasienergies inside one Brillouin zone,
// including the wraparound spacing across the zone boundary; the mean level
// spacing omega_d / N sets the unit.
VectorXd spacings(const VectorXd& sorted_quasienergies, double omega_d);

struct SpacingEnsemble {
  std::vector<double> pooled;   // all normalized spacings
  std::vector<int> counts;      // spacings contributed per n_g sample
  std::vector<double> ng_values;

  double mean() const;
  // Unfolding-free adjacent-gap-ratio diagnostic, <min/max of neighbors>.
  double mean_gap_ratio() const;
};

struct EnsembleOptions {
  int ng_samples = 200;
  double window_lo = 1.6;  // in units of E_J
  double window_hi = 2.5;
  floquet::SolveOptions solve;
  int workers = 0;  // 0 -> hardware
};

// Pools level spacings over offset charges uniformly placed in [0, 0.5].
SpacingEnsemble ensemble(const model::TransmonParams& base, const model::ChargeBasis& basis,
                         const EnsembleOptions& opts);

enum class Reference { kPoisson, kWignerDyson };

double reference_pdf(Reference ref, double s);
double reference_cdf(Reference ref, double s);

// Kolmogorov-Smirnov distance between the empirical CDF and a reference.
double ks_distance(std::vector<double> samples, Reference ref);

// Generalized-parity labels (+1 even, -1 odd, 0 undetermined) of the modes of
// a solution computed at n_g = 0 or 0.5 (mod 1). Uses the identity
// R |phi_k(T/2)> = sigma_k |phi_k(0)>; requires stored time samples.
VectorXi parity_classify(const floquet::FloquetSolution& sol, double ng,
                         const model::ChargeBasis& basis);

}  // namespace quasichaos::chaosmetrics
