#pragma once

#include <vector>

#include "quasichaos/model.hpp"

namespace quasichaos::classical {

// Rescaled pendulum phase space: phi in (-pi, pi], n is the dimensionless
// momentum (rescaled charge).
struct PhasePoint {
  double phi = 0.0;
  double n = 0.0;
};

// Literal pendulum energy (n - ng)^2/2 - cos(phi); conserved at zero drive.
double pendulum_energy(const PhasePoint& p, double ng_tilde);

// Energies quoted against the bottom of the cosine well, where the separatrix
// sits at 2: pendulum_energy + 1.
inline constexpr double kSeparatrixEnergy = 2.0;
double well_energy(const PhasePoint& p, double ng_tilde);

// Seed on the undriven contour of given well energy at angle phi (momentum
// sign +1/-1).
PhasePoint contour_point(double well_e, double phi, double ng_tilde, int sign = 1);

struct Trajectory {
  std::vector<double> times;
  std::vector<PhasePoint> points;   // phi wrapped to (-pi, pi]
  std::vector<long> winding;        // 2*pi winding count; unwrapped phi = phi + 2*pi*winding
};

struct IntegratorOptions {
  double dt = 0.0;          // 0 -> period/512
  double t0 = 0.0;          // initial time (drive phase)
  int sample_stride = 1;    // record every k-th step
};

// Fixed-step 4th-order symplectic splitting. The drive couples to n, so it is
// integrated exactly inside the position-drift substeps; the -cos(phi)
// potential enters as momentum kicks.
Trajectory integrate(const PhasePoint& start, const model::ReducedParams& reduced,
                     double t_span, const IntegratorOptions& opts = {});

struct SectionPoints {
  std::vector<std::vector<PhasePoint>> per_start;  // one stroboscopic orbit per start
  double t0 = 0.0;
  double period = 0.0;
};

SectionPoints poincare_section(const std::vector<PhasePoint>& starts,
                               const model::ReducedParams& reduced, int n_periods,
                               double t0_fraction);

// Largest Lyapunov exponent per unit dimensionless time, tangent-vector
// renormalization once per drive period.
double lyapunov(const PhasePoint& start, const model::ReducedParams& reduced,
                int n_periods, double dt = 0.0);

// Default chaos-classification threshold for Lyapunov exponents.
inline constexpr double kChaosThreshold = 0.02;

struct LayerWidth {
  double value = 0.0;    // W_c / E_J
  bool domain_warning = false;  // formula stated for omega_tilde > 1
};

// W_c/E_J = eps_tilde * omega_tilde * sech(pi * omega_tilde / 2).
LayerWidth chaotic_layer_width(double eps_tilde, double omega_tilde);

// Jacobi-Anger resonance bookkeeping: which bounded m:1 resonances are in
// range, where the unbounded-state resonance tori sit, and the reduced
// potential prefactor J0.
struct ResonanceReport {
  bool bounded_1_1 = false;   // omega_tilde in [0.65, 1]
  bool bounded_3_1 = false;   // omega_tilde in [2, 3]
  bool bounded_5_1 = false;   // omega_tilde in [4, 5]
  bool unbounded = false;     // omega_tilde >~ 1.5
  double unbounded_n_plus = 0.0;   // ng_tilde + omega_tilde
  double unbounded_n_minus = 0.0;  // ng_tilde - omega_tilde
  double j0_factor = 1.0;          // J0(eps_tilde / omega_tilde)
  LayerWidth layer_width;
};

ResonanceReport resonance_report(const model::ReducedParams& reduced);

// Grid of default section starts: along the n = 0 and phi = 0 axes.
std::vector<PhasePoint> default_section_starts(int count = 40);

}  // namespace quasichaos::classical
