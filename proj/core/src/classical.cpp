#include "quasichaos/classical.hpp"

#include <cmath>

#include "quasichaos/constants.hpp"
#include "quasichaos/errors.hpp"

namespace quasichaos::classical {
namespace {

// Yoshida composition coefficients for 4th order from Strang steps.
const double kW1 = 1.0 / (2.0 - std::cbrt(2.0));
const double kW0 = 1.0 - 2.0 * kW1;

struct State {
  double phi, n, t;
  double dphi, dn;  // tangent vector, propagated alongside
};

struct System {
  double ng, eps, omega;

  // Exact flow of (n - ng)^2/2 + eps cos(omega t) n over h: drift in phi.
  void drift(State& s, double h) const {
    double kick = 0.0;
    if (eps != 0.0) {
      kick = eps / omega * (std::sin(omega * (s.t + h)) - std::sin(omega * s.t));
    }
    s.phi += (s.n - ng) * h + kick;
    s.dphi += s.dn * h;
    s.t += h;
  }

  // Momentum kick from -cos(phi).
  void kick(State& s, double h) const {
    s.n -= std::sin(s.phi) * h;
    s.dn -= std::cos(s.phi) * h * s.dphi;
  }

  void strang(State& s, double h) const {
    drift(s, 0.5 * h);
    kick(s, h);
    drift(s, 0.5 * h);
  }

  void step4(State& s, double h) const {
    strang(s, kW1 * h);
    strang(s, kW0 * h);
    strang(s, kW1 * h);
  }
};

// Wrap phi to (-pi, pi], counting 2*pi windings.
void wrap(State& s, long& winding) {
  while (s.phi > M_PI) {
    s.phi -= kTwoPi;
    ++winding;
  }
  while (s.phi <= -M_PI) {
    s.phi += kTwoPi;
    --winding;
  }
}

double default_dt(const model::ReducedParams& r) {
  return kTwoPi / r.omega_tilde / 512.0;
}

void check_dt(double dt, const model::ReducedParams& r) {
  const double period = kTwoPi / r.omega_tilde;
  if (dt > period / 200.0) {
    throw ConfigError("integrator step too coarse: dt must be <= period/200");
  }
}

}  // namespace

double pendulum_energy(const PhasePoint& p, double ng_tilde) {
  const double dn = p.n - ng_tilde;
  return 0.5 * dn * dn - std::cos(p.phi);
}

double well_energy(const PhasePoint& p, double ng_tilde) {
  return pendulum_energy(p, ng_tilde) + 1.0;
}

PhasePoint contour_point(double well_e, double phi, double ng_tilde, int sign) {
  const double arg = 2.0 * (well_e - 1.0 + std::cos(phi));
  if (arg < 0.0) throw InvalidParameter("contour does not reach this angle");
  return {phi, ng_tilde + (sign >= 0 ? 1.0 : -1.0) * std::sqrt(arg)};
}

Trajectory integrate(const PhasePoint& start, const model::ReducedParams& reduced,
                     double t_span, const IntegratorOptions& opts) {
  double dt = opts.dt > 0.0 ? opts.dt : default_dt(reduced);
  check_dt(dt, reduced);
  const long n_steps = std::lround(std::ceil(t_span / dt));

  System sys{reduced.ng_tilde, reduced.eps_tilde, reduced.omega_tilde};
  State s{start.phi, start.n, opts.t0, 1.0, 0.0};
  long winding = 0;

  Trajectory traj;
  traj.times.reserve(n_steps / opts.sample_stride + 2);
  traj.points.reserve(n_steps / opts.sample_stride + 2);
  traj.winding.reserve(n_steps / opts.sample_stride + 2);
  auto record = [&] {
    traj.times.push_back(s.t);
    traj.points.push_back({s.phi, s.n});
    traj.winding.push_back(winding);
  };
  record();
  for (long i = 0; i < n_steps; ++i) {
    sys.step4(s, dt);
    wrap(s, winding);
    if ((i + 1) % opts.sample_stride == 0 || i + 1 == n_steps) record();
  }
  return traj;
}

SectionPoints poincare_section(const std::vector<PhasePoint>& starts,
                               const model::ReducedParams& reduced, int n_periods,
                               double t0_fraction) {
  if (n_periods < 100) throw ConfigError("poincare_section needs n_periods >= 100");
  const double period = kTwoPi / reduced.omega_tilde;
  const double dt = default_dt(reduced);  // 512 steps per period, exact stroboscope
  System sys{reduced.ng_tilde, reduced.eps_tilde, reduced.omega_tilde};

  SectionPoints out;
  out.t0 = t0_fraction * period;
  out.period = period;
  out.per_start.resize(starts.size());
  for (size_t k = 0; k < starts.size(); ++k) {
    State s{starts[k].phi, starts[k].n, out.t0, 1.0, 0.0};
    long winding = 0;
    auto& orbit = out.per_start[k];
    orbit.reserve(n_periods + 1);
    orbit.push_back({s.phi, s.n});
    for (int p = 0; p < n_periods; ++p) {
      for (int i = 0; i < 512; ++i) {
        sys.step4(s, dt);
        wrap(s, winding);
      }
      orbit.push_back({s.phi, s.n});
    }
  }
  return out;
}

double lyapunov(const PhasePoint& start, const model::ReducedParams& reduced,
                int n_periods, double dt) {
  if (n_periods < 500) throw ConfigError("lyapunov needs n_periods >= 500");
  if (dt <= 0.0) dt = default_dt(reduced);
  check_dt(dt, reduced);
  const double period = kTwoPi / reduced.omega_tilde;
  const int steps_per_period = static_cast<int>(std::ceil(period / dt));
  const double h = period / steps_per_period;

  System sys{reduced.ng_tilde, reduced.eps_tilde, reduced.omega_tilde};
  State s{start.phi, start.n, 0.0, M_SQRT1_2, M_SQRT1_2};
  long winding = 0;
  double log_sum = 0.0;
  for (int p = 0; p < n_periods; ++p) {
    for (int i = 0; i < steps_per_period; ++i) {
      sys.step4(s, h);
      wrap(s, winding);
    }
    const double norm = std::hypot(s.dphi, s.dn);
    log_sum += std::log(norm);
    s.dphi /= norm;
    s.dn /= norm;
  }
  return log_sum / (n_periods * period);
}

LayerWidth chaotic_layer_width(double eps_tilde, double omega_tilde) {
  if (eps_tilde < 0.0) throw InvalidParameter("eps_tilde must be nonnegative");
  LayerWidth w;
  w.value = eps_tilde * omega_tilde / std::cosh(M_PI * omega_tilde / 2.0);
  w.domain_warning = !(omega_tilde > 1.0);
  return w;
}

ResonanceReport resonance_report(const model::ReducedParams& reduced) {
  const double w = reduced.omega_tilde;
  ResonanceReport r;
  r.bounded_1_1 = (w >= 0.65 && w <= 1.0);
  r.bounded_3_1 = (w >= 2.0 && w <= 3.0);
  r.bounded_5_1 = (w >= 4.0 && w <= 5.0);
  r.unbounded = (w >= 1.5);
  r.unbounded_n_plus = reduced.ng_tilde + w;
  r.unbounded_n_minus = reduced.ng_tilde - w;
  r.j0_factor = std::cyl_bessel_j(0, reduced.eps_tilde / w);
  r.layer_width = chaotic_layer_width(reduced.eps_tilde, w);
  return r;
}

std::vector<PhasePoint> default_section_starts(int count) {
  // Half the starts ramp n at phi = 0 (covers bounded orbits and rotations),
  // half ramp phi at n = 0 (covers the well).
  std::vector<PhasePoint> starts;
  starts.reserve(count);
  const int half = count / 2;
  for (int i = 0; i < half; ++i) {
    starts.push_back({0.0, 4.0 * (i + 1) / half});
  }
  for (int i = 0; i < count - half; ++i) {
    starts.push_back({M_PI * (i + 0.5) / (count - half), 0.0});
  }
  return starts;
}

}  // namespace quasichaos::classical
