#include "experiments.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>

#include "quasichaos/chaosmetrics.hpp"
#include "quasichaos/classical.hpp"
#include "quasichaos/constants.hpp"
#include "quasichaos/cqed.hpp"
#include "quasichaos/csv.hpp"
#include "quasichaos/dispersion.hpp"
#include "quasichaos/dissipation.hpp"
#include "quasichaos/errors.hpp"
#include "quasichaos/floquet.hpp"
#include "quasichaos/model.hpp"
#include "quasichaos/phasespace.hpp"
#include "quasichaos/sweep.hpp"

namespace quasichaos::cli {

using nlohmann::json;

const std::vector<std::string> kExperiments = {
    "poincare",  "lyapunov",    "floquet-sweep", "husimi",       "level-stats",
    "rates",     "steady-state", "dephasing",     "dispersion",   "cqed-grid",
    "cavity-pull", "ncrit",      "dipole-stats",  "undriven-folded"};

namespace {

constexpr const char* kVersion = "quasichaos 0.1.0";

struct Context {
  const RunOptions& opts;
  config::Config cfg;
  bool ci = false;
  std::vector<std::pair<std::string, long>> outputs;
  std::vector<std::string> failed_points;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  int workers() const { return sweep::resolve_workers(opts.workers); }

  floquet::SolveOptions solve_options() const {
    floquet::SolveOptions s;
    s.n_steps = cfg.get_int("floquet.n_steps", ci ? 512 : 1024);
    s.n_times = cfg.get_int("floquet.n_times", ci ? 64 : 128);
    return s;
  }

  model::TransmonParams transmon() const { return config::load_transmon(cfg); }
  model::ChargeBasis basis() const { return config::load_basis(cfg); }

  cqed::CqedParams cqed_params() const {
    cqed::CqedParams p;
    p.transmon = transmon();
    p.omega_a = ghz_to_angular(cfg.get_double("cqed.omega_a_GHz", 8.0));
    p.g = ghz_to_angular(cfg.get_double("cqed.g_GHz", 0.25));
    p.kappa = ghz_to_angular(cfg.get_double("cqed.kappa_GHz", 0.010));
    p.dim_t = cfg.get_int("cqed.dim_transmon", ci ? 20 : 35);
    p.dim_r = cfg.get_int("cqed.dim_resonator", ci ? 12 : 20);
    return p;
  }

  cqed::CqedSolveOptions cqed_options() const {
    cqed::CqedSolveOptions o;
    o.n_steps = cfg.get_int("cqed.n_steps", ci ? 512 : 1024);
    o.n_times = cfg.get_int("cqed.n_times", 64);
    o.kmax = cfg.get_int("cqed.kmax", 16);
    o.check_alias = cfg.get_bool("cqed.check_alias", false);
    o.basis = basis();
    return o;
  }

  dissipation::BathSpec bath(const model::TransmonParams& p) const {
    model::TransmonParams undriven = p;
    undriven.eps_d = 0.0;
    const auto stat = model::diagonalize_static(undriven, basis());
    const double omega01 = stat.values(1) - stat.values(0);
    const double omega_p = model::rescale(p).omega_p;
    const double cutoff = cfg.get_double("bath.cutoff_over_omega_p", 10.0) * omega_p;
    return dissipation::calibrated_bath(cfg.get_double("bath.temperature_mK", 10.0) * 1e-3,
                                        omega01, cutoff,
                                        cfg.get_double("bath.rate_scale", 1.0));
  }

  // Fail-closed convergence probe: one Richardson-checked solve at the
  // given parameters before a sweep commits to its step count.
  void convergence_probe(const model::TransmonParams& p) const {
    if (!cfg.get_bool("floquet.check_convergence", true)) return;
    floquet::SolveOptions s = solve_options();
    s.store_modes = false;
    s.check_convergence = true;
    floquet::solve_transmon(p, basis(), s);
  }
};

void write_manifest(Context& ctx) {
  json m;
  m["experiment"] = ctx.opts.experiment;
  m["version"] = kVersion;
  m["preset"] = ctx.opts.preset;
  m["seed"] = ctx.opts.seed;
  m["workers"] = ctx.workers();
  m["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.t0).count();
  m["config"] = json(ctx.cfg.values());
  m["effective_settings"] = json(ctx.cfg.used());
  json outs = json::array();
  for (const auto& [path, rows] : ctx.outputs) {
    outs.push_back({{"path", path}, {"rows", rows}});
  }
  m["outputs"] = outs;
  m["failed_points"] = ctx.failed_points;
  std::ofstream out(ctx.opts.out_path + ".manifest.json");
  out << m.dump(2) << "\n";
}

std::vector<double> eps_grid(const Context& ctx, double def_max, double def_step) {
  const double mx = ctx.cfg.get_double("sweep.eps_tilde_max", def_max);
  const double st = ctx.cfg.get_double("sweep.eps_tilde_step", def_step);
  if (!(st > 0.0) || mx < 0.0) throw ConfigError("invalid sweep grid");
  std::vector<double> grid;
  for (double e = 0.0; e <= mx + 0.5 * st; e += st) grid.push_back(e);
  if (grid.empty()) throw ConfigError("empty sweep grid");
  return grid;
}

// ---------------------------------------------------------------- poincare

void run_poincare(Context& ctx) {
  const auto reduced = model::rescale(ctx.transmon());
  const int n_starts = ctx.cfg.get_int("classical.starts", 40);
  const int n_periods = ctx.cfg.get_int("classical.n_periods", 200);
  const double t0_fraction = ctx.cfg.get_double("classical.t0_fraction", 0.125);
  const auto starts = classical::default_section_starts(n_starts);
  const auto sections = classical::poincare_section(starts, reduced, n_periods, t0_fraction);

  csv::Writer out(ctx.opts.out_path, "start_id,period_index,phi,n");
  for (size_t s = 0; s < sections.per_start.size(); ++s) {
    for (size_t k = 0; k < sections.per_start[s].size(); ++k) {
      const auto& p = sections.per_start[s][k];
      out.row({csv::fmt(static_cast<int>(s)), csv::fmt(static_cast<int>(k)),
               csv::fmt(p.phi), csv::fmt(p.n)});
    }
  }
  ctx.outputs.emplace_back(out.path(), out.rows());
}

void run_lyapunov(Context& ctx) {
  const auto reduced = model::rescale(ctx.transmon());
  const int n_starts = ctx.cfg.get_int("classical.starts", 40);
  const int n_periods = ctx.cfg.get_int("classical.n_periods", 1000);
  const auto starts = classical::default_section_starts(n_starts);

  const auto res = sweep::map<double>(static_cast<int>(starts.size()), ctx.workers(),
                                      [&](int i) {
                                        return classical::lyapunov(starts[i], reduced, n_periods);
                                      });
  csv::Writer out(ctx.opts.out_path, "start_id,phi0,n0,lambda");
  for (size_t i = 0; i < starts.size(); ++i) {
    if (!res[i].ok()) {
      ctx.failed_points.push_back("start " + std::to_string(i) + ": " + res[i].error);
      continue;
    }
    out.row({csv::fmt(static_cast<int>(i)), csv::fmt(starts[i].phi), csv::fmt(starts[i].n),
             csv::fmt(*res[i].value)});
  }
  ctx.outputs.emplace_back(out.path(), out.rows());
}

// ------------------------------------------------------------ floquet-sweep

void run_floquet_sweep(Context& ctx) {
  const model::TransmonParams base = ctx.transmon();
  const auto basis = ctx.basis();
  const double omega_p = model::rescale(base).omega_p;
  const auto grid = eps_grid(ctx, 1.3, 0.005);

  model::TransmonParams probe = base;
  probe.eps_d = grid.back() * omega_p;
  ctx.convergence_probe(probe);

  floquet::SolveOptions sopt = ctx.solve_options();
  sopt.store_modes = false;
  const auto solutions =
      sweep::map<floquet::FloquetSolution>(static_cast<int>(grid.size()), ctx.workers(),
                                           [&](int i) {
                                             model::TransmonParams p = base;
                                             p.eps_d = grid[i] * omega_p;
                                             return floquet::solve_transmon(p, basis, sopt);
                                           });
  std::vector<floquet::FloquetSolution> sweep_sols;
  for (size_t i = 0; i < solutions.size(); ++i) {
    if (!solutions[i].ok()) {
      throw AccuracyError("sweep point " + std::to_string(i) + ": " + solutions[i].error);
    }
    sweep_sols.push_back(*solutions[i].value);
  }

  const auto stat = model::diagonalize_static(base, basis);
  const Eigen::MatrixXcd seeds = stat.vectors.leftCols(2).cast<std::complex<double>>();
  const auto tracked = floquet::track(sweep_sols, seeds);

  csv::Writer out(ctx.opts.out_path,
                  "eps_d,state_index,quasienergy,mean_energy_over_EJ,tracked_flag");
  for (size_t i = 0; i < sweep_sols.size(); ++i) {
    const auto& sol = sweep_sols[i];
    for (int k = 0; k < sol.quasienergies.size(); ++k) {
      int flag = 0;
      for (int s = 0; s < 2; ++s) {
        const auto& step = tracked.per_seed[s][i];
        if (step.index == k && step.confident) flag = s + 1;
      }
      out.row({csv::fmt(angular_to_ghz(grid[i] * omega_p)), csv::fmt(k),
               csv::fmt(angular_to_ghz(sol.quasienergies(k))),
               csv::fmt(floquet::well_energy_over_ej(sol.mean_energy(k), base.ej)),
               csv::fmt(flag)});
    }
  }
  ctx.outputs.emplace_back(out.path(), out.rows());
}

// ----------------------------------------------------------------- husimi

void run_husimi(Context& ctx) {
  const model::TransmonParams p = ctx.transmon();
  const auto basis = ctx.basis();
  const auto reduced = model::rescale(p);
  floquet::SolveOptions sopt = ctx.solve_options();
  sopt.store_modes = true;
  const auto sol = floquet::solve_transmon(p, basis, sopt);

  const int state = ctx.opts.state_index >= 0
                        ? ctx.opts.state_index
                        : ctx.cfg.get_int("husimi.state_index", 1);
  if (state < 0 || state >= sol.quasienergies.size()) {
    throw ConfigError("husimi state index out of range");
  }
  const int sample =
      ((static_cast<int>(std::lround(ctx.opts.time_fraction * sol.n_times)) % sol.n_times) +
       sol.n_times) %
      sol.n_times;

  phasespace::HusimiGridSpec spec;
  spec.n_phi = ctx.cfg.get_int("husimi.grid_points", 201);
  spec.n_n = spec.n_phi;
  spec.n_hi = ctx.cfg.get_double("husimi.n_window", 4.0);
  spec.n_lo = -spec.n_hi;
  const auto grid =
      phasespace::husimi(sol.modes_t[sample].col(state), spec, reduced.hbar_eff, basis);

  csv::Writer out(ctx.opts.out_path, "phi,n,Q");
  for (int i = 0; i < spec.n_phi; ++i) {
    for (int j = 0; j < spec.n_n; ++j) {
      out.row({csv::fmt(grid.phi(i)), csv::fmt(grid.n(j)), csv::fmt(grid.values(i, j))});
    }
  }
  ctx.outputs.emplace_back(out.path(), out.rows());
}

// -------------------------------------------------------------- level-stats

void run_level_stats(Context& ctx) {
  const model::TransmonParams base = ctx.transmon();
  ctx.convergence_probe(base);

  chaosmetrics::EnsembleOptions eopt;
  eopt.ng_samples = ctx.opts.ng_samples > 0
                        ? ctx.opts.ng_samples
                        : ctx.cfg.get_int("levelstats.ng_samples", ctx.ci ? 50 : 200);
  eopt.window_lo = ctx.cfg.get_double("levelstats.window_lo_EJ", 1.6);
  eopt.window_hi = ctx.cfg.get_double("levelstats.window_hi_EJ", 2.5);
  eopt.solve = ctx.solve_options();
  eopt.solve.store_modes = false;
  eopt.workers = ctx.workers();
  const auto ens = chaosmetrics::ensemble(base, ctx.basis(), eopt);

  csv::Writer out(ctx.opts.out_path, "ng,spacing");
  size_t offset = 0;
  for (size_t s = 0; s < ens.counts.size(); ++s) {
    for (int i = 0; i < ens.counts[s]; ++i) {
      out.row({csv::fmt(ens.ng_values[s]), csv::fmt(ens.pooled[offset + i])});
    }
    offset += ens.counts[s];
  }
  ctx.outputs.emplace_back(out.path(), out.rows());

  json summary;
  summary["pooled_spacings"] = ens.pooled.size();
  summary["ng_samples"] = ens.counts.size();
  summary["mean_spacing"] = ens.mean();
  summary["mean_gap_ratio"] = ens.mean_gap_ratio();
  if (ens.pooled.size() >= 100) {
    summary["ks_poisson"] =
        chaosmetrics::ks_distance(ens.pooled, chaosmetrics::Reference::kPoisson);
    summary["ks_wigner_dyson"] =
        chaosmetrics::ks_distance(ens.pooled, chaosmetrics::Reference::kWignerDyson);
  }
  const std::string summary_path = ctx.opts.out_path + ".summary.json";
  std::ofstream js(summary_path);
  js << summary.dump(2) << "\n";
  ctx.outputs.emplace_back(summary_path, 1);
}

// ------------------------------------------------------- rates/steady-state

dissipation::RateMatrix transmon_rates(Context& ctx, floquet::FloquetSolution* sol_out) {
  const model::TransmonParams p = ctx.transmon();
  const auto basis = ctx.basis();
  ctx.convergence_probe(p);
  floquet::SolveOptions sopt = ctx.solve_options();
  sopt.store_modes = true;
  const auto sol = floquet::solve_transmon(p, basis, sopt);
  const auto tensor = dissipation::matrix_elements(
      sol, model::charge_operator(basis), ctx.cfg.get_int("dissipation.kmax", sopt.n_times / 4),
      ctx.cfg.get_double("dissipation.alias_tol", 1e-6));
  if (sol_out) *sol_out = sol;
  return dissipation::rates(tensor, ctx.bath(p));
}

void run_rates(Context& ctx) {
  const auto rm = transmon_rates(ctx, nullptr);
  csv::Writer out(ctx.opts.out_path, "i,j,gamma_even_k,gamma_odd_k");
  for (int i = 0; i < rm.even.rows(); ++i) {
    for (int j = 0; j < rm.even.cols(); ++j) {
      if (i == j) continue;
      out.row({csv::fmt(i), csv::fmt(j), csv::fmt(rm.even(i, j)), csv::fmt(rm.odd(i, j))});
    }
  }
  ctx.outputs.emplace_back(out.path(), out.rows());
}

void run_steady_state(Context& ctx) {
  floquet::FloquetSolution sol;
  const auto rm = transmon_rates(ctx, &sol);
  const auto ss = dissipation::steady_state(rm.total(), 0);
  if (ss.multi_component) {
    ctx.failed_points.push_back("rate graph has " + std::to_string(ss.components.size()) +
                                " components; distribution anchored to state 0");
  }
  const double ej = ctx.transmon().ej;
  csv::Writer out(ctx.opts.out_path, "state_index,mean_energy_over_EJ,population");
  for (int k = 0; k < ss.populations.size(); ++k) {
    out.row({csv::fmt(k), csv::fmt(floquet::well_energy_over_ej(sol.mean_energy(k), ej)),
             csv::fmt(ss.populations(k))});
  }
  ctx.outputs.emplace_back(out.path(), out.rows());
}

// ---------------------------------------------------------------- dephasing

void run_dephasing(Context& ctx) {
  const model::TransmonParams base = ctx.transmon();
  const auto basis = ctx.basis();
  const double omega_p = model::rescale(base).omega_p;
  const auto grid = eps_grid(ctx, 1.0, 0.01);
  const int ng_count = ctx.cfg.get_int("noise.ng_count", 1);

  std::vector<double> ng_values;
  if (ng_count <= 1) {
    ng_values.push_back(base.ng);
  } else {
    for (int i = 0; i < ng_count; ++i) ng_values.push_back(0.5 * (i + 0.5) / ng_count);
  }

  dissipation::NoiseSpec noise;
  noise.charge_amplitude = ctx.cfg.get_double("noise.charge_amplitude", 1e-4);
  noise.log_factor = ctx.cfg.get_double("noise.log_factor", 4.0);
  noise.dielectric_scale = ctx.cfg.get_double("noise.dielectric_scale", 1.0);
  noise.bath = ctx.bath(base);

  floquet::SolveOptions sopt = ctx.solve_options();
  sopt.store_modes = true;
  const int kmax = ctx.cfg.get_int("dissipation.kmax", sopt.n_times / 4);
  const double alias_tol = ctx.cfg.get_double("dissipation.alias_tol", 1e-6);

  struct Row {
    double eps, ng, g1f, gdiel, gphi;
    bool confident;
  };
  const auto per_ng = sweep::map<std::vector<Row>>(
      static_cast<int>(ng_values.size()), ctx.workers(), [&](int ig) {
        model::TransmonParams p = base;
        p.ng = ng_values[ig];
        const auto stat = model::diagonalize_static(p, basis);
        Eigen::VectorXcd ref0 = stat.vectors.col(0).cast<std::complex<double>>();
        Eigen::VectorXcd ref1 = stat.vectors.col(1).cast<std::complex<double>>();
        std::vector<Row> rows;
        bool lost = false;
        for (const double eps : grid) {
          p.eps_d = eps * omega_p;
          const auto sol = floquet::solve_transmon(p, basis, sopt);
          int i0 = 0, i1 = 0;
          const double m0 = (sol.modes0.adjoint() * ref0).cwiseAbs().maxCoeff(&i0);
          const double m1 = (sol.modes0.adjoint() * ref1).cwiseAbs().maxCoeff(&i1);
          const bool ok =
              !lost && m0 >= floquet::kTrackingConfidence &&
              m1 >= floquet::kTrackingConfidence && i0 != i1;
          if (!ok) lost = true;
          ref0 = sol.modes0.col(i0);
          ref1 = sol.modes0.col(i1);
          const auto tensor = dissipation::matrix_elements(
              sol, model::charge_operator(basis), kmax, alias_tol);
          const auto deph = dissipation::dephasing_rate(tensor, i0, i1, noise, ok);
          rows.push_back({eps * omega_p, p.ng, deph.one_over_f, deph.dielectric, deph.total,
                          deph.confident});
        }
        return rows;
      });

  csv::Writer out(ctx.opts.out_path, "eps_d,ng,gamma_1f,gamma_dielectric,gamma_phi,confident");
  for (size_t ig = 0; ig < ng_values.size(); ++ig) {
    if (!per_ng[ig].ok()) {
      ctx.failed_points.push_back("ng " + std::to_string(ng_values[ig]) + ": " + per_ng[ig].error);
      continue;
    }
    for (const Row& r : *per_ng[ig].value) {
      out.row({csv::fmt(angular_to_ghz(r.eps)), csv::fmt(r.ng), csv::fmt(r.g1f),
               csv::fmt(r.gdiel), csv::fmt(r.gphi), csv::fmt(r.confident ? 1 : 0)});
    }
  }
  ctx.outputs.emplace_back(out.path(), out.rows());
}

// --------------------------------------------------------------- dispersion

void run_dispersion(Context& ctx) {
  const model::TransmonParams base = ctx.transmon();
  const auto basis = ctx.basis();
  dispersion::BandCurve band;
  if (base.eps_d > 0.0) {
    ctx.convergence_probe(base);
    dispersion::BandOptions bopt;
    bopt.ng_points = ctx.cfg.get_int("dispersion.ng_points", 64);
    bopt.track_step_eps_tilde = ctx.cfg.get_double("floquet.track_step", 0.005);
    bopt.solve = ctx.solve_options();
    bopt.workers = ctx.workers();
    band = dispersion::driven_band(base, basis, ctx.opts.level, bopt);
  } else {
    band = dispersion::undriven_band(base, basis, ctx.opts.level,
                                     ctx.cfg.get_int("dispersion.ng_points", 64));
  }

  // The energy column is measured from the band average; the offset is in the
  // manifest. This keeps exponentially small undriven dispersions readable.
  ctx.cfg.set("dispersion.energy_offset_GHz", csv::fmt(angular_to_ghz(band.energy_offset)));
  csv::Writer out(ctx.opts.out_path, "ng,energy,spike_flag");
  for (int i = 0; i < band.ng.size(); ++i) {
    out.row({csv::fmt(band.ng(i)), csv::fmt(angular_to_ghz(band.energy(i))),
             csv::fmt(static_cast<int>(band.spike[i]))});
  }
  ctx.outputs.emplace_back(out.path(), out.rows());

  if (!ctx.opts.out_fourier.empty()) {
    const auto spec =
        dispersion::phase_slip_spectrum(band, ctx.cfg.get_int("dispersion.n_max", 8));
    csv::Writer fout(ctx.opts.out_fourier, "n,abs_tn");
    for (int n = 0; n < spec.abs_tn.size(); ++n) {
      fout.row({csv::fmt(n), csv::fmt(angular_to_ghz(spec.abs_tn(n)))});
    }
    ctx.outputs.emplace_back(fout.path(), fout.rows());
  }
}

// -------------------------------------------------------------------- cqed

void run_cqed_grid(Context& ctx) {
  const auto sol = cqed::cqed_floquet(ctx.cqed_params(), ctx.cqed_options());
  const auto ss = cqed::resonator_rates_and_steady_state(
      sol, sol.params.kappa, ctx.cfg.get_double("cqed.nr_cutoff", 15.0));
  const auto points = cqed::grid(sol, &ss.steady.populations);

  csv::Writer out(ctx.opts.out_path, "mode,Nt_avg,Nr_avg,purity,steady_pop,comm_error");
  for (const auto& gp : points) {
    out.row({csv::fmt(gp.mode), csv::fmt(gp.nt_avg), csv::fmt(gp.nr_avg), csv::fmt(gp.purity),
             csv::fmt(gp.steady_pop), csv::fmt(gp.comm_error)});
  }
  ctx.outputs.emplace_back(out.path(), out.rows());
  ctx.cfg.set("result.n_occ", csv::fmt(ss.n_occ));
  ctx.cfg.set("result.nt_steady", csv::fmt(ss.nt_ss));
  ctx.cfg.set("result.nr_steady", csv::fmt(ss.nr_ss));
  ctx.cfg.set("result.vacuum_mode", csv::fmt(ss.vacuum_mode));
  ctx.cfg.set("result.tensor_discarded_weight", csv::fmt(sol.res_elements.discarded_weight));
}

void run_cavity_pull(Context& ctx) {
  const auto sol = cqed::cqed_floquet(ctx.cqed_params(), ctx.cqed_options());
  const auto records = cqed::cavity_pull_spectroscopy(
      sol, ctx.cfg.get_double("cqed.purity_min", 0.85), ctx.cfg.get_double("cqed.nr_max", 0.73));
  csv::Writer out(ctx.opts.out_path, "state,pull_MHz,weight,purity");
  for (const auto& r : records) {
    out.row({csv::fmt(r.state), csv::fmt(angular_to_ghz(r.pull) * 1e3), csv::fmt(r.weight),
             csv::fmt(r.purity)});
  }
  ctx.outputs.emplace_back(out.path(), out.rows());
}

void run_ncrit(Context& ctx) {
  const double g_ghz =
      ctx.opts.ncrit_g > 0.0 ? ctx.opts.ncrit_g : ctx.cfg.get_double("ncrit.g_GHz", 0.25);
  const double wd_ghz = ctx.opts.ncrit_omega_d > 0.0 ? ctx.opts.ncrit_omega_d
                                                     : ctx.cfg.get_double("ncrit.omega_d_GHz", 7.5);
  const int nch = ctx.opts.ncrit_nch > 0 ? ctx.opts.ncrit_nch : ctx.cfg.get_int("ncrit.nch", 12);
  const auto res =
      cqed::critical_photon_number(ghz_to_angular(g_ghz), ghz_to_angular(wd_ghz), nch);
  json j;
  j["inputs"] = {{"g_GHz", g_ghz}, {"omega_d_GHz", wd_ghz}, {"N_ch", nch}};
  j["g_eff_GHz"] = angular_to_ghz(res.g_eff);
  j["delta_eff_GHz"] = angular_to_ghz(res.delta_eff);
  j["n_crit"] = res.n_crit;
  j["n_crit_balance"] = res.n_crit_balance;
  std::ofstream out(ctx.opts.out_path);
  out << j.dump(2) << "\n";
  ctx.outputs.emplace_back(ctx.opts.out_path, 1);
}

void run_dipole_stats(Context& ctx) {
  const model::TransmonParams base = ctx.transmon();
  const auto basis = ctx.basis();
  const int m_states = ctx.cfg.get_int("dipole.m_states", 25);
  const double omega_p = model::rescale(base).omega_p;

  std::vector<double> grid;
  if (ctx.cfg.has("sweep.eps_tilde_max")) {
    grid = eps_grid(ctx, 1.3, 0.05);
  } else {
    grid.push_back(base.eps_d / omega_p);
  }

  floquet::SolveOptions sopt = ctx.solve_options();
  sopt.store_modes = false;
  const Eigen::MatrixXd n_op = model::charge_operator(basis);
  csv::Writer out(ctx.opts.out_path, "eps_d,state,dipole,dipole_offdiag");
  json summary = json::array();
  for (const double eps : grid) {
    model::TransmonParams p = base;
    p.eps_d = eps * omega_p;
    const auto sol = floquet::solve_transmon(p, basis, sopt);
    const Eigen::MatrixXcd n_fl = sol.modes0.adjoint() * n_op * sol.modes0;
    const auto stats = cqed::dipole_statistics(n_fl, m_states);
    for (int i = 0; i < m_states; ++i) {
      out.row({csv::fmt(angular_to_ghz(p.eps_d)), csv::fmt(i), csv::fmt(stats.per_state(i)),
               csv::fmt(stats.per_state_offdiag(i))});
    }
    summary.push_back({{"eps_d_GHz", angular_to_ghz(p.eps_d)},
                       {"mean", stats.mean},
                       {"mean_offdiag", stats.mean_offdiag},
                       {"rmt_prediction", stats.rmt_prediction},
                       {"projector_identity", stats.projector_identity}});
  }
  ctx.outputs.emplace_back(out.path(), out.rows());
  const std::string spath = ctx.opts.out_path + ".summary.json";
  std::ofstream js(spath);
  js << summary.dump(2) << "\n";
  ctx.outputs.emplace_back(spath, 1);
}

void run_undriven_folded(Context& ctx) {
  const auto spec = cqed::undriven_spectrum_folded(
      ctx.cqed_params(), ctx.cfg.get_bool("cqed.with_kappa", false), ctx.basis());
  csv::Writer out(ctx.opts.out_path, "state,energy_GHz,Nr,Nt");
  for (int k = 0; k < spec.energy.size(); ++k) {
    out.row({csv::fmt(k), csv::fmt(angular_to_ghz(spec.energy(k))), csv::fmt(spec.nr(k)),
             csv::fmt(spec.nt(k))});
  }
  ctx.outputs.emplace_back(out.path(), out.rows());
}

}  // namespace

void run(const RunOptions& opts) {
  if (opts.out_path.empty()) throw ConfigError("missing --out path");
  Context ctx{opts, {}, false, {}, {}};
  if (!opts.config_path.empty()) ctx.cfg = config::Config::parse_file(opts.config_path);
  if (opts.preset != "paper" && opts.preset != "ci") {
    throw ConfigError("unknown preset: " + opts.preset);
  }
  ctx.ci = opts.preset == "ci";

  if (opts.experiment == "poincare") {
    run_poincare(ctx);
  } else if (opts.experiment == "lyapunov") {
    run_lyapunov(ctx);
  } else if (opts.experiment == "floquet-sweep") {
    run_floquet_sweep(ctx);
  } else if (opts.experiment == "husimi") {
    run_husimi(ctx);
  } else if (opts.experiment == "level-stats") {
    run_level_stats(ctx);
  } else if (opts.experiment == "rates") {
    run_rates(ctx);
  } else if (opts.experiment == "steady-state") {
    run_steady_state(ctx);
  } else if (opts.experiment == "dephasing") {
    run_dephasing(ctx);
  } else if (opts.experiment == "dispersion") {
    run_dispersion(ctx);
  } else if (opts.experiment == "cqed-grid") {
    run_cqed_grid(ctx);
  } else if (opts.experiment == "cavity-pull") {
    run_cavity_pull(ctx);
  } else if (opts.experiment == "ncrit") {
    run_ncrit(ctx);
  } else if (opts.experiment == "dipole-stats") {
    run_dipole_stats(ctx);
  } else if (opts.experiment == "undriven-folded") {
    run_undriven_folded(ctx);
  } else {
    throw ConfigError("unknown experiment: " + opts.experiment);
  }
  write_manifest(ctx);
}

}  // namespace quasichaos::cli
