#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>

#include "experiments.hpp"
#include "quasichaos/errors.hpp"
#include "quasichaos/linalg.hpp"

namespace {

void emit_error(const std::string& kind, const std::string& message) {
  nlohmann::json j;
  j["error"] = {{"type", kind}, {"message", message}};
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  quasichaos::linalg::pin_blas_single_thread();

  CLI::App app{"quasichaos: driven-transmon chaos experiments"};
  app.require_subcommand(1);

  quasichaos::cli::RunOptions opts;
  for (const auto& name : quasichaos::cli::kExperiments) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", opts.config_path, "config file (key = value)");
    sub->add_option("--out", opts.out_path, "output file")->required();
    sub->add_option("--workers", opts.workers, "worker threads (default: env/hardware)");
    sub->add_option("--preset", opts.preset, "paper|ci defaults")
        ->check(CLI::IsMember({"paper", "ci"}));
    sub->add_option("--seed", opts.seed, "seed recorded in the manifest");
    if (name == "husimi") {
      sub->add_option("--state-index", opts.state_index, "Floquet mode (mean-energy order)");
      sub->add_option("--time-fraction", opts.time_fraction, "sample time in periods");
    }
    if (name == "dispersion") {
      sub->add_option("--level", opts.level, "tracked level index");
      sub->add_option("--out-fourier", opts.out_fourier, "phase-slip spectrum output");
    }
    if (name == "level-stats") {
      sub->add_option("--ng-samples", opts.ng_samples, "offset-charge ensemble size");
    }
    if (name == "ncrit") {
      sub->add_option("--g", opts.ncrit_g, "coupling g/2pi in GHz");
      sub->add_option("--omega-d", opts.ncrit_omega_d, "drive frequency in GHz");
      sub->add_option("--nch", opts.ncrit_nch, "number of chaotic states");
    }
    sub->callback([&opts, name] { opts.experiment = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    emit_error("config", e.what());
    return 2;
  }

  try {
    quasichaos::cli::run(opts);
  } catch (const quasichaos::AccuracyError& e) {
    emit_error("accuracy", e.what());
    return 3;
  } catch (const quasichaos::ConfigError& e) {
    emit_error("config", e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 4;
  }
  return 0;
}
