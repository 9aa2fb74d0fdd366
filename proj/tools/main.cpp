// chest: Monte Carlo channel-estimation experiments from the command line.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "chest/chest.hpp"

namespace fs = std::filesystem;
using namespace chest;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct Options {
  std::string config;
  std::string out = "results";
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string paths;
  bool full_scale = false;
};

ConfigBundle load_bundle(const Options& o) {
  ConfigBundle b = o.config.empty() ? validate_config({}, {}, {}, {}) : load_config(o.config);
  SystemConfig sys = b.system;
  ExperimentConfig exp = b.experiment;
  if (o.trials) sys.n_trials = *o.trials;
  if (o.seed) sys.seed = *o.seed;
  if (o.threads) exp.threads = *o.threads;
  return validate_config(sys, b.scenario, b.estimator, exp);
}

void write_records(const std::vector<MetricsRecord>& rec, const fs::path& dir,
                   const std::string& stem, PlotAxis axis, bool has_se, bool has_nmse) {
  emit_csv(rec, dir / (stem + ".csv"));
  if (has_nmse) emit_plot(rec, dir / (stem + "_nmse.svg"), PlotMetric::nmse_db, axis);
  if (has_se) emit_plot(rec, dir / (stem + "_se.svg"), PlotMetric::spectral_efficiency, axis);
  std::cout << "wrote " << (dir / (stem + ".csv")).string() << " (" << rec.size()
            << " records)\n";
}

int run(ExperimentKind kind, const Options& o) {
  const ConfigBundle bundle = load_bundle(o);

  if (kind == ExperimentKind::validate) {
    bool ok = true;
    for (const auto& c : run_invariant_suite(bundle)) {
      std::printf("[%s] %s: %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
      ok = ok && c.passed;
    }
    return ok ? kExitOk : kExitValidation;
  }

  ExperimentPlan plan =
      make_plan(kind, bundle, o.full_scale ? Scale::full : Scale::desk, o.out);
  if (!o.paths.empty()) plan.external_paths = read_paths_csv(o.paths);
  const fs::path dir(plan.output_dir);
  std::cout << "running " << to_string(kind) << ": N_rx=" << plan.bundle.system.n_rx
            << " N=" << plan.bundle.system.n_subcarriers
            << " N_p=" << plan.bundle.system.n_pilots
            << " trials=" << plan.bundle.system.n_trials << '\n';

  switch (kind) {
    case ExperimentKind::nmse_sweep:
      write_records(run_nmse_sweep(plan), dir, "nmse", PlotAxis::snr_db, false, true);
      break;
    case ExperimentKind::se_sweep:
      write_records(run_se_sweep(plan), dir, "se", PlotAxis::snr_db, true, false);
      break;
    case ExperimentKind::pilot_sweep:
      write_records(run_pilot_sweep(plan), dir, "pilot_sweep", PlotAxis::n_pilots, true, true);
      break;
    case ExperimentKind::ecdf: {
      const auto tables = run_ecdf(plan);
      emit_ecdf_csv(tables, dir / "ecdf.csv");
      emit_ecdf_plot(tables, dir / "ecdf.svg");
      std::cout << "wrote " << (dir / "ecdf.csv").string() << " (" << tables.size()
                << " tables)\n";
      break;
    }
    case ExperimentKind::ntb_sweep: {
      const auto rec = run_ntb_sweep(plan);
      emit_ntb_csv(rec, dir / "ntb_sweep.csv");
      std::cout << "wrote " << (dir / "ntb_sweep.csv").string() << '\n';
      break;
    }
    case ExperimentKind::validate:
      break;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OFDM uplink channel estimation with a digital-twin subspace prior"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--trials", o.trials, "override system.n_trials")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "override system.seed");
    sub->add_option("--threads", o.threads, "worker threads for the trial loop")
        ->check(CLI::PositiveNumber);
  };

  const std::pair<ExperimentKind, const char*> kinds[] = {
      {ExperimentKind::nmse_sweep, "NMSE versus SNR for each estimator"},
      {ExperimentKind::se_sweep, "genie-aided MRC spectral efficiency versus SNR"},
      {ExperimentKind::ecdf, "ECDF of the post-combining SNR"},
      {ExperimentKind::pilot_sweep, "NMSE and overhead-adjusted SE versus pilot count"},
      {ExperimentKind::ntb_sweep, "BML high-SNR floor versus batch size"},
  };
  for (const auto& [kind, help] : kinds) {
    auto* sub = app.add_subcommand(std::string(to_string(kind)), help);
    add_common(sub);
    sub->add_option("--out", o.out, "output directory");
    sub->add_flag("--full-scale", o.full_scale,
                  "use the configured N_rx and the large pilot-sweep bandwidth");
    sub->add_option("--paths", o.paths, "external path set CSV (theta_rad,phi_rad,tau_s,alpha)")
        ->check(CLI::ExistingFile);
  }
  add_common(app.add_subcommand("validate", "run the invariant suite"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitValidation;
  }

  const auto* sub = app.get_subcommands().front();
  const auto start = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    code = run(experiment_from_string(sub->get_name()), o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cerr << "elapsed " << secs << " s\n";
  return code;
}
