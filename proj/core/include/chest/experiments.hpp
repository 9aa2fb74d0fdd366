#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chest/estimators.hpp"
#include "chest/metrics.hpp"
#include "chest/propagation.hpp"
#include "chest/scenario.hpp"

namespace chest {

enum class ExperimentKind { nmse_sweep, se_sweep, ecdf, pilot_sweep, ntb_sweep, validate };
enum class Scale { desk, full };

std::string_view to_string(ExperimentKind kind);
ExperimentKind experiment_from_string(std::string_view name);

struct ExperimentPlan {
  ExperimentKind kind = ExperimentKind::nmse_sweep;
  ConfigBundle bundle;
  std::vector<Method> methods;
  std::string output_dir;
  Scale scale = Scale::desk;
  std::optional<PathSet> external_paths;
};

/// Applies the scale profile (desk scale caps N_rx at experiment.desk_n_rx
/// and uses the desk pilot-sweep bandwidth), picks the default method list
/// and re-validates.
ExperimentPlan make_plan(ExperimentKind kind, const ConfigBundle& bundle, Scale scale,
                         std::string output_dir = {});

/// One record per (method, SNR). EM-DT records carry the analytic breakdown
/// and the same-trial noiseless floor.
std::vector<MetricsRecord> run_nmse_sweep(const ExperimentPlan& plan);

/// Genie-aided MRC spectral efficiency on the interpolated full grid, plus
/// an ideal-CSI reference.
std::vector<MetricsRecord> run_se_sweep(const ExperimentPlan& plan);

struct EcdfTable {
  std::string method;
  double snr_db = 0.0;
  Ecdf ecdf;
};

/// Post-combining SNR samples (per subcarrier, per trial) at the configured
/// ECDF SNR points.
std::vector<EcdfTable> run_ecdf(const ExperimentPlan& plan);

/// NMSE and overhead-scaled SE over the pilot subcarriers for each pilot
/// count, LS and EM-DT.
std::vector<MetricsRecord> run_pilot_sweep(const ExperimentPlan& plan);

struct BatchFloorRecord {
  int n_batch = 0;
  double snr_db = 0.0;
  double nmse = 0.0;
  double std_error = 0.0;
  int trials = 0;
  std::vector<double> trial_error;  // per-trial ||H_hat - H||^2
  double truth_energy = 0.0;
};

/// BML NMSE versus batch size at the highest SNR of the grid. Batches are
/// nested (smaller batches are prefixes of larger ones) and the test symbols
/// are shared, so differences between batch sizes are paired.
std::vector<BatchFloorRecord> run_ntb_sweep(const ExperimentPlan& plan);

}  // namespace chest
