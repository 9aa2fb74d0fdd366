#include "chest/scenario.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace chest {
namespace {

bool is_power_of_two(int n) { return n >= 2 && (n & (n - 1)) == 0; }

template <typename T>
std::string str(const T& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

}  // namespace

ConfigBundle validate_config(const SystemConfig& sys, const ScenarioConfig& scen,
                             const EstimatorConfig& est, const ExperimentConfig& exp) {
  const int n = sys.n_subcarriers;
  require(is_power_of_two(n), "system.n_subcarriers",
          "must be a power of two >= 2 (got " + str(n) + ")");
  require(sys.n_pilots >= 1 && sys.n_pilots <= n, "system.n_pilots",
          "must satisfy 1 <= N_p <= N (got " + str(sys.n_pilots) + ")");
  require(n % sys.n_pilots == 0, "system.n_pilots",
          "N mod N_p must be 0 (N=" + str(n) + ", N_p=" + str(sys.n_pilots) + ")");
  require(sys.n_rx >= 1, "system.n_rx", "must be >= 1");
  require(sys.symbol_power > 0.0, "system.symbol_power", "must be > 0");
  require(sys.n_trials >= 1, "system.n_trials", "must be >= 1");
  require(sys.subcarrier_spacing > 0.0, "system.subcarrier_spacing", "must be > 0");
  require(sys.carrier_freq > 0.0, "system.carrier_freq", "must be > 0");
  require(!sys.snr_grid.empty(), "system.snr_grid", "must not be empty");
  const int cp = sys.cp_length.value_or(n / 8);
  require(cp >= 0, "system.cp_length", "must be >= 0");

  require(scen.n_paths >= 1, "scenario.n_paths", "must be >= 1");
  require(scen.n_dt_paths >= 1 && scen.n_dt_paths <= scen.n_paths, "scenario.n_dt_paths",
          "must satisfy 1 <= L_dt <= L (got " + str(scen.n_dt_paths) + ", L=" +
              str(scen.n_paths) + ")");
  require(scen.delay_spread >= 0.0, "scenario.delay_spread", "must be >= 0");
  require(scen.pdp_decay >= 0.0, "scenario.pdp_decay", "must be >= 0");
  require(scen.azimuth_range.lo <= scen.azimuth_range.hi, "scenario.azimuth_range",
          "lower bound exceeds upper bound");
  require(scen.elevation_range.lo <= scen.elevation_range.hi, "scenario.elevation_range",
          "lower bound exceeds upper bound");
  require(scen.array_spacing > 0.0, "scenario.array_spacing", "must be > 0");
  require(scen.pulse_rolloff >= 0.0 && scen.pulse_rolloff < 1.0, "scenario.pulse_rolloff",
          "must lie in [0, 1)");

  require(est.tau_max > 0.0, "estimator.tau_max", "must be > 0");
  require(est.n_batch >= 1, "estimator.n_batch", "must be >= 1");
  require(est.svd_rank_tolerance > 0.0 && est.svd_rank_tolerance < 1.0,
          "estimator.svd_rank_tolerance", "must lie in (0, 1)");
  const int rank_s = est.bml_rank_spatial.value_or(scen.n_dt_paths);
  const int rank_t = est.bml_rank_temporal.value_or(scen.n_dt_paths);
  require(rank_s >= 1 && rank_s <= sys.n_rx, "estimator.bml_rank_spatial",
          "must lie in [1, N_rx] (got " + str(rank_s) + ")");
  require(rank_t >= 1 && rank_t <= sys.n_pilots, "estimator.bml_rank_temporal",
          "must lie in [1, N_p] (got " + str(rank_t) + ")");

  require(exp.pilot_grid >= 1, "experiment.pilot_grid", "must be >= 1");
  for (int np : exp.pilot_counts) {
    require(np >= 1 && exp.pilot_grid % np == 0, "experiment.pilot_counts",
            "each count must divide pilot_grid (got " + str(np) + ")");
  }
  require(exp.desk_n_rx >= 1, "experiment.desk_n_rx", "must be >= 1");
  require(is_power_of_two(exp.desk_pilot_subcarriers) &&
              exp.desk_pilot_subcarriers % exp.pilot_grid == 0,
          "experiment.desk_pilot_subcarriers",
          "must be a power of two divisible by pilot_grid");
  require(is_power_of_two(exp.full_pilot_subcarriers) &&
              exp.full_pilot_subcarriers % exp.pilot_grid == 0,
          "experiment.full_pilot_subcarriers",
          "must be a power of two divisible by pilot_grid");
  for (int nb : exp.batch_sizes) {
    require(nb >= 1, "experiment.batch_sizes", "entries must be >= 1");
  }
  require(exp.threads >= 1, "experiment.threads", "must be >= 1");

  ConfigBundle b;
  b.system = sys;
  b.scenario = scen;
  b.estimator = est;
  b.experiment = exp;
  b.cp_length = cp;
  b.bandwidth = n * sys.subcarrier_spacing;
  b.sample_interval = 1.0 / b.bandwidth;
  b.symbol_duration = (n + cp) * b.sample_interval;
  b.wavelength = kSpeedOfLight / sys.carrier_freq;
  b.bml_rank_spatial = rank_s;
  b.bml_rank_temporal = rank_t;

  // No intersymbol interference: every path must end inside the prefix.
  require(scen.delay_spread < cp * b.sample_interval, "scenario.delay_spread",
          "must be strictly below N_CP * Ts = " + str(cp * b.sample_interval) + " s (got " +
              str(scen.delay_spread) + " s)");
  return b;
}

std::vector<int> pilot_indices(int n_subcarriers, int n_pilots) {
  if (n_pilots < 1 || n_pilots > n_subcarriers || n_subcarriers % n_pilots != 0) {
    throw std::invalid_argument("pilot_indices: N_p must divide N (N=" + str(n_subcarriers) +
                                ", N_p=" + str(n_pilots) + ")");
  }
  const int spacing = n_subcarriers / n_pilots;
  std::vector<int> idx(static_cast<std::size_t>(n_pilots));
  for (int k = 0; k < n_pilots; ++k) idx[static_cast<std::size_t>(k)] = k * spacing;
  return idx;
}

PilotPattern build_pilot_pattern(int n_subcarriers, int n_pilots, double symbol_power,
                                 Rng& rng) {
  PilotPattern p;
  p.indices = pilot_indices(n_subcarriers, n_pilots);
  const double a = std::sqrt(symbol_power);
  static constexpr std::array<Complex, 4> kQpsk{Complex{1, 0}, Complex{0, 1}, Complex{-1, 0},
                                                Complex{0, -1}};
  std::uniform_int_distribution<int> pick(0, 3);
  p.symbols.resize(n_pilots);
  for (int k = 0; k < n_pilots; ++k) p.symbols(k) = a * kQpsk[static_cast<std::size_t>(pick(rng))];
  return p;
}

double noise_variance_for_snr(double snr_db, double symbol_power, double beta) {
  if (!(beta > 0.0)) {
    throw std::invalid_argument("noise_variance_for_snr: beta must be > 0");
  }
  return symbol_power * beta / db_to_linear(snr_db);
}

}  // namespace chest
