#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chest/random.hpp"
#include "chest/types.hpp"

namespace chest {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// OFDM numerology and Monte Carlo controls. Defaults follow the mmWave
/// uplink setup: 64 subcarriers at 480 kHz (30.72 MHz), 28 GHz carrier.
struct SystemConfig {
  int n_subcarriers = 64;
  std::optional<int> cp_length;  // defaults to n_subcarriers / 8
  int n_rx = 64;
  int n_pilots = 32;
  double subcarrier_spacing = 480e3;  // Hz
  double carrier_freq = 28e9;         // Hz
  double symbol_power = 1.0;
  std::vector<double> snr_grid{-20, -15, -10, -5, 0, 5, 10, 15, 20};  // dB
  int n_trials = 500;
  std::uint64_t seed = 1;
};

/// Synthetic multipath environment standing in for a ray-traced scene.
struct ScenarioConfig {
  int n_paths = 25;
  int n_dt_paths = 5;
  double delay_spread = 200e-9;  // s, upper end of the uniform delay draw
  double pdp_decay = 30.0;       // exponential power-delay-profile rate
  Interval azimuth_range{0.0, kPi};
  Interval elevation_range{-kPi / 12.0, kPi / 12.0};
  double array_spacing = 0.5;  // fraction of the wavelength
  double pulse_rolloff = 0.25;
};

struct EstimatorConfig {
  double tau_max = 0.5e-6;  // s
  int n_batch = 64;
  std::optional<int> bml_rank_spatial;   // nullopt = "auto" (= n_dt_paths)
  std::optional<int> bml_rank_temporal;  // nullopt = "auto" (= n_dt_paths)
  double svd_rank_tolerance = 1e-8;
};

/// Knobs that only the experiment runners read.
struct ExperimentConfig {
  std::vector<double> ecdf_snr_db{-10.0, 5.0};
  std::vector<int> pilot_counts{1, 2, 4, 8, 16, 32, 64};
  int pilot_grid = 64;
  std::vector<double> pilot_snr_db{-15.0, 0.0, 15.0};
  int desk_n_rx = 16;
  int desk_pilot_subcarriers = 256;
  int full_pilot_subcarriers = 2048;
  std::vector<int> batch_sizes{16, 64, 256};
  int threads = 1;
};

/// Validated configuration plus derived physical quantities.
struct ConfigBundle {
  SystemConfig system;
  ScenarioConfig scenario;
  EstimatorConfig estimator;
  ExperimentConfig experiment;

  int cp_length = 0;
  double bandwidth = 0.0;        // B = N * df
  double sample_interval = 0.0;  // Ts = 1 / B
  double symbol_duration = 0.0;  // T = (N + N_CP) Ts
  double wavelength = 0.0;       // c / fc
  int bml_rank_spatial = 0;
  int bml_rank_temporal = 0;
};

struct PilotPattern {
  std::vector<int> indices;
  CVector symbols;
};

/// Checks every invariant and fills in the derived quantities.
/// Throws ConfigError naming the first violated field.
ConfigBundle validate_config(const SystemConfig& sys, const ScenarioConfig& scen,
                             const EstimatorConfig& est,
                             const ExperimentConfig& exp = {});

/// Evenly spaced pilots starting at subcarrier 0, QPSK symbols scaled to
/// power symbol_power.
PilotPattern build_pilot_pattern(int n_subcarriers, int n_pilots, double symbol_power,
                                 Rng& rng);

std::vector<int> pilot_indices(int n_subcarriers, int n_pilots);

/// sigma_w^2 such that SNR = sigma_x^2 * beta / sigma_w^2 hits snr_db.
double noise_variance_for_snr(double snr_db, double symbol_power, double beta);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

// JSON configuration. Sections: "system", "scenario", "estimator" and the
// optional "experiment". Unknown keys are rejected.
ConfigBundle parse_config(const std::string& json_text);
ConfigBundle load_config(const std::string& path);
std::string dump_config(const ConfigBundle& bundle);

}  // namespace chest
