#include "chest/environment.hpp"

#include <algorithm>
#include <stdexcept>

namespace chest {

double Environment::noise_variance(double snr_db) const {
  return noise_variance_for_snr(snr_db, bundle.system.symbol_power, beta);
}

Environment build_environment(const ConfigBundle& bundle,
                              const std::optional<PathSet>& external_paths) {
  const auto& sys = bundle.system;
  Environment env;
  env.bundle = bundle;
  if (external_paths) {
    external_paths->check();
    if (external_paths->empty()) throw std::invalid_argument("external path set is empty");
    const double limit = bundle.cp_length * bundle.sample_interval;
    for (double tau : external_paths->delay) {
      if (tau < 0.0 || tau >= limit) {
        throw ConfigError("paths.tau_s", "delay " + std::to_string(tau) +
                                             " s outside [0, N_CP * Ts = " +
                                             std::to_string(limit) + " s)");
      }
    }
    env.paths = *external_paths;
  } else {
    Rng rng = make_stream(sys.seed, 0, 0, StreamPurpose::environment);
    env.paths = generate_paths(bundle.scenario, rng);
  }
  const int n_dt = std::min<int>(bundle.scenario.n_dt_paths, static_cast<int>(env.paths.size()));
  env.dt_paths = dt_truncate(env.paths, n_dt);

  env.geometry = make_ula(sys.n_rx, bundle.scenario.array_spacing, bundle.wavelength);
  env.grid = {sys.n_subcarriers, bundle.sample_interval, bundle.scenario.pulse_rolloff};
  env.pilot_indices = pilot_indices(sys.n_subcarriers, sys.n_pilots);

  env.steering = steering_matrix(env.paths, env.geometry);
  env.freq_full = frequency_response(env.paths, env.grid);
  env.freq_pilots.resize(sys.n_pilots, env.freq_full.cols());
  for (int k = 0; k < sys.n_pilots; ++k) {
    env.freq_pilots.row(k) = env.freq_full.row(env.pilot_indices[static_cast<std::size_t>(k)]);
  }
  env.covariance = channel_covariance(env.paths, env.steering, env.freq_pilots);
  env.beta = average_channel_gain(env.covariance);

  env.twin_prior = dt_subspace(env.dt_paths, env.geometry, env.grid, env.pilot_indices,
                               bundle.estimator.svd_rank_tolerance);
  env.twin = make_projectors(env.twin_prior);

  env.retained_taps =
      retained_taps(bundle.estimator.tau_max, bundle.sample_interval, sys.n_pilots);
  env.denoiser = delay_pruning_operator(sys.n_pilots, env.retained_taps);
  return env;
}

}  // namespace chest
