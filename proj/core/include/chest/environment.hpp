#pragma once

#include <optional>
#include <vector>

#include "chest/channel.hpp"
#include "chest/estimators.hpp"
#include "chest/priors.hpp"
#include "chest/propagation.hpp"
#include "chest/scenario.hpp"

namespace chest {

/// Everything that stays fixed over a coherence block: geometry, the twin's
/// prior, the exact covariance and the denoiser. Built once per seed and
/// shared read-only by all trials.
struct Environment {
  ConfigBundle bundle;
  PathSet paths;
  PathSet dt_paths;
  ArrayGeometry geometry;
  SamplingGrid grid;
  std::vector<int> pilot_indices;
  CMatrix steering;     // N_rx x L
  CMatrix freq_pilots;  // N_p x L
  CMatrix freq_full;    // N x L
  ChannelCovariance covariance;
  double beta = 0.0;
  SubspacePrior twin_prior;
  ProjectorPair twin;
  int retained_taps = 0;
  CMatrix denoiser;  // N_p x N_p, right-multiplies the LS estimate

  double noise_variance(double snr_db) const;
};

/// Paths are drawn from the bundle's seed unless an external set is given.
Environment build_environment(const ConfigBundle& bundle,
                              const std::optional<PathSet>& external_paths = std::nullopt);

}  // namespace chest
