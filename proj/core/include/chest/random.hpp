#pragma once

#include <cstdint>
#include <random>

#include "chest/types.hpp"

namespace chest {

using Rng = std::mt19937_64;

/// What a random stream is used for. Part of the stream key so that, e.g.,
/// the noise of trial 7 never depends on how many fading draws were made.
enum class StreamPurpose : std::uint64_t {
  environment = 1,
  pilots = 2,
  fading = 3,
  noise = 4,
  bml_fading = 5,
  bml_pilots = 6,
  bml_noise = 7,
  validation = 8,
};

/// Independent stream keyed by (seed, trial, symbol, purpose). Any execution
/// order over trials yields the same draws.
Rng make_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t symbol,
                StreamPurpose purpose);

/// Circular complex Gaussian with unit variance per complex entry.
Complex draw_circular_gaussian(Rng& rng);

CMatrix draw_circular_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);

}  // namespace chest
