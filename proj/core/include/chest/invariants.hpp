#pragma once

#include <string>
#include <vector>

#include "chest/scenario.hpp"

namespace chest {

struct InvariantCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Self-check of the algebra the estimators rely on: projector properties,
/// the vec/Kronecker identity, brute-force channel assembly, Monte Carlo
/// covariance and fading moments, denoiser projection properties and CSV
/// determinism.
std::vector<InvariantCheck> run_invariant_suite(const ConfigBundle& bundle);

}  // namespace chest
