#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chest/random.hpp"
#include "chest/scenario.hpp"
#include "chest/types.hpp"

namespace chest {

/// Per-path geometry: elevation, azimuth (rad), delay (s), mean amplitude.
struct PathSet {
  std::vector<double> elevation;
  std::vector<double> azimuth;
  std::vector<double> delay;
  std::vector<double> amplitude;

  std::size_t size() const { return delay.size(); }
  bool empty() const { return delay.empty(); }
  void push_back(double theta, double phi, double tau, double alpha);
  /// Throws std::invalid_argument on ragged columns or negative amplitudes.
  void check() const;
};

struct ArrayGeometry {
  std::vector<Vec3> positions;  // meters
  double wavelength = 0.0;      // meters

  int size() const { return static_cast<int>(positions.size()); }
};

/// Time/frequency sampling needed to evaluate the pulse-shaped delay
/// response.
struct SamplingGrid {
  int n_subcarriers = 0;
  double sample_interval = 0.0;
  double rolloff = 0.0;
};

/// Pulse samples are kept this many samples beyond each edge of [0, N) and
/// folded back onto the N-point window.
inline constexpr int kPulseGuard = 16;

/// Uniform linear array along x with element 0 at the origin.
ArrayGeometry make_ula(int n_rx, double spacing_fraction, double wavelength);

/// Uniform angles and delays, exponential power-delay profile normalized to
/// unit total power.
PathSet generate_paths(const ScenarioConfig& scen, Rng& rng);

/// The n strongest paths (amplitude desc, then delay asc, then index asc),
/// returned in their original order. Amplitudes are left untouched.
PathSet dt_truncate(const PathSet& paths, int n);

Vec3 direction_vector(double theta, double phi);

CVector steering_vector(const Vec3& v, const ArrayGeometry& geom);

/// N_rx x L, one steering vector per path.
CMatrix steering_matrix(const PathSet& paths, const ArrayGeometry& geom);

/// Raised-cosine impulse response at (nu - delay_norm).
double pulse_response(double nu, double delay_norm, double rolloff);

/// N x L folded time response G, column l holding g(nu - tau_l / Ts).
CMatrix delay_response(const PathSet& paths, const SamplingGrid& grid);

/// K = F G with F the unnormalized N-point DFT (negative exponent). Only the
/// requested rows when pilot indices are given.
CMatrix frequency_response(const PathSet& paths, const SamplingGrid& grid,
                           std::optional<std::span<const int>> pilot_indices = std::nullopt);

/// N x N unnormalized DFT matrix, entries exp(-j 2 pi k n / N).
CMatrix dft_matrix(int n);

// CSV with header theta_rad,phi_rad,tau_s,alpha.
PathSet read_paths_csv(const std::string& path);
void write_paths_csv(const PathSet& paths, const std::string& path);

}  // namespace chest
