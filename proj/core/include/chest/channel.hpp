#pragma once

#include <span>

#include "chest/propagation.hpp"
#include "chest/random.hpp"
#include "chest/scenario.hpp"
#include "chest/types.hpp"

namespace chest {

/// Per-symbol complex path gains c_l[m].
struct FadingVector {
  CVector gains;
};

/// Space-frequency channel H[m] (N_rx x N, or N_rx x N_p on the pilot grid).
struct ChannelRealization {
  CMatrix h;
  int symbol_index = 0;
};

/// Received pilot observations Y^p[m].
struct RxBlock {
  CMatrix y;
  PilotPattern pilots;
};

/// Covariance of vec{H^p} kept in factored form R = Phi diag(p) Phi^H with
/// column l of Phi equal to k^p_l kron a_l.
class ChannelCovariance {
 public:
  ChannelCovariance() = default;
  ChannelCovariance(CMatrix factor, RVector powers, int n_rx, int n_pilots);

  const CMatrix& factor() const { return factor_; }
  const RVector& powers() const { return powers_; }
  int n_rx() const { return n_rx_; }
  int n_pilots() const { return n_pilots_; }
  Eigen::Index dimension() const { return factor_.rows(); }

  double trace() const;
  CMatrix dense() const;

 private:
  CMatrix factor_;
  RVector powers_;
  int n_rx_ = 0;
  int n_pilots_ = 0;
};

FadingVector draw_fading(std::span<const double> amplitudes, Rng& rng);

/// H = A diag(c) K^T. Throws std::invalid_argument on non-conformable inputs.
ChannelRealization assemble_channel(const CMatrix& steering, const FadingVector& fading,
                                    const CMatrix& freq_response, int symbol_index = 0);

ChannelCovariance channel_covariance(const PathSet& paths, const CMatrix& steering,
                                     const CMatrix& freq_response_pilots);

ChannelCovariance channel_covariance(const PathSet& paths, const ArrayGeometry& geom,
                                     const SamplingGrid& grid,
                                     std::span<const int> pilot_indices);

/// Y^p = H^p diag(x^p) + W^p with i.i.d. CN(0, noise_variance) entries.
RxBlock simulate_uplink(const ChannelRealization& hp, const PilotPattern& pilots,
                        double noise_variance, Rng& rng);

/// Same model with a caller-supplied unit-variance noise draw, so one draw
/// can be reused across SNR points.
RxBlock simulate_uplink(const ChannelRealization& hp, const PilotPattern& pilots,
                        double noise_variance, const CMatrix& unit_noise);

/// beta = Tr{R^p} / (N_p N_rx).
double average_channel_gain(const ChannelCovariance& cov);
double average_channel_gain(const CMatrix& dense_cov, int n_rx, int n_pilots);

}  // namespace chest
