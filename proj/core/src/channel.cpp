#include "chest/channel.hpp"

#include <cmath>
#include <stdexcept>


namespace chest {

ChannelCovariance::ChannelCovariance(CMatrix factor, RVector powers, int n_rx, int n_pilots)
    : factor_(std::move(factor)), powers_(std::move(powers)), n_rx_(n_rx), n_pilots_(n_pilots) {
  if (factor_.cols() != powers_.size() || factor_.rows() != Eigen::Index{n_rx} * n_pilots) {
    throw std::invalid_argument("ChannelCovariance: inconsistent factor dimensions");
  }
}

double ChannelCovariance::trace() const {
  return (factor_.colwise().squaredNorm().transpose().array() * powers_.array()).sum();
}

CMatrix ChannelCovariance::dense() const {
  const CMatrix scaled = factor_ * powers_.cast<Complex>().asDiagonal();
  return scaled * factor_.adjoint();
}

FadingVector draw_fading(std::span<const double> amplitudes, Rng& rng) {
  FadingVector f;
  f.gains.resize(static_cast<Eigen::Index>(amplitudes.size()));
  for (std::size_t l = 0; l < amplitudes.size(); ++l) {
    if (amplitudes[l] < 0.0) throw std::invalid_argument("draw_fading: negative amplitude");
    // Draw even for zero amplitude so the stream position does not depend on it.
    f.gains(static_cast<Eigen::Index>(l)) = amplitudes[l] * draw_circular_gaussian(rng);
  }
  return f;
}

ChannelRealization assemble_channel(const CMatrix& steering, const FadingVector& fading,
                                    const CMatrix& freq_response, int symbol_index) {
  if (steering.cols() != fading.gains.size() || freq_response.cols() != fading.gains.size()) {
    throw std::invalid_argument("assemble_channel: steering has " +
                                std::to_string(steering.cols()) + " paths, fading " +
                                std::to_string(fading.gains.size()) + ", frequency response " +
                                std::to_string(freq_response.cols()));
  }
  ChannelRealization h;
  h.h = (steering * fading.gains.asDiagonal()) * freq_response.transpose();
  h.symbol_index = symbol_index;
  return h;
}

ChannelCovariance channel_covariance(const PathSet& paths, const CMatrix& steering,
                                     const CMatrix& freq_response_pilots) {
  paths.check();
  const auto n_paths = static_cast<Eigen::Index>(paths.size());
  if (steering.cols() != n_paths || freq_response_pilots.cols() != n_paths) {
    throw std::invalid_argument("channel_covariance: path count mismatch");
  }
  const auto n_rx = steering.rows();
  const auto n_p = freq_response_pilots.rows();
  CMatrix phi(n_rx * n_p, n_paths);
  RVector power(n_paths);
  for (Eigen::Index l = 0; l < n_paths; ++l) {
    // vec{a k^T} = k kron a
    for (Eigen::Index k = 0; k < n_p; ++k) {
      phi.col(l).segment(k * n_rx, n_rx) = freq_response_pilots(k, l) * steering.col(l);
    }
    const double a = paths.amplitude[static_cast<std::size_t>(l)];
    power(l) = a * a;
  }
  return ChannelCovariance(std::move(phi), std::move(power), static_cast<int>(n_rx),
                           static_cast<int>(n_p));
}

ChannelCovariance channel_covariance(const PathSet& paths, const ArrayGeometry& geom,
                                     const SamplingGrid& grid,
                                     std::span<const int> pilot_indices) {
  return channel_covariance(paths, steering_matrix(paths, geom),
                            frequency_response(paths, grid, pilot_indices));
}

RxBlock simulate_uplink(const ChannelRealization& hp, const PilotPattern& pilots,
                        double noise_variance, const CMatrix& unit_noise) {
  if (noise_variance < 0.0) throw std::invalid_argument("simulate_uplink: negative noise");
  if (hp.h.cols() != pilots.symbols.size() || unit_noise.rows() != hp.h.rows() ||
      unit_noise.cols() != hp.h.cols()) {
    throw std::invalid_argument("simulate_uplink: dimension mismatch");
  }
  RxBlock rx;
  rx.y = hp.h * pilots.symbols.asDiagonal();
  if (noise_variance > 0.0) rx.y += std::sqrt(noise_variance) * unit_noise;
  rx.pilots = pilots;
  return rx;
}

RxBlock simulate_uplink(const ChannelRealization& hp, const PilotPattern& pilots,
                        double noise_variance, Rng& rng) {
  return simulate_uplink(hp, pilots, noise_variance,
                         draw_circular_gaussian(hp.h.rows(), hp.h.cols(), rng));
}

double average_channel_gain(const ChannelCovariance& cov) {
  return cov.trace() / (static_cast<double>(cov.n_pilots()) * cov.n_rx());
}

double average_channel_gain(const CMatrix& dense_cov, int n_rx, int n_pilots) {
  if (dense_cov.rows() != Eigen::Index{n_rx} * n_pilots || dense_cov.cols() != dense_cov.rows()) {
    throw std::invalid_argument("average_channel_gain: covariance is not (N_rx N_p)^2");
  }
  return dense_cov.trace().real() / (static_cast<double>(n_pilots) * n_rx);
}

}  // namespace chest
