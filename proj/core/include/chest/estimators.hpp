#pragma once

#include <string_view>

#include "chest/channel.hpp"
#include "chest/priors.hpp"
#include "chest/scenario.hpp"
#include "chest/types.hpp"

namespace chest {

enum class Method { ls, denoise, bml, emdt, ideal };
enum class Grid { pilot, full };

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);

struct ChannelEstimate {
  CMatrix h_hat;
  Grid grid = Grid::pilot;
  Method method = Method::ls;
};

/// Y^p diag(x^p)^-1.
ChannelEstimate ls_estimate(const RxBlock& rx);

/// Pi_S H_LS Pi_T. Serves both the twin prior and the batch-ML subspaces.
ChannelEstimate project_estimate(const ChannelEstimate& ls, const ProjectorPair& proj,
                                 Method tag = Method::emdt);

/// Number of pilot-grid delay taps kept by the CIR pruning. An N_p-point IDFT
/// of pilots spaced N/N_p apart yields taps spaced Ts apart, so
/// K = min(N_p, ceil(tau_max / Ts)).
int retained_taps(double tau_max, double sample_interval, int n_pilots);

/// N_p x N_p matrix D with H_denoised = H_LS D: IDFT, keep the first
/// `retained` taps, DFT back.
CMatrix delay_pruning_operator(int n_pilots, int retained);

ChannelEstimate denoise_estimate(const ChannelEstimate& ls, double tau_max,
                                 double sample_interval);

/// Linear interpolation between pilots (real and imaginary parts), constant
/// hold past the last pilot.
ChannelEstimate interpolate_full(const ChannelEstimate& est, const PilotPattern& pilots,
                                 int n_subcarriers);
ChannelEstimate interpolate_full(const ChannelEstimate& est, std::span<const int> indices,
                                 int n_subcarriers);

}  // namespace chest
