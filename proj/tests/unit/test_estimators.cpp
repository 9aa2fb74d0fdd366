#include <gtest/gtest.h>

#include "chest/channel.hpp"
#include "chest/estimators.hpp"
#include "chest/linalg.hpp"

using namespace chest;

namespace {

constexpr double kLambda = 299792458.0 / 28e9;
constexpr double kTs = 1.0 / 30.72e6;

PathSet twin_paths(int n) {
  PathSet p;
  for (int l = 0; l < n; ++l) p.push_back(0.01 * l, 0.4 + 0.5 * l, (0.3 + 1.1 * l) * kTs, 1.0);
  return p;
}

ProjectorPair twin_projectors(const PathSet& p, int n_rx, int n, int n_p) {
  return make_projectors(dt_subspace(p, make_ula(n_rx, 0.5, kLambda), {n, kTs, 0.25},
                                     pilot_indices(n, n_p), 1e-8));
}

ChannelEstimate as_ls(CMatrix h) { return {std::move(h), Grid::pilot, Method::ls}; }

}  // namespace

TEST(Methods, NamesRoundTrip) {
  for (Method m : {Method::ls, Method::denoise, Method::bml, Method::emdt, Method::ideal}) {
    EXPECT_EQ(method_from_string(to_string(m)), m);
  }
  EXPECT_THROW(method_from_string("mmse"), std::invalid_argument);
}

TEST(LsEstimate, NoiselessRecoversChannel) {
  Rng rng = make_stream(1, 0, 0, StreamPurpose::validation);
  ChannelRealization h{draw_circular_gaussian(8, 16, rng), 0};
  Rng rp = make_stream(1, 0, 0, StreamPurpose::pilots);
  const PilotPattern pilots = build_pilot_pattern(64, 16, 3.0, rp);
  Rng rn = make_stream(1, 0, 0, StreamPurpose::noise);
  const ChannelEstimate e = ls_estimate(simulate_uplink(h, pilots, 0.0, rn));
  EXPECT_LT((e.h_hat - h.h).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(e.method, Method::ls);
}

TEST(LsEstimate, ErrorIsWhiteWithVarianceNoiseOverPower) {
  constexpr int reps = 400;
  Rng rng = make_stream(2, 0, 0, StreamPurpose::validation);
  double err = 0.0;
  for (int r = 0; r < reps; ++r) {
    ChannelRealization h{draw_circular_gaussian(16, 32, rng), 0};
    const PilotPattern pilots = build_pilot_pattern(64, 32, 2.0, rng);
    err += (ls_estimate(simulate_uplink(h, pilots, 0.5, rng)).h_hat - h.h).squaredNorm();
  }
  EXPECT_NEAR(err / (reps * 16.0 * 32.0), 0.25, 0.01);
}

TEST(ProjectEstimate, IdentityProjectorsAreExact) {
  Rng rng = make_stream(3, 0, 0, StreamPurpose::validation);
  const CMatrix x = draw_circular_gaussian(6, 4, rng);
  ProjectorPair id{CMatrix::Identity(6, 6), CMatrix::Identity(4, 4), 6, 4};
  EXPECT_EQ(project_estimate(as_ls(x), id).h_hat, x);
}

TEST(ProjectEstimate, InSubspaceChannelIsUnchanged) {
  const PathSet p = twin_paths(5);
  const ProjectorPair proj = twin_projectors(p, 64, 64, 32);
  Rng rng = make_stream(4, 0, 0, StreamPurpose::fading);
  const CMatrix h = assemble_channel(steering_matrix(p, make_ula(64, 0.5, kLambda)),
                                     draw_fading(p.amplitude, rng),
                                     frequency_response(p, {64, kTs, 0.25}, pilot_indices(64, 32)))
                        .h;
  EXPECT_LT((project_estimate(as_ls(h), proj).h_hat - h).norm() / h.norm(), 1e-8);
}

TEST(ProjectEstimate, PureNoiseEnergyFraction) {
  const ProjectorPair proj = twin_projectors(twin_paths(5), 64, 64, 32);
  Rng rng = make_stream(5, 0, 0, StreamPurpose::noise);
  double in = 0.0, out = 0.0;
  for (int r = 0; r < 400; ++r) {
    const CMatrix w = draw_circular_gaussian(64, 32, rng);
    in += w.squaredNorm();
    out += project_estimate(as_ls(w), proj).h_hat.squaredNorm();
  }
  EXPECT_NEAR(out / in, 25.0 / 2048.0, 0.05 * 25.0 / 2048.0);
}

TEST(ProjectEstimate, ErrorDecomposesIntoComplementAndProjectedNoise) {
  // vec{H - Pi_S H_LS Pi_T} = Q^perp h - Q w~ with w~ = vec{W diag(x)^-1}
  const PathSet p = twin_paths(3);
  const ProjectorPair proj = twin_projectors(p, 8, 64, 16);
  Rng rng = make_stream(6, 0, 0, StreamPurpose::validation);
  ChannelRealization h{draw_circular_gaussian(8, 16, rng), 0};
  const PilotPattern pilots = build_pilot_pattern(64, 16, 1.0, rng);
  const CMatrix w = draw_circular_gaussian(8, 16, rng);
  const ChannelEstimate ls = ls_estimate(simulate_uplink(h, pilots, 0.3, w));
  const CVector lhs = linalg::vec(h.h - project_estimate(ls, proj).h_hat);
  const CMatrix q = projection_matrix(proj);
  const CMatrix q_perp = CMatrix::Identity(q.rows(), q.cols()) - q;
  const CVector w_tilde = linalg::vec(std::sqrt(0.3) * w * pilots.symbols.cwiseInverse().asDiagonal());
  const CVector rhs = q_perp * linalg::vec(h.h) - q * w_tilde;
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ProjectEstimate, LinearInObservations) {
  const ProjectorPair proj = twin_projectors(twin_paths(4), 8, 64, 16);
  Rng rng = make_stream(7, 0, 0, StreamPurpose::validation);
  const CMatrix a = draw_circular_gaussian(8, 16, rng);
  const CMatrix b = draw_circular_gaussian(8, 16, rng);
  const Complex s{0.3, -1.2};
  const CMatrix lhs = project_estimate(as_ls(a + s * b), proj).h_hat;
  const CMatrix rhs =
      project_estimate(as_ls(a), proj).h_hat + s * project_estimate(as_ls(b), proj).h_hat;
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Denoise, RetainedTapsAtDefaults) {
  EXPECT_EQ(retained_taps(0.5e-6, kTs, 32), 16);
  EXPECT_EQ(retained_taps(10 * kTs, kTs, 32), 10);
  EXPECT_EQ(retained_taps(1e-3, kTs, 32), 32);
  EXPECT_EQ(retained_taps(1e-12, kTs, 32), 1);
  EXPECT_THROW(retained_taps(0.0, kTs, 32), std::invalid_argument);
}

TEST(Denoise, NoPruningWhenWindowCoversRange) {
  Rng rng = make_stream(8, 0, 0, StreamPurpose::validation);
  const CMatrix x = draw_circular_gaussian(4, 32, rng);
  EXPECT_EQ(denoise_estimate(as_ls(x), 64 * kTs, kTs).h_hat, x);
}

TEST(Denoise, InWindowIntegerDelaysAreExact) {
  PathSet p;
  for (int d : {0, 3, 9, 15}) p.push_back(0.0, 0.2 * d, d * kTs, 0.5);
  const auto pilots = pilot_indices(64, 32);
  const CMatrix h = steering_matrix(p, make_ula(4, 0.5, kLambda)) *
                    frequency_response(p, {64, kTs, 0.0}, pilots).transpose();
  const CMatrix d = denoise_estimate(as_ls(h), 0.5e-6, kTs).h_hat;
  EXPECT_LT((d - h).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Denoise, PureNoiseKeepsTapFraction) {
  Rng rng = make_stream(9, 0, 0, StreamPurpose::noise);
  double in = 0.0, out = 0.0;
  for (int r = 0; r < 200; ++r) {
    const CMatrix w = draw_circular_gaussian(16, 32, rng);
    in += w.squaredNorm();
    out += denoise_estimate(as_ls(w), 0.5e-6, kTs).h_hat.squaredNorm();
  }
  EXPECT_NEAR(out / in, 16.0 / 32.0, 0.02);
}

TEST(Denoise, OperatorIsOrthogonalProjector) {
  const CMatrix d = delay_pruning_operator(32, 16);
  EXPECT_LT((d * d - d).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((d - d.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(d.trace().real(), 16.0, 1e-12);
}

TEST(Interpolate, ConstantChannelIsExact) {
  const auto pilots = pilot_indices(64, 8);
  const CMatrix c = CMatrix::Constant(3, 8, Complex(0.4, -2.0));
  const CMatrix full = interpolate_full(as_ls(c), pilots, 64).h_hat;
  EXPECT_LT((full - CMatrix::Constant(3, 64, Complex(0.4, -2.0))).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Interpolate, AffineChannelExactBetweenPilotsAndHeldAfter) {
  const auto pilots = pilot_indices(64, 16);
  auto f = [](int k) { return Complex(1.0 + 0.5 * k, -0.25 * k); };
  CMatrix p(2, 16);
  for (int i = 0; i < 16; ++i) p.col(i).setConstant(f(pilots[static_cast<std::size_t>(i)]));
  const ChannelEstimate full = interpolate_full(as_ls(p), pilots, 64);
  EXPECT_EQ(full.grid, Grid::full);
  for (int k = 0; k <= 60; ++k) EXPECT_LT(std::abs(full.h_hat(1, k) - f(k)), 1e-12) << k;
  for (int k = 61; k < 64; ++k) EXPECT_EQ(full.h_hat(0, k), f(60));
}

TEST(Interpolate, FullPilotingAndSinglePilot) {
  Rng rng = make_stream(10, 0, 0, StreamPurpose::validation);
  const CMatrix x = draw_circular_gaussian(3, 16, rng);
  EXPECT_EQ(interpolate_full(as_ls(x), pilot_indices(16, 16), 16).h_hat, x);
  const CMatrix one = draw_circular_gaussian(3, 1, rng);
  const CMatrix held = interpolate_full(as_ls(one), pilot_indices(16, 1), 16).h_hat;
  for (int k = 0; k < 16; ++k) EXPECT_EQ(held.col(k), one.col(0));
}
