#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "chest/linalg.hpp"
#include "chest/propagation.hpp"

using namespace chest;

namespace {

constexpr double kLambda = 299792458.0 / 28e9;
constexpr double kTs = 1.0 / 30.72e6;

PathSet single_path(double tau, double theta = 0.0, double phi = 0.0, double alpha = 1.0) {
  PathSet p;
  p.push_back(theta, phi, tau, alpha);
  return p;
}

}  // namespace

TEST(DirectionVector, AxisCases) {
  const Vec3 x = direction_vector(0.0, 0.0);
  EXPECT_NEAR((x - Vec3(1, 0, 0)).norm(), 0.0, 1e-15);
  const Vec3 y = direction_vector(0.0, kPi / 2);
  EXPECT_NEAR((y - Vec3(0, 1, 0)).norm(), 0.0, 1e-15);
  for (double phi : {0.0, 0.7, 2.5}) {
    EXPECT_NEAR((direction_vector(kPi / 2, phi) - Vec3(0, 0, 1)).norm(), 0.0, 1e-15);
  }
  EXPECT_NEAR(direction_vector(0.3, 1.1).norm(), 1.0, 1e-15);
}

TEST(SteeringVector, EndfireAlternatesSign) {
  const ArrayGeometry g = make_ula(4, 0.5, kLambda);
  const CVector a = steering_vector(Vec3(1, 0, 0), g);
  const double want[] = {1, -1, 1, -1};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(a(i).real(), want[i], 1e-12);
    EXPECT_NEAR(a(i).imag(), 0.0, 1e-12);
  }
}

TEST(SteeringVector, BroadsideIsAllOnesAndNormIsNrx) {
  const ArrayGeometry g = make_ula(8, 0.5, kLambda);
  const CVector a = steering_vector(Vec3(0, 1, 0), g);
  EXPECT_NEAR((a - CVector::Ones(8)).norm(), 0.0, 1e-12);
  const CVector b = steering_vector(direction_vector(0.2, 1.3), g);
  EXPECT_NEAR(b.squaredNorm(), 8.0, 1e-12);
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(std::abs(b(i)), 1.0, 1e-14);
}

TEST(SteeringMatrix, CompositionAndRank) {
  const ArrayGeometry g = make_ula(64, 0.5, kLambda);
  PathSet one = single_path(0.0, 0.1, 0.9);
  const CMatrix a1 = steering_matrix(one, g);
  EXPECT_NEAR((a1.col(0) - steering_vector(direction_vector(0.1, 0.9), g)).norm(), 0.0, 0.0);

  PathSet dup = one;
  dup.push_back(0.1, 0.9, 1e-8, 0.5);
  EXPECT_EQ(linalg::numerical_rank(steering_matrix(dup, g), 1e-8), 1);

  PathSet five;
  for (int l = 0; l < 5; ++l) five.push_back(0.0, 0.3 + 0.6 * l, 0.0, 1.0);
  EXPECT_EQ(linalg::numerical_rank(steering_matrix(five, g), 1e-8), 5);
}

TEST(PulseResponse, NyquistPeakAndZeros) {
  for (double r : {0.0, 0.25, 0.5, 0.9}) EXPECT_DOUBLE_EQ(pulse_response(3.0, 3.0, r), 1.0);
  for (int k : {-3, -1, 1, 2, 7}) EXPECT_NEAR(pulse_response(k, 0.0, 0.0), 0.0, 1e-15);
  EXPECT_NEAR(pulse_response(0.5, 0.0, 0.0), 2.0 / kPi, 1e-15);
  // raised-cosine zeros also sit on the nonzero integers
  for (int k : {1, 2, 5}) EXPECT_NEAR(pulse_response(k, 0.0, 0.25), 0.0, 1e-15);
}

TEST(PulseResponse, RemovableSingularityIsContinuous) {
  const double r = 0.25;
  const double t0 = 1.0 / (2.0 * r);
  const double at = pulse_response(t0, 0.0, r);
  EXPECT_NEAR(at, kPi / 4.0 * std::sin(kPi * t0) / (kPi * t0), 1e-15);
  EXPECT_NEAR(pulse_response(t0 + 1e-7, 0.0, r), at, 1e-6);
  EXPECT_NEAR(pulse_response(-t0 - 1e-7, 0.0, r), at, 1e-6);
}

TEST(PulseResponse, SincEnergyIsUnitForFractionalDelay) {
  // Tail mass of sinc^2 decays like 1/W, so 1e-6 needs a wide window.
  constexpr int w = 1 << 20;
  for (double d : {0.0, 0.3, 0.5, 0.77}) {
    double e = 0.0;
    for (int nu = -w; nu <= w; ++nu) e += std::pow(pulse_response(nu, d, 0.0), 2);
    EXPECT_NEAR(e, 1.0, 1e-6) << "delay " << d;
  }
}

TEST(PulseResponse, RaisedCosineEnergyAtMostUnit) {
  for (double d : {0.0, 0.25, 0.5}) {
    double e = 0.0;
    for (int nu = -64; nu <= 64; ++nu) e += std::pow(pulse_response(nu, d, 0.25), 2);
    if (d == 0.0) {
      EXPECT_NEAR(e, 1.0, 1e-12);
    } else {
      EXPECT_LT(e, 1.0);
      EXPECT_GT(e, 0.85);
    }
  }
}

TEST(FrequencyResponse, ZeroDelayIsFlat) {
  const SamplingGrid grid{64, kTs, 0.0};
  const CMatrix k = frequency_response(single_path(0.0), grid);
  EXPECT_NEAR((k - CMatrix::Ones(64, 1)).norm(), 0.0, 1e-10);
  const CMatrix g = delay_response(single_path(0.0), grid);
  EXPECT_NEAR(g(0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(g.squaredNorm(), 1.0, 1e-15);
}

TEST(FrequencyResponse, ShiftTheorem) {
  const SamplingGrid grid{64, kTs, 0.0};
  for (int d : {1, 3, 7}) {
    const CMatrix k = frequency_response(single_path(d * kTs), grid);
    for (int n = 0; n < 64; ++n) {
      const Complex want = std::polar(1.0, -2.0 * kPi * n * d / 64.0);
      EXPECT_NEAR(std::abs(k(n, 0) - want), 0.0, 1e-10) << "d=" << d << " k=" << n;
    }
  }
}

TEST(FrequencyResponse, PilotRowsMatchFullGrid) {
  const SamplingGrid grid{64, kTs, 0.25};
  PathSet p = single_path(1.37 * kTs);
  p.push_back(0.1, 2.0, 4.2 * kTs, 0.4);
  const CMatrix full = frequency_response(p, grid);
  std::vector<int> all(64);
  for (int i = 0; i < 64; ++i) all[static_cast<std::size_t>(i)] = i;
  EXPECT_NEAR((frequency_response(p, grid, all) - full).norm(), 0.0, 1e-12);
  const std::vector<int> pilots{0, 8, 16, 40};
  const CMatrix kp = frequency_response(p, grid, pilots);
  for (std::size_t r = 0; r < pilots.size(); ++r) {
    EXPECT_NEAR((kp.row(static_cast<Eigen::Index>(r)) - full.row(pilots[r])).norm(), 0.0, 1e-12);
  }
}

TEST(FrequencyResponse, RankBoundedByPathsAndPilots) {
  const SamplingGrid grid{64, kTs, 0.25};
  PathSet p;
  for (int l = 0; l < 6; ++l) p.push_back(0, 0.1 * l, (0.7 * l + 0.1) * kTs, 1.0);
  const std::vector<int> four{0, 16, 32, 48};
  EXPECT_LE(linalg::numerical_rank(frequency_response(p, grid, four), 1e-8), 4);
  EXPECT_EQ(linalg::numerical_rank(frequency_response(p, grid), 1e-8), 6);
}

TEST(GeneratePaths, FlatProfileNormalizes) {
  ScenarioConfig scen;
  scen.n_paths = 4;
  scen.pdp_decay = 0.0;
  Rng rng = make_stream(3, 0, 0, StreamPurpose::environment);
  const PathSet p = generate_paths(scen, rng);
  for (double a : p.amplitude) EXPECT_NEAR(a * a, 0.25, 1e-15);
}

TEST(GeneratePaths, DeterministicNormalizedAndInRange) {
  ScenarioConfig scen;
  Rng r1 = make_stream(5, 0, 0, StreamPurpose::environment);
  Rng r2 = make_stream(5, 0, 0, StreamPurpose::environment);
  const PathSet a = generate_paths(scen, r1);
  const PathSet b = generate_paths(scen, r2);
  ASSERT_EQ(a.size(), 25u);
  EXPECT_EQ(a.delay, b.delay);
  EXPECT_EQ(a.azimuth, b.azimuth);
  double total = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    total += a.amplitude[l] * a.amplitude[l];
    EXPECT_GE(a.delay[l], 0.0);
    EXPECT_LE(a.delay[l], scen.delay_spread);
    EXPECT_GE(a.azimuth[l], scen.azimuth_range.lo);
    EXPECT_LE(a.azimuth[l], scen.azimuth_range.hi);
    EXPECT_GE(a.elevation[l], scen.elevation_range.lo);
    EXPECT_LE(a.elevation[l], scen.elevation_range.hi);
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(DtTruncate, TopAmplitudes) {
  PathSet p;
  p.push_back(0, 0, 1e-9, 0.8);
  p.push_back(0, 1, 2e-9, 0.5);
  p.push_back(0, 2, 3e-9, 0.33);
  const PathSet t = dt_truncate(p, 2);
  EXPECT_EQ(t.amplitude, (std::vector<double>{0.8, 0.5}));
  EXPECT_EQ(dt_truncate(p, 3).delay, p.delay);
  EXPECT_THROW(dt_truncate(p, 4), std::invalid_argument);
}

TEST(DtTruncate, TiesBreakBySmallerDelayThenIndex) {
  PathSet p;
  p.push_back(0, 0, 5e-9, 0.5);
  p.push_back(0, 1, 2e-9, 0.5);
  EXPECT_EQ(dt_truncate(p, 1).delay, (std::vector<double>{2e-9}));
  PathSet q;
  q.push_back(0, 0, 2e-9, 0.5);
  q.push_back(0, 1, 2e-9, 0.5);
  EXPECT_EQ(dt_truncate(q, 1).azimuth, (std::vector<double>{0.0}));
}

TEST(DtTruncate, KeepsASubMultisetWithoutRenormalizing) {
  ScenarioConfig scen;
  Rng rng = make_stream(11, 0, 0, StreamPurpose::environment);
  const PathSet p = generate_paths(scen, rng);
  const PathSet t = dt_truncate(p, 5);
  double kept = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < p.size(); ++j) {
      found = found || (p.delay[j] == t.delay[i] && p.amplitude[j] == t.amplitude[i] &&
                        p.azimuth[j] == t.azimuth[i]);
    }
    EXPECT_TRUE(found);
    kept += t.amplitude[i] * t.amplitude[i];
  }
  EXPECT_LT(kept, 1.0);
}

TEST(PathCsv, RoundTripIsExact) {
  ScenarioConfig scen;
  Rng rng = make_stream(2, 0, 0, StreamPurpose::environment);
  const PathSet p = generate_paths(scen, rng);
  const auto file = std::filesystem::temp_directory_path() / "chest_paths_roundtrip.csv";
  write_paths_csv(p, file.string());
  const PathSet q = read_paths_csv(file.string());
  EXPECT_EQ(p.delay, q.delay);
  EXPECT_EQ(p.amplitude, q.amplitude);
  EXPECT_EQ(p.elevation, q.elevation);
  EXPECT_EQ(p.azimuth, q.azimuth);
  std::filesystem::remove(file);
}

TEST(PathCsv, RejectsMalformedInput) {
  const auto file = std::filesystem::temp_directory_path() / "chest_paths_bad.csv";
  {
    std::FILE* f = std::fopen(file.string().c_str(), "w");
    std::fputs("theta_rad,phi_rad,tau_s,alpha\n0,0,1e-9,abc\n", f);
    std::fclose(f);
  }
  EXPECT_THROW(read_paths_csv(file.string()), std::runtime_error);
  {
    std::FILE* f = std::fopen(file.string().c_str(), "w");
    std::fputs("a,b,c,d\n", f);
    std::fclose(f);
  }
  EXPECT_THROW(read_paths_csv(file.string()), std::runtime_error);
  std::filesystem::remove(file);
  EXPECT_THROW(read_paths_csv(file.string()), std::runtime_error);
}
