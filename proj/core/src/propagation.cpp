#include "chest/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace chest {

void PathSet::push_back(double theta, double phi, double tau, double alpha) {
  elevation.push_back(theta);
  azimuth.push_back(phi);
  delay.push_back(tau);
  amplitude.push_back(alpha);
}

void PathSet::check() const {
  const auto n = delay.size();
  if (elevation.size() != n || azimuth.size() != n || amplitude.size() != n) {
    throw std::invalid_argument("PathSet: column lengths differ");
  }
  for (double a : amplitude) {
    if (!(a >= 0.0)) throw std::invalid_argument("PathSet: negative or NaN amplitude");
  }
}

ArrayGeometry make_ula(int n_rx, double spacing_fraction, double wavelength) {
  ArrayGeometry g;
  g.wavelength = wavelength;
  g.positions.reserve(static_cast<std::size_t>(n_rx));
  const double d = spacing_fraction * wavelength;
  for (int i = 0; i < n_rx; ++i) g.positions.emplace_back(i * d, 0.0, 0.0);
  return g;
}

PathSet generate_paths(const ScenarioConfig& scen, Rng& rng) {
  std::uniform_real_distribution<double> theta(scen.elevation_range.lo,
                                               scen.elevation_range.hi);
  std::uniform_real_distribution<double> phi(scen.azimuth_range.lo, scen.azimuth_range.hi);
  std::uniform_real_distribution<double> tau(0.0, scen.delay_spread);

  PathSet p;
  std::vector<double> power;
  for (int l = 0; l < scen.n_paths; ++l) {
    const double th = theta(rng);
    const double ph = phi(rng);
    const double t = scen.delay_spread > 0.0 ? tau(rng) : 0.0;
    const double rel = scen.delay_spread > 0.0 ? t / scen.delay_spread : 0.0;
    power.push_back(std::exp(-scen.pdp_decay * rel));
    p.push_back(th, ph, t, 0.0);
  }
  const double total = std::accumulate(power.begin(), power.end(), 0.0);
  for (std::size_t l = 0; l < power.size(); ++l) p.amplitude[l] = std::sqrt(power[l] / total);
  return p;
}

PathSet dt_truncate(const PathSet& paths, int n) {
  paths.check();
  if (n < 0 || static_cast<std::size_t>(n) > paths.size()) {
    throw std::invalid_argument("dt_truncate: requested " + std::to_string(n) +
                                " paths out of " + std::to_string(paths.size()));
  }
  std::vector<std::size_t> order(paths.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (paths.amplitude[a] != paths.amplitude[b]) return paths.amplitude[a] > paths.amplitude[b];
    if (paths.delay[a] != paths.delay[b]) return paths.delay[a] < paths.delay[b];
    return a < b;
  });
  order.resize(static_cast<std::size_t>(n));
  std::sort(order.begin(), order.end());

  PathSet out;
  for (std::size_t i : order) {
    out.push_back(paths.elevation[i], paths.azimuth[i], paths.delay[i], paths.amplitude[i]);
  }
  return out;
}

Vec3 direction_vector(double theta, double phi) {
  return {std::cos(phi) * std::cos(theta), std::sin(phi) * std::cos(theta), std::sin(theta)};
}

CVector steering_vector(const Vec3& v, const ArrayGeometry& geom) {
  const double k = 2.0 * kPi / geom.wavelength;
  CVector a(geom.size());
  for (int i = 0; i < geom.size(); ++i) {
    a(i) = std::polar(1.0, k * geom.positions[static_cast<std::size_t>(i)].dot(v));
  }
  return a;
}

CMatrix steering_matrix(const PathSet& paths, const ArrayGeometry& geom) {
  paths.check();
  CMatrix a(geom.size(), static_cast<Eigen::Index>(paths.size()));
  for (std::size_t l = 0; l < paths.size(); ++l) {
    a.col(static_cast<Eigen::Index>(l)) =
        steering_vector(direction_vector(paths.elevation[l], paths.azimuth[l]), geom);
  }
  return a;
}

double pulse_response(double nu, double delay_norm, double rolloff) {
  const double t = nu - delay_norm;
  if (std::abs(t) < 1e-12) return 1.0;
  auto sinc = [](double x) { return std::sin(kPi * x) / (kPi * x); };
  const double s = sinc(t);
  if (rolloff == 0.0) return s;
  const double x = 2.0 * rolloff * t;
  const double denom = 1.0 - x * x;
  if (std::abs(denom) < 1e-10) {
    // t = +-1/(2 rolloff)
    return kPi / 4.0 * sinc(1.0 / (2.0 * rolloff));
  }
  return s * std::cos(kPi * rolloff * t) / denom;
}

CMatrix delay_response(const PathSet& paths, const SamplingGrid& grid) {
  paths.check();
  const int n = grid.n_subcarriers;
  CMatrix g = CMatrix::Zero(n, static_cast<Eigen::Index>(paths.size()));
  for (std::size_t l = 0; l < paths.size(); ++l) {
    const double d = paths.delay[l] / grid.sample_interval;
    for (int nu = -kPulseGuard; nu < n + kPulseGuard; ++nu) {
      const int row = ((nu % n) + n) % n;
      g(row, static_cast<Eigen::Index>(l)) += pulse_response(nu, d, grid.rolloff);
    }
  }
  return g;
}

CMatrix dft_matrix(int n) {
  CMatrix f(n, n);
  for (int k = 0; k < n; ++k) {
    for (int m = 0; m < n; ++m) {
      const long long km = (static_cast<long long>(k) * m) % n;
      f(k, m) = std::polar(1.0, -2.0 * kPi * static_cast<double>(km) / n);
    }
  }
  return f;
}

CMatrix frequency_response(const PathSet& paths, const SamplingGrid& grid,
                           std::optional<std::span<const int>> pilot_indices) {
  const int n = grid.n_subcarriers;
  const CMatrix g = delay_response(paths, grid);
  std::vector<int> rows;
  if (pilot_indices) {
    rows.assign(pilot_indices->begin(), pilot_indices->end());
  } else {
    rows.resize(static_cast<std::size_t>(n));
    std::iota(rows.begin(), rows.end(), 0);
  }
  CMatrix f(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int k = rows[r];
    if (k < 0 || k >= n) throw std::invalid_argument("frequency_response: index out of range");
    for (int m = 0; m < n; ++m) {
      const long long km = (static_cast<long long>(k) * m) % n;
      f(static_cast<Eigen::Index>(r), m) =
          std::polar(1.0, -2.0 * kPi * static_cast<double>(km) / n);
    }
  }
  return f * g;
}

}  // namespace chest
