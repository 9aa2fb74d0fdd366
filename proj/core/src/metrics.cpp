#include "chest/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chest/linalg.hpp"
#include "chest/scenario.hpp"

namespace chest {

void NmseAccumulator::add(const CMatrix& estimate, const CMatrix& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols()) {
    throw std::invalid_argument("empirical_nmse: estimate and truth differ in shape");
  }
  add_energies((estimate - truth).squaredNorm(), truth.squaredNorm());
}

void NmseAccumulator::add_energies(double error_energy, double truth_energy) {
  error_energy_ += error_energy;
  truth_energy_ += truth_energy;
  ++count_;
}

void NmseAccumulator::merge(const NmseAccumulator& other) {
  error_energy_ += other.error_energy_;
  truth_energy_ += other.truth_energy_;
  count_ += other.count_;
}

double NmseAccumulator::value() const {
  if (count_ == 0) throw std::invalid_argument("empirical_nmse: empty ensemble");
  if (!(truth_energy_ > 0.0)) throw std::invalid_argument("empirical_nmse: zero channel energy");
  return error_energy_ / truth_energy_;
}

double empirical_nmse(std::span<const std::pair<CMatrix, CMatrix>> pairs) {
  NmseAccumulator acc;
  for (const auto& [estimate, truth] : pairs) acc.add(estimate, truth);
  return acc.value();
}

namespace {

void check_dims(const ProjectorPair& proj, Eigen::Index n_rx, Eigen::Index n_p) {
  if (proj.spatial.rows() != n_rx || proj.spatial.cols() != n_rx ||
      proj.temporal.rows() != n_p || proj.temporal.cols() != n_p) {
    throw std::invalid_argument("analytic_nmse: projectors do not match the covariance");
  }
}

// Q^perp x for x = vec{X}, via X - Pi_S X Pi_T.
CVector apply_complement(const ProjectorPair& proj, const CVector& x, Eigen::Index n_rx,
                         Eigen::Index n_p) {
  const Eigen::Map<const CMatrix> m(x.data(), n_rx, n_p);
  const CMatrix kept = proj.spatial * m * proj.temporal;
  return x - linalg::vec(kept);
}

NmseBreakdown finish(const ProjectorPair& proj, double floor_trace, double trace_r,
                     Eigen::Index n_rx, Eigen::Index n_p, double snr_db, double symbol_power,
                     double noise_variance) {
  if (!(trace_r > 0.0)) throw std::invalid_argument("analytic_nmse: Tr{R} must be > 0");
  const double trace_qq = proj.spatial.squaredNorm() * proj.temporal.squaredNorm();
  const double noise_trace_form = noise_variance * trace_qq / (symbol_power * trace_r);
  const double noise_rank_form = static_cast<double>(proj.rank_spatial) * proj.rank_temporal /
                                 (static_cast<double>(n_rx) * n_p * db_to_linear(snr_db));
  const double scale = std::max({std::abs(noise_trace_form), std::abs(noise_rank_form), 1e-300});
  if (std::abs(noise_trace_form - noise_rank_form) > 1e-9 * scale) {
    throw std::logic_error("analytic_nmse: trace form " + std::to_string(noise_trace_form) +
                           " and rank form " + std::to_string(noise_rank_form) +
                           " of the noise term disagree");
  }
  NmseBreakdown out;
  out.subspace_floor = std::max(0.0, floor_trace / trace_r);
  out.noise_term = noise_trace_form;
  out.total = out.subspace_floor + out.noise_term;
  return out;
}

}  // namespace

NmseBreakdown analytic_nmse(const ProjectorPair& proj, const ChannelCovariance& cov,
                            double snr_db, double symbol_power, double noise_variance) {
  check_dims(proj, cov.n_rx(), cov.n_pilots());
  // Tr{Q^perp R Q^perp^H} = sum_l p_l ||Q^perp phi_l||^2
  double floor_trace = 0.0;
  for (Eigen::Index l = 0; l < cov.factor().cols(); ++l) {
    floor_trace += cov.powers()(l) *
                   apply_complement(proj, cov.factor().col(l), cov.n_rx(), cov.n_pilots())
                       .squaredNorm();
  }
  return finish(proj, floor_trace, cov.trace(), cov.n_rx(), cov.n_pilots(), snr_db,
                symbol_power, noise_variance);
}

NmseBreakdown analytic_nmse(const ProjectorPair& proj, const CMatrix& dense_cov, double snr_db,
                            double symbol_power, double noise_variance) {
  const Eigen::Index n_rx = proj.spatial.rows();
  const Eigen::Index n_p = proj.temporal.rows();
  if (dense_cov.rows() != n_rx * n_p || dense_cov.cols() != dense_cov.rows()) {
    throw std::invalid_argument("analytic_nmse: covariance is not (N_rx N_p) square");
  }
  check_dims(proj, n_rx, n_p);
  const Eigen::Index n = dense_cov.rows();
  // B = Q^perp R, then Tr{B Q^perp^H} = conj(Tr{Q^perp B^H}).
  CMatrix b(n, n);
  for (Eigen::Index j = 0; j < n; ++j) b.col(j) = apply_complement(proj, dense_cov.col(j), n_rx, n_p);
  const CMatrix bh = b.adjoint();
  Complex tr{0.0, 0.0};
  for (Eigen::Index j = 0; j < n; ++j) tr += apply_complement(proj, bh.col(j), n_rx, n_p)(j);
  return finish(proj, std::conj(tr).real(), dense_cov.trace().real(), n_rx, n_p, snr_db,
                symbol_power, noise_variance);
}

std::vector<double> post_combining_snr(const CMatrix& estimate, const CMatrix& truth,
                                       double symbol_power, double noise_variance) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols()) {
    throw std::invalid_argument("post_combining_snr: estimate and truth differ in shape");
  }
  if (!(noise_variance > 0.0)) {
    throw std::invalid_argument("post_combining_snr: noise variance must be > 0");
  }
  std::vector<double> snr(static_cast<std::size_t>(truth.cols()));
  for (Eigen::Index k = 0; k < truth.cols(); ++k) {
    const double norm2 = estimate.col(k).squaredNorm();
    if (norm2 == 0.0) {
      snr[static_cast<std::size_t>(k)] = 0.0;
      continue;
    }
    const double gain = std::norm(estimate.col(k).dot(truth.col(k))) / norm2;
    snr[static_cast<std::size_t>(k)] = symbol_power * gain / noise_variance;
  }
  return snr;
}

double genie_spectral_efficiency(const CMatrix& estimate, const CMatrix& truth,
                                 double symbol_power, double noise_variance) {
  const auto snr = post_combining_snr(estimate, truth, symbol_power, noise_variance);
  if (snr.empty()) throw std::invalid_argument("genie_spectral_efficiency: no subcarriers");
  double se = 0.0;
  for (double s : snr) se += std::log2(1.0 + s);
  return se / static_cast<double>(snr.size());
}

Ecdf::Ecdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw std::invalid_argument("ecdf: empty sample set");
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double Ecdf::quantile(double p) const {
  const auto n = static_cast<double>(sorted_.size());
  auto idx = static_cast<long long>(std::ceil(p * n)) - 1;
  idx = std::clamp<long long>(idx, 0, static_cast<long long>(sorted_.size()) - 1);
  return sorted_[static_cast<std::size_t>(idx)];
}

}  // namespace chest
