#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chest/channel.hpp"
#include "chest/priors.hpp"
#include "chest/types.hpp"

namespace chest {

struct NmseBreakdown {
  double total = 0.0;
  double subspace_floor = 0.0;
  double noise_term = 0.0;
};

struct MetricsRecord {
  std::string method;
  double snr_db = 0.0;
  int n_pilots = 0;
  std::optional<double> nmse_empirical;
  std::optional<double> nmse_std_error;  // Monte Carlo standard error of nmse_empirical
  std::optional<NmseBreakdown> nmse_analytic;
  std::optional<double> spectral_efficiency;  // bit/s/Hz
  int trials = 0;
  // Same-trial error of projecting the noiseless channel (EM-DT only).
  std::optional<double> nmse_floor_measured;
};

/// Running sums for sum ||H_hat - H||_F^2 / sum ||H||_F^2.
class NmseAccumulator {
 public:
  void add(const CMatrix& estimate, const CMatrix& truth);
  void add_energies(double error_energy, double truth_energy);
  void merge(const NmseAccumulator& other);
  double value() const;
  double error_energy() const { return error_energy_; }
  double truth_energy() const { return truth_energy_; }
  long count() const { return count_; }

 private:
  double error_energy_ = 0.0;
  double truth_energy_ = 0.0;
  long count_ = 0;
};

/// Pairs are (estimate, truth). Throws on empty input or zero channel energy.
double empirical_nmse(std::span<const std::pair<CMatrix, CMatrix>> pairs);

/// Floor Tr{Q^perp R Q^perp^H}/Tr{R} plus noise term. The noise term is
/// evaluated both from Tr{Q Q^H} and as r_S r_T / (N_rx N_p SNR); the two
/// must agree to 1e-9 (std::logic_error otherwise).
NmseBreakdown analytic_nmse(const ProjectorPair& proj, const ChannelCovariance& cov,
                            double snr_db, double symbol_power, double noise_variance);

/// Same quantity from a dense covariance, applying Q through its Kronecker
/// structure.
NmseBreakdown analytic_nmse(const ProjectorPair& proj, const CMatrix& dense_cov,
                            double snr_db, double symbol_power, double noise_variance);

/// Per-subcarrier SNR after combining with s_k = h_hat_k^H / ||h_hat_k||,
/// decided with the true channel: sigma_x^2 |s_k h_k|^2 / sigma_w^2.
std::vector<double> post_combining_snr(const CMatrix& estimate, const CMatrix& truth,
                                       double symbol_power, double noise_variance);

/// Mean of log2(1 + SNR_k) over subcarriers.
double genie_spectral_efficiency(const CMatrix& estimate, const CMatrix& truth,
                                 double symbol_power, double noise_variance);

/// Right-continuous empirical CDF.
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> samples);

  double operator()(double x) const;
  /// Smallest sample s with F(s) >= p.
  double quantile(double p) const;
  const std::vector<double>& thresholds() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

}  // namespace chest
