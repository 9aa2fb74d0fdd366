#include "chest/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chest/propagation.hpp"

namespace chest {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::ls: return "ls";
    case Method::denoise: return "denoise";
    case Method::bml: return "bml";
    case Method::emdt: return "emdt";
    case Method::ideal: return "ideal";
  }
  return "?";
}

Method method_from_string(std::string_view name) {
  for (Method m : {Method::ls, Method::denoise, Method::bml, Method::emdt, Method::ideal}) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

ChannelEstimate ls_estimate(const RxBlock& rx) {
  if (rx.y.cols() != rx.pilots.symbols.size()) {
    throw std::invalid_argument("ls_estimate: pilot count does not match observations");
  }
  for (Eigen::Index k = 0; k < rx.pilots.symbols.size(); ++k) {
    if (rx.pilots.symbols(k) == Complex{0.0, 0.0}) {
      throw std::invalid_argument("ls_estimate: zero pilot symbol at position " +
                                  std::to_string(k));
    }
  }
  ChannelEstimate e;
  e.h_hat = rx.y * rx.pilots.symbols.cwiseInverse().asDiagonal();
  e.grid = Grid::pilot;
  e.method = Method::ls;
  return e;
}

ChannelEstimate project_estimate(const ChannelEstimate& ls, const ProjectorPair& proj,
                                 Method tag) {
  if (ls.grid != Grid::pilot) {
    throw std::invalid_argument("project_estimate: expects a pilot-grid estimate");
  }
  return {apply_projectors(proj, ls.h_hat), Grid::pilot, tag};
}

int retained_taps(double tau_max, double sample_interval, int n_pilots) {
  if (!(tau_max > 0.0)) throw std::invalid_argument("denoise: tau_max must be > 0");
  const double ratio = tau_max / sample_interval;
  // Absorb rounding noise when tau_max is an exact multiple of Ts.
  const auto taps = static_cast<long long>(std::ceil(ratio * (1.0 - 1e-12)));
  return static_cast<int>(std::clamp<long long>(taps, 1, n_pilots));
}

CMatrix delay_pruning_operator(int n_pilots, int retained) {
  const CMatrix f = dft_matrix(n_pilots);
  Eigen::VectorXcd mask = Eigen::VectorXcd::Zero(n_pilots);
  mask.head(std::clamp(retained, 0, n_pilots)).setOnes();
  // Column form: h_den = F diag(mask) F^-1 h. Rows are right-multiplied, so transpose.
  const CMatrix column_form = f * mask.asDiagonal() * f.adjoint() / static_cast<double>(n_pilots);
  return column_form.transpose();
}

ChannelEstimate denoise_estimate(const ChannelEstimate& ls, double tau_max,
                                 double sample_interval) {
  if (ls.grid != Grid::pilot) {
    throw std::invalid_argument("denoise_estimate: expects a pilot-grid estimate");
  }
  const int n_p = static_cast<int>(ls.h_hat.cols());
  const int keep = retained_taps(tau_max, sample_interval, n_p);
  if (keep == n_p) return {ls.h_hat, Grid::pilot, Method::denoise};
  return {ls.h_hat * delay_pruning_operator(n_p, keep), Grid::pilot, Method::denoise};
}

ChannelEstimate interpolate_full(const ChannelEstimate& est, std::span<const int> indices,
                                 int n_subcarriers) {
  if (est.grid != Grid::pilot || static_cast<Eigen::Index>(indices.size()) != est.h_hat.cols()) {
    throw std::invalid_argument("interpolate_full: expects one pilot-grid column per pilot");
  }
  if (indices.empty()) throw std::invalid_argument("interpolate_full: no pilots");
  const auto& h = est.h_hat;
  CMatrix out(h.rows(), n_subcarriers);
  std::size_t seg = 0;
  for (int k = 0; k < n_subcarriers; ++k) {
    while (seg + 1 < indices.size() && indices[seg + 1] <= k) ++seg;
    if (k <= indices.front()) {
      out.col(k) = h.col(0);
    } else if (seg + 1 >= indices.size()) {
      out.col(k) = h.col(static_cast<Eigen::Index>(indices.size() - 1));
    } else {
      const double w = static_cast<double>(k - indices[seg]) / (indices[seg + 1] - indices[seg]);
      const auto i = static_cast<Eigen::Index>(seg);
      out.col(k) = (1.0 - w) * h.col(i) + w * h.col(i + 1);
    }
  }
  return {std::move(out), Grid::full, est.method};
}

ChannelEstimate interpolate_full(const ChannelEstimate& est, const PilotPattern& pilots,
                                 int n_subcarriers) {
  return interpolate_full(est, std::span<const int>(pilots.indices), n_subcarriers);
}

}  // namespace chest
