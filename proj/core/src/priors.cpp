#include "chest/priors.hpp"

#include <stdexcept>

#include "chest/linalg.hpp"

namespace chest {
namespace {
constexpr double kOrthonormalTol = 1e-10;
}

SubspacePrior dt_subspace(const PathSet& dt_paths, const ArrayGeometry& geom,
                          const SamplingGrid& grid, std::span<const int> pilot_indices,
                          double tol) {
  if (dt_paths.empty()) throw std::invalid_argument("dt_subspace: empty path set");
  SubspacePrior prior;
  prior.basis_spatial = linalg::column_space_basis(steering_matrix(dt_paths, geom), tol);
  prior.basis_temporal =
      linalg::column_space_basis(frequency_response(dt_paths, grid, pilot_indices), tol);
  return prior;
}

ProjectorPair make_projectors(const SubspacePrior& prior) {
  if (linalg::orthonormality_defect(prior.basis_spatial) > kOrthonormalTol) {
    throw std::invalid_argument("make_projectors: spatial basis is not orthonormal");
  }
  if (linalg::orthonormality_defect(prior.basis_temporal) > kOrthonormalTol) {
    throw std::invalid_argument("make_projectors: temporal basis is not orthonormal");
  }
  ProjectorPair p;
  p.spatial = prior.basis_spatial * prior.basis_spatial.adjoint();
  p.temporal = prior.basis_temporal.conjugate() * prior.basis_temporal.transpose();
  p.rank_spatial = prior.rank_spatial();
  p.rank_temporal = prior.rank_temporal();
  return p;
}

ProjectorPair bml_subspace_stacked(const CMatrix& stacked, int n_batch, int rank_spatial,
                                   int rank_temporal) {
  if (n_batch < 1 || stacked.cols() % n_batch != 0) {
    throw std::invalid_argument("bml_subspace: batch size does not divide the snapshot stack");
  }
  const auto n_rx = stacked.rows();
  const auto n_p = stacked.cols() / n_batch;
  if (rank_spatial < 1 || rank_spatial > n_rx) {
    throw std::invalid_argument("bml_subspace: spatial rank " + std::to_string(rank_spatial) +
                                " exceeds N_rx = " + std::to_string(n_rx));
  }
  if (rank_temporal < 1 || rank_temporal > n_p) {
    throw std::invalid_argument("bml_subspace: temporal rank " + std::to_string(rank_temporal) +
                                " exceeds N_p = " + std::to_string(n_p));
  }
  const double scale = 1.0 / n_batch;
  CMatrix r_s = CMatrix::Zero(n_rx, n_rx);
  r_s.selfadjointView<Eigen::Lower>().rankUpdate(stacked, scale);
  r_s = r_s.selfadjointView<Eigen::Lower>();

  // R_T = (1/N_TB) sum H^T H^* = conj((1/N_TB) sum H^H H)
  CMatrix gram = CMatrix::Zero(n_p, n_p);
  for (int m = 0; m < n_batch; ++m) {
    gram.selfadjointView<Eigen::Lower>().rankUpdate(stacked.middleCols(m * n_p, n_p).adjoint(),
                                                    scale);
  }
  const CMatrix r_t = CMatrix(gram.selfadjointView<Eigen::Lower>()).conjugate();

  SubspacePrior prior;
  prior.basis_spatial = linalg::leading_eigenvectors(r_s, rank_spatial);
  prior.basis_temporal = linalg::leading_eigenvectors(r_t, rank_temporal);
  return make_projectors(prior);
}

ProjectorPair bml_subspace(std::span<const CMatrix> ls_batch, int rank_spatial,
                           int rank_temporal) {
  if (ls_batch.empty()) throw std::invalid_argument("bml_subspace: empty batch");
  const auto rows = ls_batch.front().rows();
  const auto cols = ls_batch.front().cols();
  CMatrix stacked(rows, cols * static_cast<Eigen::Index>(ls_batch.size()));
  for (std::size_t m = 0; m < ls_batch.size(); ++m) {
    if (ls_batch[m].rows() != rows || ls_batch[m].cols() != cols) {
      throw std::invalid_argument("bml_subspace: snapshots differ in shape");
    }
    stacked.middleCols(static_cast<Eigen::Index>(m) * cols, cols) = ls_batch[m];
  }
  return bml_subspace_stacked(stacked, static_cast<int>(ls_batch.size()), rank_spatial,
                              rank_temporal);
}

CMatrix projection_matrix(const ProjectorPair& proj) {
  return linalg::kron(proj.temporal.transpose(), proj.spatial);
}

CMatrix apply_projectors(const ProjectorPair& proj, const CMatrix& x) {
  if (proj.spatial.cols() != x.rows() || proj.temporal.rows() != x.cols()) {
    throw std::invalid_argument("apply_projectors: dimension mismatch");
  }
  return proj.spatial * x * proj.temporal;
}

}  // namespace chest
