#pragma once

#include <span>

#include "chest/propagation.hpp"
#include "chest/types.hpp"

namespace chest {

/// Orthonormal bases of the spatial (N_rx x r_S) and pilot-grid temporal
/// (N_p x r_T) propagation modes.
struct SubspacePrior {
  CMatrix basis_spatial;
  CMatrix basis_temporal;

  int rank_spatial() const { return static_cast<int>(basis_spatial.cols()); }
  int rank_temporal() const { return static_cast<int>(basis_temporal.cols()); }
};

/// Spatial projector U_S U_S^H (left-multiplies H^p) and temporal projector
/// conj(U_T) U_T^T (right-multiplies H^p).
struct ProjectorPair {
  CMatrix spatial;
  CMatrix temporal;
  int rank_spatial = 0;
  int rank_temporal = 0;
};

/// Prior from the twin's truncated path set: column spans of the steering
/// matrix and of the pilot-grid frequency response.
SubspacePrior dt_subspace(const PathSet& dt_paths, const ArrayGeometry& geom,
                          const SamplingGrid& grid, std::span<const int> pilot_indices,
                          double tol);

/// Throws std::invalid_argument when a basis is not orthonormal to 1e-10.
ProjectorPair make_projectors(const SubspacePrior& prior);

/// Batch-ML subspaces from the sample covariances of N_TB pilot-grid LS
/// snapshots. Throws when a rank exceeds its matrix dimension.
ProjectorPair bml_subspace(std::span<const CMatrix> ls_batch, int rank_spatial,
                           int rank_temporal);

/// Same estimate from the snapshots stacked side by side (N_rx x N_TB*N_p).
ProjectorPair bml_subspace_stacked(const CMatrix& stacked, int n_batch, int rank_spatial,
                                   int rank_temporal);

/// Q = Pi_T^T kron Pi_S, the projector acting on vec{H^p}.
CMatrix projection_matrix(const ProjectorPair& proj);

/// Pi_S X Pi_T, i.e. unvec(Q vec{X}) without forming Q.
CMatrix apply_projectors(const ProjectorPair& proj, const CMatrix& x);

}  // namespace chest
