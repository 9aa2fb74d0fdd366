#pragma once

#include "chest/types.hpp"

// Small dense helpers shared by the channel, prior and metric modules.
// vec{} is column stacking throughout, so vec{A B C} = (C^T kron A) vec{B}.
namespace chest::linalg {

CMatrix kron(const CMatrix& a, const CMatrix& b);

CVector vec(const CMatrix& m);

CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols);

/// Number of singular values strictly above tol * sigma_max.
int numerical_rank(const CMatrix& m, double tol);

/// Orthonormal basis of the column span, keeping the left singular vectors
/// whose singular value exceeds tol * sigma_max.
CMatrix column_space_basis(const CMatrix& m, double tol);

/// Eigenvectors of a Hermitian matrix for its `rank` largest eigenvalues.
CMatrix leading_eigenvectors(const CMatrix& hermitian, int rank);

/// max |m^H m - I|.
double orthonormality_defect(const CMatrix& m);

}  // namespace chest::linalg
