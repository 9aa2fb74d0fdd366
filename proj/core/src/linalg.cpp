#include "chest/linalg.hpp"

#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace chest::linalg {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CVector vec(const CMatrix& m) {
  return Eigen::Map<const CVector>(m.data(), m.size());
}

CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) {
    throw std::invalid_argument("unvec: size mismatch");
  }
  return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

int numerical_rank(const CMatrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol * s(0)) ++rank;
  }
  return rank;
}

CMatrix column_space_basis(const CMatrix& m, double tol) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int rank = 0;
  if (s.size() > 0 && s(0) > 0.0) {
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) > tol * s(0)) ++rank;
    }
  }
  return svd.matrixU().leftCols(rank);
}

CMatrix leading_eigenvectors(const CMatrix& hermitian, int rank) {
  if (rank < 0 || rank > hermitian.rows()) {
    throw std::invalid_argument("leading_eigenvectors: rank out of range");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("leading_eigenvectors: eigen-decomposition failed");
  }
  // Eigenvalues come out ascending.
  return eig.eigenvectors().rightCols(rank).rowwise().reverse();
}

double orthonormality_defect(const CMatrix& m) {
  if (m.cols() == 0) return 0.0;
  const CMatrix gram = m.adjoint() * m;
  return (gram - CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

}  // namespace chest::linalg
