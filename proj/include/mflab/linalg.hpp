#pragma once
#include <Eigen/Dense>
#include <complex>

namespace mflab {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;

inline double hermitian_op_norm(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

// largest singular value; works for non-Hermitian defect matrices
inline double general_op_norm(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

inline double hermiticity_defect(const Matrix& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

inline Matrix hermitian_exp(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  return es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() *
         es.eigenvectors().adjoint();
}

}  // namespace mflab
