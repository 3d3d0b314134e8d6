#include "netcompress/linalg.hpp"

#include <algorithm>
#include <limits>

#include "netcompress/errors.hpp"

namespace netcompress {

SymmetricPseudoInverse::SymmetricPseudoInverse(const Eigen::MatrixXd& symmetric) {
  if (symmetric.rows() != symmetric.cols()) {
    throw DimensionError("pseudo-inverse of a non-square matrix");
  }
  if (!symmetric.allFinite()) throw NumericError("pseudo-inverse of a non-finite matrix");
  const Eigen::Index n = symmetric.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
  if (solver.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
  eigenvectors_ = solver.eigenvectors();
  eigenvalues_ = solver.eigenvalues();
  const double largest = n > 0 ? eigenvalues_.cwiseAbs().maxCoeff() : 0.0;
  cutoff_ = static_cast<double>(std::max<Eigen::Index>(n, 1)) *
            std::numeric_limits<double>::epsilon() * largest;
  inverse_eigenvalues_.resize(n);
  rank_ = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(eigenvalues_(i)) > cutoff_) {
      inverse_eigenvalues_(i) = 1.0 / eigenvalues_(i);
      ++rank_;
    } else {
      inverse_eigenvalues_(i) = 0.0;
    }
  }
}

Eigen::VectorXd SymmetricPseudoInverse::apply(const Eigen::VectorXd& x) const {
  if (x.size() != eigenvalues_.size()) throw DimensionError("pseudo-inverse apply: size mismatch");
  const Eigen::VectorXd coords = eigenvectors_.transpose() * x;
  return eigenvectors_ * inverse_eigenvalues_.cwiseProduct(coords);
}

double SymmetricPseudoInverse::quadratic_form(const Eigen::VectorXd& x) const {
  if (x.size() != eigenvalues_.size()) throw DimensionError("pseudo-inverse form: size mismatch");
  const Eigen::VectorXd coords = eigenvectors_.transpose() * x;
  return coords.cwiseProduct(coords).dot(inverse_eigenvalues_);
}

Eigen::VectorXd SymmetricPseudoInverse::project_to_image(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd coords = eigenvectors_.transpose() * x;
  Eigen::VectorXd kept = coords;
  for (Eigen::Index i = 0; i < kept.size(); ++i) {
    if (inverse_eigenvalues_(i) == 0.0) kept(i) = 0.0;
  }
  return eigenvectors_ * kept;
}

Eigen::MatrixXd SymmetricPseudoInverse::matrix() const {
  return eigenvectors_ * inverse_eigenvalues_.asDiagonal() * eigenvectors_.transpose();
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& symmetric) {
  return SymmetricPseudoInverse(symmetric).matrix();
}

}  // namespace netcompress
