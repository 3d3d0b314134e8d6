#pragma once

#include <Eigen/Dense>

namespace netcompress {

/// Moore-Penrose pseudo-inverse of a symmetric matrix via eigendecomposition.
/// Eigenvalues with |lambda| <= max(n, 1) * eps * max|lambda| are treated as zero.
class SymmetricPseudoInverse {
 public:
  explicit SymmetricPseudoInverse(const Eigen::MatrixXd& symmetric);

  /// G^+ x
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// x' G^+ x
  double quadratic_form(const Eigen::VectorXd& x) const;
  /// G G^+ x, the orthogonal projection of x onto image(G).
  Eigen::VectorXd project_to_image(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd matrix() const;

  Eigen::Index rank() const noexcept { return rank_; }
  double cutoff() const noexcept { return cutoff_; }
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }

 private:
  Eigen::MatrixXd eigenvectors_;
  Eigen::VectorXd eigenvalues_;
  Eigen::VectorXd inverse_eigenvalues_;  // zero below the cutoff
  Eigen::Index rank_ = 0;
  double cutoff_ = 0.0;
};

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& symmetric);

}  // namespace netcompress
