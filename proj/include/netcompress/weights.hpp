#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace netcompress {

inline constexpr double kUnitNormTolerance = 1e-10;

/// A point on the unit sphere S^{d-1}.
class UnitVector {
 public:
  /// Throws InvariantError unless |norm(coords) - 1| <= kUnitNormTolerance.
  explicit UnitVector(Eigen::VectorXd coords);

  /// Normalizes `v`; throws DomainError if it is zero.
  static UnitVector normalized(const Eigen::VectorXd& v);

  const Eigen::VectorXd& coords() const noexcept { return coords_; }
  Eigen::Index dim() const noexcept { return coords_.size(); }
  double dot(const UnitVector& other) const;

 private:
  Eigen::VectorXd coords_;
};

/// An ordered list of unit vectors of a common dimension, stored as the rows
/// of a matrix. Used for both target (w_n) and compressed (v_m) weights.
class WeightSet {
 public:
  /// Every row must be unit norm within kUnitNormTolerance (InvariantError).
  /// Requires at least one row and one column (InvariantError).
  explicit WeightSet(Eigen::MatrixXd rows);
  explicit WeightSet(const std::vector<UnitVector>& vectors);

  /// Normalizes each row; throws DomainError on a zero row.
  static WeightSet normalized(Eigen::MatrixXd rows);

  Eigen::Index size() const noexcept { return rows_.rows(); }
  Eigen::Index dim() const noexcept { return rows_.cols(); }
  const Eigen::MatrixXd& matrix() const noexcept { return rows_; }
  UnitVector at(Eigen::Index i) const;
  std::vector<UnitVector> vectors() const;

 private:
  Eigen::MatrixXd rows_;
};

}  // namespace netcompress
