#include "netcompress/weights.hpp"

#include <cmath>
#include <string>

#include "netcompress/errors.hpp"

namespace netcompress {

UnitVector::UnitVector(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  if (coords_.size() == 0) throw InvariantError("unit vector must have dimension >= 1");
  const double norm = coords_.norm();
  if (!(std::abs(norm - 1.0) <= kUnitNormTolerance)) {
    throw InvariantError("vector norm " + std::to_string(norm) + " is not 1");
  }
}

UnitVector UnitVector::normalized(const Eigen::VectorXd& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("cannot normalize a zero vector");
  return UnitVector(v / norm);
}

double UnitVector::dot(const UnitVector& other) const {
  if (other.dim() != dim()) throw DimensionError("dot: dimension mismatch");
  return coords_.dot(other.coords_);
}

WeightSet::WeightSet(Eigen::MatrixXd rows) : rows_(std::move(rows)) {
  if (rows_.rows() == 0 || rows_.cols() == 0) {
    throw InvariantError("weight set needs at least one vector of dimension >= 1");
  }
  for (Eigen::Index i = 0; i < rows_.rows(); ++i) {
    const double norm = rows_.row(i).norm();
    if (!(std::abs(norm - 1.0) <= kUnitNormTolerance)) {
      throw InvariantError("weight " + std::to_string(i) + " has norm " + std::to_string(norm));
    }
  }
}

namespace {
Eigen::MatrixXd stack(const std::vector<UnitVector>& vectors) {
  if (vectors.empty()) throw InvariantError("weight set needs at least one vector");
  const Eigen::Index d = vectors.front().dim();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(vectors.size()), d);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].dim() != d) throw DimensionError("weight set: mixed dimensions");
    out.row(static_cast<Eigen::Index>(i)) = vectors[i].coords().transpose();
  }
  return out;
}
}  // namespace

WeightSet::WeightSet(const std::vector<UnitVector>& vectors) : WeightSet(stack(vectors)) {}

WeightSet WeightSet::normalized(Eigen::MatrixXd rows) {
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const double norm = rows.row(i).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw DomainError("cannot normalize zero row " + std::to_string(i));
    }
    rows.row(i) /= norm;
  }
  return WeightSet(std::move(rows));
}

UnitVector WeightSet::at(Eigen::Index i) const { return UnitVector(rows_.row(i).transpose()); }

std::vector<UnitVector> WeightSet::vectors() const {
  std::vector<UnitVector> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (Eigen::Index i = 0; i < size(); ++i) out.push_back(at(i));
  return out;
}

}  // namespace netcompress
