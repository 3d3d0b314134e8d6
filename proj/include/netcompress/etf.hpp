#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "netcompress/weights.hpp"

namespace netcompress {

/// M unit vectors with all pairwise inner products equal to -1/(M-1): the
/// vertices of a regular simplex centred at the origin.
struct EtfFrame {
  WeightSet vectors;
  std::optional<double> coherence;  // -1/(M-1); empty for M = 1
};

/// Centered-simplex frame of M vectors in dimension d, optionally rotated by
/// an orthogonal d x d matrix. Requires 1 <= M <= d + 1 (DomainError) and an
/// orthogonal rotation within 1e-10 (InvariantError).
EtfFrame make_etf(Eigen::Index m, Eigen::Index dim,
                  const std::optional<Eigen::MatrixXd>& rotation = std::nullopt);

/// Limit objective at any ETF: M / (g(1) + (M - 1) g(-1/(M-1))); 1/g(1) = 2 at M = 1.
double etf_objective(Eigen::Index m);

/// True iff every off-diagonal inner product is within tol of -1/(M-1).
/// Requires M >= 2 (DomainError).
bool is_etf(const WeightSet& vectors, double tol);

/// Frobenius distance between the Gram matrices of two equal-size weight sets.
/// Order sensitive; dimensions may differ.
double gram_distance(const WeightSet& lhs, const WeightSet& rhs);
double gram_distance(const Eigen::MatrixXd& gram_lhs, const Eigen::MatrixXd& gram_rhs);

/// Gram matrix shared by every M-vector ETF.
Eigen::MatrixXd etf_gram(Eigen::Index m);

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with sign fix).
Eigen::MatrixXd random_orthogonal(Eigen::Index dim, std::uint64_t seed);

}  // namespace netcompress
