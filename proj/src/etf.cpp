#include "netcompress/etf.hpp"

#include <cmath>
#include <string>

#include "netcompress/errors.hpp"
#include "netcompress/kernel.hpp"
#include "netcompress/rng.hpp"

namespace netcompress {

EtfFrame make_etf(Eigen::Index m, Eigen::Index dim, const std::optional<Eigen::MatrixXd>& rotation) {
  if (m < 1 || dim < 1) throw DomainError("make_etf needs M >= 1 and d >= 1");
  if (m > dim + 1) {
    throw DomainError("no simplex frame of " + std::to_string(m) + " vectors in dimension " +
                      std::to_string(dim));
  }
  if (rotation) {
    if (rotation->rows() != dim || rotation->cols() != dim) {
      throw DimensionError("rotation must be " + std::to_string(dim) + " x " + std::to_string(dim));
    }
    const double defect =
        (rotation->transpose() * *rotation - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff();
    if (!(defect <= 1e-10)) throw InvariantError("rotation is not orthogonal");
  }

  // Row i holds e_i - (1/M) 1 expressed in the Helmert basis of the
  // complement of 1, scaled to unit norm. Column k-1 is the basis vector
  // (1, ..., 1, -k, 0, ..., 0) / sqrt(k (k + 1)) with k leading ones.
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(m, dim);
  if (m == 1) {
    rows(0, 0) = 1.0;
  } else {
    const double scale = std::sqrt(static_cast<double>(m) / static_cast<double>(m - 1));
    for (Eigen::Index k = 1; k < m; ++k) {
      const double norm = std::sqrt(static_cast<double>(k) * static_cast<double>(k + 1));
      for (Eigen::Index i = 0; i < k; ++i) rows(i, k - 1) = scale / norm;
      rows(k, k - 1) = -scale * static_cast<double>(k) / norm;
    }
  }
  if (rotation) rows = rows * rotation->transpose();

  EtfFrame frame{WeightSet::normalized(std::move(rows)), std::nullopt};
  if (m >= 2) frame.coherence = -1.0 / static_cast<double>(m - 1);
  return frame;
}

double etf_objective(Eigen::Index m) {
  if (m < 1) throw DomainError("etf_objective needs M >= 1");
  if (m == 1) return 1.0 / relu_kernel(1.0);
  const double mm = static_cast<double>(m);
  return mm / (relu_kernel(1.0) + (mm - 1.0) * relu_kernel(-1.0 / (mm - 1.0)));
}

bool is_etf(const WeightSet& vectors, double tol) {
  const Eigen::Index m = vectors.size();
  if (m < 2) throw DomainError("is_etf needs at least two vectors");
  const double target = -1.0 / static_cast<double>(m - 1);
  const Eigen::MatrixXd inner = vectors.matrix() * vectors.matrix().transpose();
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = j + 1; i < m; ++i) {
      if (!(std::abs(inner(i, j) - target) <= tol)) return false;
    }
  }
  return true;
}

double gram_distance(const Eigen::MatrixXd& gram_lhs, const Eigen::MatrixXd& gram_rhs) {
  if (gram_lhs.rows() != gram_rhs.rows() || gram_lhs.cols() != gram_rhs.cols()) {
    throw DimensionError("gram_distance: Gram matrices differ in size");
  }
  return (gram_lhs - gram_rhs).norm();
}

double gram_distance(const WeightSet& lhs, const WeightSet& rhs) {
  if (lhs.size() != rhs.size()) throw DimensionError("gram_distance: different numbers of vectors");
  return gram_distance(gram(lhs), gram(rhs));
}

Eigen::MatrixXd etf_gram(Eigen::Index m) {
  if (m < 1) throw DomainError("etf_gram needs M >= 1");
  const double off = m == 1 ? 0.0 : relu_kernel(-1.0 / static_cast<double>(m - 1));
  Eigen::MatrixXd g = Eigen::MatrixXd::Constant(m, m, off);
  g.diagonal().setConstant(relu_kernel(1.0));
  return g;
}

Eigen::MatrixXd random_orthogonal(Eigen::Index dim, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) a(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

}  // namespace netcompress
