#include "netcompress/linalg.hpp"

#include <random>

#include <gtest/gtest.h>

#include "netcompress/errors.hpp"

namespace nc = netcompress;

namespace {

Eigen::MatrixXd random_psd(Eigen::Index n, Eigen::Index rank, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd f(n, rank);
  for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = normal(rng);
  return f * f.transpose();
}

}  // namespace

// The four Moore-Penrose conditions hold for full-rank and rank-deficient inputs.
TEST(SymmetricPseudoInverse, PenroseConditions) {
  for (Eigen::Index rank : {1, 3, 6}) {
    const Eigen::MatrixXd a = random_psd(6, rank, 10 + rank);
    const nc::SymmetricPseudoInverse pinv(a);
    const Eigen::MatrixXd p = pinv.matrix();
    EXPECT_EQ(pinv.rank(), rank);
    const double scale = a.norm();
    EXPECT_LT((a * p * a - a).norm(), 1e-10 * scale);
    EXPECT_LT((p * a * p - p).norm(), 1e-10 * p.norm());
    EXPECT_LT((a * p - (a * p).transpose()).norm(), 1e-10);
    EXPECT_LT((p * a - (p * a).transpose()).norm(), 1e-10);
  }
}

TEST(SymmetricPseudoInverse, RankOneOnes) {
  const Eigen::MatrixXd a = 0.5 * Eigen::MatrixXd::Ones(2, 2);
  const nc::SymmetricPseudoInverse pinv(a);
  EXPECT_EQ(pinv.rank(), 1);
  EXPECT_NEAR(pinv.quadratic_form(Eigen::Vector2d::Ones()), 2.0, 1e-14);
  EXPECT_LT((pinv.matrix() - 0.5 * Eigen::MatrixXd::Ones(2, 2)).norm(), 1e-14);
}

TEST(SymmetricPseudoInverse, ProjectionOntoImage) {
  const Eigen::MatrixXd a = random_psd(5, 2, 3);
  const nc::SymmetricPseudoInverse pinv(a);
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(5, -1.0, 2.0);
  const Eigen::VectorXd px = pinv.project_to_image(x);
  EXPECT_LT((px - a * pinv.apply(x)).norm(), 1e-10);
  EXPECT_LT((pinv.project_to_image(px) - px).norm(), 1e-12);
  EXPECT_NEAR(pinv.quadratic_form(x), x.dot(pinv.apply(x)), 1e-10);
}

TEST(SymmetricPseudoInverse, Errors) {
  EXPECT_THROW(nc::SymmetricPseudoInverse(Eigen::MatrixXd::Ones(2, 3)), nc::DimensionError);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
  bad(0, 0) = std::nan("");
  EXPECT_THROW(nc::SymmetricPseudoInverse{bad}, nc::NumericError);
  const nc::SymmetricPseudoInverse ok(Eigen::MatrixXd::Identity(2, 2));
  EXPECT_THROW(ok.apply(Eigen::VectorXd::Ones(3)), nc::DimensionError);
}
