#include "netcompress/network.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "netcompress/errors.hpp"

namespace nc = netcompress;

namespace {

nc::TargetNetwork single(const Eigen::VectorXd& w, double a) {
  return nc::TargetNetwork(nc::WeightSet(Eigen::MatrixXd(w.transpose())), Eigen::VectorXd::Constant(1, a));
}

Eigen::VectorXd e(int dim, int i, double sign = 1.0) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  v(i) = sign;
  return v;
}

}  // namespace

TEST(UnitVector, RejectsNonUnitNorm) {
  EXPECT_NO_THROW(nc::UnitVector(e(3, 1)));
  EXPECT_THROW(nc::UnitVector(0.9 * e(3, 1)), nc::InvariantError);
  EXPECT_THROW(nc::UnitVector::normalized(Eigen::VectorXd::Zero(2)), nc::DomainError);
  EXPECT_NEAR(nc::UnitVector::normalized(Eigen::Vector3d(3, 4, 0)).coords().norm(), 1.0, 1e-15);
}

TEST(Forward, Examples) {
  EXPECT_DOUBLE_EQ(single(e(2, 0), 1.0).forward(e(2, 0)), 1.0);
  EXPECT_DOUBLE_EQ(single(e(2, 0), 1.0).forward(e(2, 0, -1.0)), 0.0);

  Eigen::MatrixXd w(2, 2);
  w << 1, 0, -1, 0;
  const nc::TargetNetwork pair(nc::WeightSet(w), Eigen::Vector2d(1, 1));
  EXPECT_DOUBLE_EQ(pair.forward(e(2, 0)), 0.5);
  EXPECT_THROW(pair.forward(Eigen::VectorXd::Zero(3)), nc::DimensionError);
}

TEST(Forward, PositivelyHomogeneousAndBatchConsistent) {
  const auto net = nc::sample_target({20, 6, nc::WeightLaw::UniformSphere, nc::UniformCoeff{-1.0, 2.0}, 3});
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd inputs(50, 6);
  for (Eigen::Index i = 0; i < inputs.size(); ++i) inputs.data()[i] = normal(rng);
  const Eigen::VectorXd batch = net.forward_batch(inputs);
  for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
    const Eigen::VectorXd x = inputs.row(i).transpose();
    EXPECT_NEAR(batch(i), net.forward(x), 1e-14);
    for (double c : {0.1, 2.0, 37.5}) EXPECT_NEAR(net.forward(c * x), c * net.forward(x), 1e-12 * c);
  }
}

TEST(Network, CoefficientCountMustMatch) {
  EXPECT_THROW(nc::TargetNetwork(nc::WeightSet(Eigen::MatrixXd(e(2, 0).transpose())), Eigen::Vector2d(1, 1)),
               nc::DimensionError);
}

TEST(Sampler, SmallConstantExample) {
  const auto net = nc::sample_target({3, 2, nc::WeightLaw::UniformSphere, nc::ConstantCoeff{1.0}, 7});
  ASSERT_EQ(net.size(), 3);
  for (Eigen::Index i = 0; i < 3; ++i) {
    EXPECT_NEAR(net.weights().matrix().row(i).norm(), 1.0, 1e-15);
    EXPECT_EQ(net.coeffs()(i), 1.0);
  }
  ASSERT_TRUE(net.coeff_stats());
  EXPECT_EQ(net.coeff_stats()->mean, 1.0);
  EXPECT_EQ(net.coeff_stats()->bound, 1.0);
}

TEST(Sampler, MeanWeightVectorIsSmall) {
  const double n = 1e4;
  const auto net = nc::sample_target({10000, 50, nc::WeightLaw::UniformSphere, nc::ConstantCoeff{1.0}, 1});
  const double mean_norm = net.weights().matrix().colwise().mean().norm();
  EXPECT_LT(mean_norm, 5.0 / std::sqrt(n));
}

TEST(Sampler, UniformCoefficientMean) {
  for (auto law : {nc::WeightLaw::UniformSphere, nc::WeightLaw::ScaledRademacher}) {
    const auto net = nc::sample_target({10000, 7, law, nc::UniformCoeff{0.5, 1.5}, 1});
    EXPECT_NEAR(net.coeffs().mean(), 1.0, 0.03);
    EXPECT_LE(net.coeffs().cwiseAbs().maxCoeff(), 1.5);
    EXPECT_DOUBLE_EQ(net.coeff_stats()->mean, 1.0);
    EXPECT_DOUBLE_EQ(net.coeff_stats()->bound, 1.5);
  }
}

TEST(Sampler, TwoPointLaw) {
  const auto net = nc::sample_target({20000, 3, nc::WeightLaw::UniformSphere, nc::TwoPointCoeff{0.25, 2.0, -0.5}, 4});
  const double frac = (net.coeffs().array() == 2.0).cast<double>().mean();
  EXPECT_NEAR(frac, 0.25, 0.02);
  EXPECT_TRUE(((net.coeffs().array() == 2.0) || (net.coeffs().array() == -0.5)).all());
  EXPECT_DOUBLE_EQ(net.coeff_stats()->mean, 0.25 * 2.0 - 0.75 * 0.5);
  EXPECT_DOUBLE_EQ(net.coeff_stats()->bound, 2.0);
}

TEST(Sampler, AllWeightLawsGiveUnitVectors) {
  for (auto law : {nc::WeightLaw::UniformSphere, nc::WeightLaw::NormalizedGaussian,
                   nc::WeightLaw::ScaledRademacher}) {
    const auto set = nc::sample_weights(200, 9, law, 2);
    for (Eigen::Index i = 0; i < set.size(); ++i) {
      EXPECT_NEAR(set.matrix().row(i).norm(), 1.0, 1e-12);
    }
  }
  const auto rad = nc::sample_weights(50, 16, nc::WeightLaw::ScaledRademacher, 2);
  EXPECT_TRUE((rad.matrix().array().abs() == 0.25).all());
}

TEST(Sampler, SeedDeterminism) {
  const nc::SamplerConfig cfg{40, 5, nc::WeightLaw::UniformSphere, nc::UniformCoeff{0.0, 2.0}, 99};
  const auto a = nc::sample_target(cfg);
  const auto b = nc::sample_target(cfg);
  EXPECT_EQ(a.weights().matrix(), b.weights().matrix());
  EXPECT_EQ(a.coeffs(), b.coeffs());
  nc::SamplerConfig other = cfg;
  other.seed = 100;
  const auto c = nc::sample_target(other);
  EXPECT_NE(a.weights().matrix(), c.weights().matrix());
  EXPECT_NE(a.coeffs(), c.coeffs());
}

TEST(Sampler, InvalidLaws) {
  EXPECT_THROW(nc::coeff_law_stats(nc::ConstantCoeff{0.0}), nc::DomainError);
  EXPECT_THROW(nc::coeff_law_stats(nc::UniformCoeff{-1.0, 1.0}), nc::DomainError);
  EXPECT_THROW(nc::coeff_law_stats(nc::UniformCoeff{2.0, 1.0}), nc::DomainError);
  EXPECT_THROW(nc::coeff_law_stats(nc::TwoPointCoeff{1.5, 1.0, 2.0}), nc::DomainError);
  EXPECT_THROW(nc::coeff_law_stats(nc::TwoPointCoeff{0.5, 1.0, -1.0}), nc::DomainError);
  EXPECT_THROW(nc::sample_target({0, 3, nc::WeightLaw::UniformSphere, nc::ConstantCoeff{1.0}, 0}),
               nc::DomainError);
}

TEST(LawNames, ParseAndPrint) {
  EXPECT_EQ(nc::parse_weight_law("scaled-rademacher"), nc::WeightLaw::ScaledRademacher);
  EXPECT_THROW(nc::parse_weight_law("cauchy"), nc::DomainError);
  const auto law = nc::parse_coeff_law("two-point:0.3:1:-2");
  EXPECT_EQ(nc::to_string(law), "two-point:0.29999999999999999:1:-2");
  EXPECT_EQ(nc::to_string(nc::parse_coeff_law("uniform:0.5:1.5")), "uniform:0.5:1.5");
  EXPECT_THROW(nc::parse_coeff_law("uniform:1"), nc::DomainError);
  EXPECT_THROW(nc::parse_coeff_law("constant:abc"), nc::DomainError);
  EXPECT_THROW(nc::parse_coeff_law("constant:0"), nc::DomainError);
}

TEST(Serialization, RoundTripIsBitExact) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto net = nc::sample_target({17, 4, nc::WeightLaw::NormalizedGaussian, nc::UniformCoeff{0.1, 3.0}, seed});
    const auto back = nc::deserialize<nc::TargetTag>(nc::serialize(net));
    EXPECT_EQ(back.weights().matrix(), net.weights().matrix());
    EXPECT_EQ(back.coeffs(), net.coeffs());
    ASSERT_TRUE(back.coeff_stats());
    EXPECT_EQ(back.coeff_stats()->mean, net.coeff_stats()->mean);
    EXPECT_EQ(nc::serialize(back), nc::serialize(net));
  }
}

TEST(Serialization, DocumentsWithoutStatistics) {
  const std::string doc = R"({"d": 2, "n": 2, "weights": [[1, 0], [0, -1]], "coeffs": [0.5, 2]})";
  const auto net = nc::deserialize<nc::CompressedTag>(doc);
  EXPECT_EQ(net.size(), 2);
  EXPECT_FALSE(net.coeff_stats());
  EXPECT_DOUBLE_EQ(net.forward(Eigen::Vector2d(0, -3)), 3.0);
}

TEST(Serialization, Errors) {
  EXPECT_THROW(nc::deserialize<nc::TargetTag>(R"({"d": 2, "n": 1, "weights": [[0.9, 0]], "coeffs": [1]})"),
               nc::InvariantError);
  EXPECT_THROW(nc::deserialize<nc::TargetTag>(
                   R"({"d": 2, "n": 2, "weights": [[1, 0], [0, 0, 1]], "coeffs": [1, 1]})"),
               nc::DimensionError);
  EXPECT_THROW(nc::deserialize<nc::TargetTag>(R"({"d": 2, "n": 1, "weights": [[1, 0]], "coeffs": [1, 2]})"),
               nc::DimensionError);
  EXPECT_THROW(nc::deserialize<nc::TargetTag>(R"({"d": 2, "n": 1, "weights": [[1, 0]]})"), nc::ParseError);
  EXPECT_THROW(nc::deserialize<nc::TargetTag>(R"({"d": "two", "n": 1})"), nc::ParseError);
  EXPECT_THROW(nc::deserialize<nc::TargetTag>("[1, 2"), nc::ParseError);
  try {
    nc::deserialize<nc::TargetTag>(R"({"d": 2, "n": 1, "weights": [[1, "x"]], "coeffs": [1]})");
    FAIL() << "expected ParseError";
  } catch (const nc::ParseError& err) {
    EXPECT_EQ(err.where(), "weights[0][1]");
  }
  try {
    nc::deserialize<nc::TargetTag>("{\n  \"d\": 2,\n  \"n\": 1,\n  oops\n}");
    FAIL() << "expected ParseError";
  } catch (const nc::ParseError& err) {
    EXPECT_NE(std::string(err.what()).find("line 4"), std::string::npos) << err.what();
  }
}
