#pragma once

// Empirical checks of how fast s = (1/N) G_VW a approaches (mu_a / 2 pi) 1
// uniformly over the compressed weights, as N and d grow.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "netcompress/network.hpp"

namespace netcompress {

/// sup_{|v|=1} |(1/N) sum_n a_n <v, w_n>| = |(1/N) sum_n a_n w_n|_2.
double linear_term_sup(const TargetNetwork& target);

/// sup_{|v|=1} (1/N) sum_n |a_n| <v, w_n>^2, the top eigenvalue of (1/N) sum_n |a_n| w_n w_n'.
double quadratic_term_sup(const TargetNetwork& target);

struct DeviationSearch {
  int probes = 64;
  int refine_iters = 20;
  std::uint64_t seed = 0;
};

/// Lower-bound estimate of sup_{|v|=1} |(1/N) sum_n a_n g(<v, w_n>) - mu_a / 2 pi|.
///
/// Evaluates the deviation at +/- the mean weight direction and at `probes`
/// random directions, then runs projected gradient ascent on the squared
/// deviation from the two mean directions and from every probe that set a
/// new running maximum when the probes are scanned in order. Any prefix of the
/// probe sequence therefore refines a subset of the starts used by a longer
/// one, and the estimate is nondecreasing in the probe budget.
double s_deviation(const TargetNetwork& target, double mu_a, const DeviationSearch& search);

/// Deviation evaluated at the given directions (one per row, unit norm).
Eigen::VectorXd s_deviation_at(const TargetNetwork& target, double mu_a,
                               const Eigen::MatrixXd& directions);

struct RateConfig {
  std::vector<Eigen::Index> ns;
  Eigen::Index dim = 200;
  int trials = 10;
  std::uint64_t seed = 0;
  WeightLaw weight_law = WeightLaw::UniformSphere;
  CoeffLaw coeff_law = UniformCoeff{0.5, 1.5};
  DeviationSearch search{};
  // err_bound reporting parameters
  double sigma_w = 2.0;
  double t = 4.0;
  double constant = 1.0;
};

struct DeviationRow {
  Eigen::Index n;
  Eigen::Index dim;
  int trials;
  double max_linear_sup;
  double max_quadratic_sup;
  double est_s_deviation;  // median over trials
  double max_s_deviation;
  double err_bound_value;
};

struct DeviationTable {
  std::vector<DeviationRow> rows;
};

/// One row per N; trial k at the i-th N uses seed derive_seed(seed, i * trials + k).
/// Ns must be nonempty and strictly increasing (DomainError).
DeviationTable rate_experiment(const RateConfig& cfg);

/// Least-squares slope of log(est_s_deviation) against log(N).
double loglog_slope(const DeviationTable& table);

}  // namespace netcompress
