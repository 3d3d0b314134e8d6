#pragma once

// Population L2 loss between a target network W (N neurons) and a compressed
// network V (M neurons) under Gaussian input, written through Gram matrices:
//
//   L = (1/N^2) a' G_WW a - (2/M) b' s + (1/M^2) b' G_VV b,   s = (1/N) G_VW a,
//
// together with the optimal output coefficients and the mean-field ("limit")
// version of the loss in which s is replaced by (mu_a / 2 pi) 1.

#include <cstdint>

#include <Eigen/Dense>

#include "netcompress/network.hpp"

namespace netcompress {

struct LossReport {
  double loss;           // floored at 0 when within -1e-10
  Eigen::VectorXd b_used;
  double target_energy;  // (1/N^2) a' G_WW a
  double cross_term;     // (1/M) b' s
  double self_term;      // (1/M^2) b' G_VV b
};

struct SVector {
  Eigen::VectorXd values;
  double mean_target;  // mu_a / (2 pi), NaN when mu_a is unknown
};

struct MonteCarloEstimate {
  double estimate;
  double std_error;
};

inline constexpr double kLossFloor = -1e-10;

/// (1/N^2) a' G_WW a. Quadratic in N; callers comparing many V against one W
/// should compute it once.
double target_energy(const TargetNetwork& target);

LossReport population_loss(const TargetNetwork& target, const CompressedNetwork& compressed);

/// Monte Carlo estimate of E[(f_W(X) - f_V(X))^2], X ~ N(0, I). Samples are
/// drawn in fixed-size chunks, chunk k seeded with derive_seed(seed, k), so the
/// result depends only on (seed, samples).
MonteCarloEstimate mc_loss(const TargetNetwork& target, const CompressedNetwork& compressed,
                           Eigen::Index samples, std::uint64_t seed);

/// [s]_i = (1/N) sum_n a_n g(<v_i, w_n>).
SVector s_vector(const TargetNetwork& target, const WeightSet& compressed_weights);

/// b* = M G_VV^+ s, the minimizer of the loss over b for fixed weights.
Eigen::VectorXd optimal_b(const TargetNetwork& target, const WeightSet& compressed_weights);

/// Loss at b*: (1/N^2) a' G_WW a - s' G_VV^+ s, floored at zero.
double reduced_loss(const TargetNetwork& target, const WeightSet& compressed_weights);

/// Gradient of the loss with respect to b: -(2/M) s + (2/M^2) G_VV b.
Eigen::VectorXd loss_gradient_b(const TargetNetwork& target, const CompressedNetwork& compressed);

/// Loss with s replaced by (mu_a / 2 pi) 1. mu_a is taken from the target's
/// coefficient statistics; DomainError when unknown or zero.
double limit_loss(const TargetNetwork& target, const CompressedNetwork& compressed);
double limit_loss(const TargetNetwork& target, const CompressedNetwork& compressed, double mu_a);

/// b~ = (M mu_a / 2 pi) G_VV^+ 1. DomainError when mu_a == 0.
Eigen::VectorXd limit_b(const WeightSet& compressed_weights, double mu_a);

/// 1' G_VV^+ 1, the target-independent quantity maximized by the limit-optimal weights.
double limit_objective(const WeightSet& compressed_weights);
double limit_objective_from_gram(const Eigen::MatrixXd& gram_vv);

/// Parameters of the uniform bound on |[s]_i - mu_a / 2 pi|.
struct ErrBoundParams {
  double n;
  double dim;
  double coeff_bound;  // A
  double sigma_w;
  double t;
  double constant = 1.0;  // C
};

struct Bound {
  double value;
  double failure_probability;  // 4 exp(-t^2/16) + 2 exp(-d)
};

/// err = C A (sigma_W^2 / d + t (1 + sigma_W) / sqrt(N)). DomainError on
/// nonpositive inputs.
Bound err_bound(const ErrBoundParams& p);

/// B M err, bounding |L - L~| uniformly over the compressed weights.
Bound loss_gap_bound(double b_max, Eigen::Index m, const Bound& err);

}  // namespace netcompress
