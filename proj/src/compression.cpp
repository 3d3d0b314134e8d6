#include "netcompress/compression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "netcompress/errors.hpp"
#include "netcompress/kernel.hpp"
#include "netcompress/linalg.hpp"
#include "netcompress/rng.hpp"

namespace netcompress {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr Eigen::Index kMonteCarloChunk = 4096;

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* op) {
  if (a != b) {
    throw DimensionError(std::string(op) + ": dimension " + std::to_string(a) + " vs " +
                         std::to_string(b));
  }
}

double floor_loss(double loss) {
  if (loss < 0.0 && loss >= kLossFloor) return 0.0;
  return loss;
}

double require_mu(const TargetNetwork& target) {
  if (!target.coeff_stats()) {
    throw DomainError("mu_a is unknown for this target; supply it explicitly");
  }
  return target.coeff_stats()->mean;
}

}  // namespace

double target_energy(const TargetNetwork& target) {
  const double n = static_cast<double>(target.size());
  const Eigen::VectorXd& a = target.coeffs();
  return a.dot(gram(target.weights()) * a) / (n * n);
}

LossReport population_loss(const TargetNetwork& target, const CompressedNetwork& compressed) {
  require_same_dim(target.dim(), compressed.dim(), "population_loss");
  const double m = static_cast<double>(compressed.size());
  const Eigen::VectorXd& b = compressed.coeffs();
  const SVector s = s_vector(target, compressed.weights());

  LossReport report;
  report.b_used = b;
  report.target_energy = target_energy(target);
  report.cross_term = b.dot(s.values) / m;
  report.self_term = b.dot(gram(compressed.weights()) * b) / (m * m);
  report.loss = floor_loss(report.target_energy - 2.0 * report.cross_term + report.self_term);
  return report;
}

MonteCarloEstimate mc_loss(const TargetNetwork& target, const CompressedNetwork& compressed,
                           Eigen::Index samples, std::uint64_t seed) {
  require_same_dim(target.dim(), compressed.dim(), "mc_loss");
  if (samples < 2) throw DomainError("mc_loss needs at least 2 samples");
  const Eigen::Index d = target.dim();

  // Chunk statistics merged in chunk order (Chan et al. pairwise update).
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
  std::normal_distribution<double> normal;
  Eigen::MatrixXd inputs;
  for (Eigen::Index chunk = 0, done = 0; done < samples; ++chunk) {
    const Eigen::Index rows = std::min(kMonteCarloChunk, samples - done);
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(chunk)));
    inputs.resize(rows, d);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) inputs(i, j) = normal(rng);
    }
    const Eigen::ArrayXd diff =
        (target.forward_batch(inputs) - compressed.forward_batch(inputs)).array();
    const Eigen::ArrayXd sq = diff.square();
    const double chunk_mean = sq.mean();
    const double chunk_m2 = (sq - chunk_mean).square().sum();
    const double chunk_count = static_cast<double>(rows);
    const double total = count + chunk_count;
    const double delta = chunk_mean - mean;
    mean += delta * chunk_count / total;
    m2 += chunk_m2 + delta * delta * count * chunk_count / total;
    count = total;
    done += rows;
  }
  const double variance = m2 / (count - 1.0);
  return {mean, std::sqrt(variance / count)};
}

SVector s_vector(const TargetNetwork& target, const WeightSet& compressed_weights) {
  require_same_dim(target.dim(), compressed_weights.dim(), "s_vector");
  const double n = static_cast<double>(target.size());
  SVector s;
  s.values = gram(compressed_weights, target.weights()) * target.coeffs() / n;
  s.mean_target = target.coeff_stats() ? target.coeff_stats()->mean / kTwoPi
                                       : std::numeric_limits<double>::quiet_NaN();
  return s;
}

Eigen::VectorXd optimal_b(const TargetNetwork& target, const WeightSet& compressed_weights) {
  const SVector s = s_vector(target, compressed_weights);
  const SymmetricPseudoInverse pinv(gram(compressed_weights));
  return static_cast<double>(compressed_weights.size()) * pinv.apply(s.values);
}

double reduced_loss(const TargetNetwork& target, const WeightSet& compressed_weights) {
  const SVector s = s_vector(target, compressed_weights);
  const SymmetricPseudoInverse pinv(gram(compressed_weights));
  return floor_loss(target_energy(target) - pinv.quadratic_form(s.values));
}

Eigen::VectorXd loss_gradient_b(const TargetNetwork& target, const CompressedNetwork& compressed) {
  const double m = static_cast<double>(compressed.size());
  const SVector s = s_vector(target, compressed.weights());
  const Eigen::VectorXd& b = compressed.coeffs();
  return -2.0 / m * s.values + 2.0 / (m * m) * (gram(compressed.weights()) * b);
}

double limit_loss(const TargetNetwork& target, const CompressedNetwork& compressed) {
  return limit_loss(target, compressed, require_mu(target));
}

double limit_loss(const TargetNetwork& target, const CompressedNetwork& compressed, double mu_a) {
  require_same_dim(target.dim(), compressed.dim(), "limit_loss");
  if (mu_a == 0.0 || !std::isfinite(mu_a)) throw DomainError("limit loss needs mu_a != 0");
  const double m = static_cast<double>(compressed.size());
  const Eigen::VectorXd& b = compressed.coeffs();
  const double cross = mu_a / kTwoPi * b.sum() / m;
  const double self = b.dot(gram(compressed.weights()) * b) / (m * m);
  return floor_loss(target_energy(target) - 2.0 * cross + self);
}

Eigen::VectorXd limit_b(const WeightSet& compressed_weights, double mu_a) {
  if (mu_a == 0.0 || !std::isfinite(mu_a)) throw DomainError("limit_b needs mu_a != 0");
  const Eigen::Index m = compressed_weights.size();
  const SymmetricPseudoInverse pinv(gram(compressed_weights));
  return static_cast<double>(m) * mu_a / kTwoPi * pinv.apply(Eigen::VectorXd::Ones(m));
}

double limit_objective_from_gram(const Eigen::MatrixXd& gram_vv) {
  return SymmetricPseudoInverse(gram_vv).quadratic_form(Eigen::VectorXd::Ones(gram_vv.rows()));
}

double limit_objective(const WeightSet& compressed_weights) {
  return limit_objective_from_gram(gram(compressed_weights));
}

Bound err_bound(const ErrBoundParams& p) {
  if (!(p.n > 0 && p.dim > 0 && p.coeff_bound > 0 && p.sigma_w > 0 && p.t > 0 && p.constant > 0)) {
    throw DomainError("err_bound: all arguments must be positive");
  }
  const double value = p.constant * p.coeff_bound *
                       (p.sigma_w * p.sigma_w / p.dim + p.t * (1.0 + p.sigma_w) / std::sqrt(p.n));
  const double failure = 4.0 * std::exp(-p.t * p.t / 16.0) + 2.0 * std::exp(-p.dim);
  return {value, failure};
}

Bound loss_gap_bound(double b_max, Eigen::Index m, const Bound& err) {
  if (!(b_max > 0) || m < 1 || !(err.value > 0)) {
    throw DomainError("loss_gap_bound: all arguments must be positive");
  }
  return {b_max * static_cast<double>(m) * err.value, err.failure_probability};
}

}  // namespace netcompress
