#include "netcompress/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "netcompress/compression.hpp"
#include "netcompress/errors.hpp"
#include "netcompress/etf.hpp"
#include "netcompress/kernel.hpp"
#include "netcompress/network.hpp"

namespace netcompress {

namespace {

// q = (G + ridge I)^{-1} 1
Eigen::VectorXd ridged_weights(const Eigen::MatrixXd& g, double ridge) {
  const Eigen::Index m = g.rows();
  const Eigen::MatrixXd shifted = g + ridge * Eigen::MatrixXd::Identity(m, m);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(shifted);
  if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > std::numeric_limits<double>::epsilon())) {
    throw NumericError("Gram matrix plus ridge is singular; use a positive ridge");
  }
  Eigen::VectorXd q = ldlt.solve(Eigen::VectorXd::Ones(m));
  if (!q.allFinite()) throw NumericError("non-finite solution of the ridged Gram system");
  return q;
}

struct Evaluation {
  Eigen::MatrixXd gram;
  double ridged_objective;
  Eigen::MatrixXd gradient;
};

Evaluation evaluate(const WeightSet& vectors, double ridge) {
  const Eigen::MatrixXd& v = vectors.matrix();
  const Eigen::Index m = vectors.size();
  const Eigen::MatrixXd inner = v * v.transpose();
  Evaluation out;
  out.gram = gram(vectors);
  const Eigen::VectorXd q = ridged_weights(out.gram, ridge);
  out.ridged_objective = q.sum();

  Eigen::MatrixXd weights(m, m);  // q_i q_j g'(<v_i, v_j>), zero diagonal
  for (Eigen::Index j = 0; j < m; ++j) {
    weights(j, j) = 0.0;
    for (Eigen::Index i = j + 1; i < m; ++i) {
      weights(i, j) = q(i) * q(j) * relu_kernel_derivative(inner(i, j));
      weights(j, i) = weights(i, j);
    }
  }
  const Eigen::MatrixXd euclidean = -2.0 * weights * v;
  const Eigen::VectorXd radial = (euclidean.cwiseProduct(v)).rowwise().sum();
  out.gradient = euclidean - radial.asDiagonal() * v;
  return out;
}

WeightSet initial_vectors(const GdConfig& cfg) {
  return std::visit(
      [&](const auto& init) -> WeightSet {
        using I = std::decay_t<decltype(init)>;
        if constexpr (std::is_same_v<I, RandomSphereInit>) {
          return sample_weights(cfg.m, cfg.dim, WeightLaw::UniformSphere, cfg.seed);
        } else if constexpr (std::is_same_v<I, EtfInit>) {
          return make_etf(cfg.m, cfg.dim).vectors;
        } else {
          if (init.vectors.size() != cfg.m || init.vectors.dim() != cfg.dim) {
            throw DimensionError("explicit initialization does not match M x d");
          }
          return init.vectors;
        }
      },
      cfg.init);
}

}  // namespace

double ridged_limit_objective(const WeightSet& vectors, double ridge) {
  return ridged_weights(gram(vectors), ridge).sum();
}

Eigen::MatrixXd limit_objective_gradient(const WeightSet& vectors, double ridge) {
  return evaluate(vectors, ridge).gradient;
}

GdTrace maximize(const GdConfig& cfg) {
  if (cfg.m < 1 || cfg.dim < 1) throw DomainError("maximize needs M >= 1 and d >= 1");
  if (!(cfg.step_size > 0.0)) throw DomainError("step size must be positive");
  if (!(cfg.ridge >= 0.0)) throw DomainError("ridge must be nonnegative");

  std::vector<std::string> warnings;
  if (cfg.m > cfg.dim + 1) {
    warnings.push_back("M = " + std::to_string(cfg.m) + " exceeds d + 1 = " +
                       std::to_string(cfg.dim + 1) + "; no ETF exists in this dimension");
  }
  const Eigen::MatrixXd reference = etf_gram(cfg.m);

  WeightSet current = initial_vectors(cfg);
  Evaluation eval = evaluate(current, cfg.ridge);
  std::vector<GdRecord> records;
  records.reserve(static_cast<std::size_t>(cfg.max_iters) + 1);
  GdStatus status = GdStatus::MaxIterations;
  double eta = cfg.step_size;

  for (int it = 0;; ++it) {
    const double grad_norm = eval.gradient.norm();
    records.push_back({it, limit_objective_from_gram(eval.gram), eval.ridged_objective, grad_norm,
                       gram_distance(eval.gram, reference), 0.0});
    if (grad_norm < cfg.grad_tol) {
      status = GdStatus::GradientTolerance;
      break;
    }
    if (it >= cfg.max_iters) {
      status = GdStatus::MaxIterations;
      break;
    }

    const Eigen::MatrixXd& v = current.matrix();
    std::optional<WeightSet> next;
    std::optional<Evaluation> next_eval;
    if (cfg.backtracking) {
      if (it > 0) eta = std::min(eta * cfg.step_growth, cfg.max_step);
      const double required_slope = cfg.armijo_slope * grad_norm * grad_norm;
      for (int tries = 0; tries <= cfg.max_backtracks; ++tries, eta *= cfg.backtrack_factor) {
        WeightSet candidate = WeightSet::normalized(v + eta * eval.gradient);
        Evaluation candidate_eval = evaluate(candidate, cfg.ridge);
        if (candidate_eval.ridged_objective >= eval.ridged_objective + eta * required_slope) {
          next.emplace(std::move(candidate));
          next_eval.emplace(std::move(candidate_eval));
          break;
        }
      }
      if (!next) {
        status = GdStatus::LineSearchStalled;
        break;
      }
    } else {
      eta = cfg.step_size;
      next.emplace(WeightSet::normalized(v + eta * eval.gradient));
      next_eval.emplace(evaluate(*next, cfg.ridge));
    }
    if (!std::isfinite(next_eval->ridged_objective)) {
      throw NumericError("non-finite objective at iteration " + std::to_string(it + 1));
    }
    records.back().step = eta;
    current = std::move(*next);
    eval = std::move(*next_eval);
  }

  return GdTrace{std::move(records), std::move(current), status, std::move(warnings)};
}

double m2_objective(double alpha) {
  const double off = relu_kernel(alpha);
  Eigen::Matrix2d g;
  g << relu_kernel(1.0), off, off, relu_kernel(1.0);
  return limit_objective_from_gram(g);
}

M2Optimum brute_force_m2(int grid_points) {
  if (grid_points < 3) throw DomainError("brute_force_m2 needs at least 3 grid points");
  M2Optimum best{-1.0, -std::numeric_limits<double>::infinity()};
  const double spacing = 2.0 / static_cast<double>(grid_points - 1);
  for (int k = 0; k < grid_points; ++k) {
    const double alpha = k == grid_points - 1 ? 1.0 : -1.0 + spacing * k;
    const double value = m2_objective(alpha);
    if (value > best.value) best = {alpha, value};
  }
  return best;
}

}  // namespace netcompress
