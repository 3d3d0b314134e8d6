#pragma once

// Riemannian gradient ascent of the limit objective 1' G_VV^+ 1 over M points
// on the unit sphere. Inside the loop the pseudo-inverse is replaced by
// (G_VV + ridge I)^{-1} so the gradient is defined everywhere; reported
// objective values use the exact pseudo-inverse.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "netcompress/weights.hpp"

namespace netcompress {

struct RandomSphereInit {};
struct EtfInit {};
struct ExplicitInit {
  WeightSet vectors;
};
using GdInit = std::variant<RandomSphereInit, EtfInit, ExplicitInit>;

struct GdConfig {
  Eigen::Index m = 2;
  Eigen::Index dim = 3;
  double step_size = 0.1;
  int max_iters = 1000;
  double grad_tol = 1e-13;
  std::uint64_t seed = 0;
  GdInit init = RandomSphereInit{};
  double ridge = 1e-10;
  // Armijo backtracking: halve the step until the ridged objective increases
  // by at least armijo_slope * step * |grad|^2. After an accepted step the
  // trial step for the next iteration is multiplied by step_growth.
  bool backtracking = true;
  double armijo_slope = 1e-4;
  double backtrack_factor = 0.5;
  double step_growth = 2.0;
  double max_step = 1e4;
  int max_backtracks = 60;
};

struct GdRecord {
  int iteration;
  double objective;         // 1' G^+ 1, exact pseudo-inverse
  double ridged_objective;  // 1' (G + ridge I)^{-1} 1
  double grad_norm;         // Frobenius norm of the Riemannian gradient
  double etf_distance;      // gram_distance to the M-vector ETF
  double step;              // step used to leave this iterate (0 for the last record)
};

enum class GdStatus { GradientTolerance, MaxIterations, LineSearchStalled };

struct GdTrace {
  std::vector<GdRecord> records;  // records[0] is the initial point
  WeightSet final_vectors;
  GdStatus status;
  std::vector<std::string> warnings;

  double final_objective() const { return records.back().objective; }
};

/// 1' (G_VV + ridge I)^{-1} 1. NumericError if the matrix is singular.
double ridged_limit_objective(const WeightSet& vectors, double ridge);

/// Riemannian ascent direction of 1' (G_VV + ridge I)^{-1} 1, one row per
/// vector. With q = (G + ridge I)^{-1} 1 the Euclidean gradient for v_i is
/// -2 q_i sum_{j != i} q_j g'(<v_i, v_j>) v_j; the result is its projection on
/// the tangent space at v_i.
Eigen::MatrixXd limit_objective_gradient(const WeightSet& vectors, double ridge);

/// Runs gradient ascent; non-convergence is reported through `status`.
GdTrace maximize(const GdConfig& cfg);

struct M2Optimum {
  double alpha;
  double value;
};

/// The M = 2 objective as a function of alpha = <v_1, v_2>.
double m2_objective(double alpha);

/// Exhaustive search of m2_objective over a uniform grid of `grid_points` on [-1, 1].
M2Optimum brute_force_m2(int grid_points);

}  // namespace netcompress
