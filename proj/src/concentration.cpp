#include "netcompress/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "netcompress/compression.hpp"
#include "netcompress/errors.hpp"
#include "netcompress/kernel.hpp"
#include "netcompress/rng.hpp"

namespace netcompress {

double linear_term_sup(const TargetNetwork& target) {
  const double n = static_cast<double>(target.size());
  return (target.weights().matrix().transpose() * target.coeffs()).norm() / n;
}

double quadratic_term_sup(const TargetNetwork& target) {
  const double n = static_cast<double>(target.size());
  const Eigen::MatrixXd& w = target.weights().matrix();
  const Eigen::MatrixXd scaled = target.coeffs().cwiseAbs().cwiseSqrt().asDiagonal() * w;
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(w.cols(), w.cols());
  second.selfadjointView<Eigen::Lower>().rankUpdate(scaled.transpose(), 1.0 / n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(second, Eigen::EigenvaluesOnly);
  return std::max(0.0, solver.eigenvalues().maxCoeff());
}

namespace {

// Deviation F(v) = (1/N) sum_n a_n g(<v, w_n>) - mu_a / 2 pi for several
// directions at once. Each column is computed with the same sequence of
// floating-point operations whatever the other columns are, so results for a
// direction do not depend on how directions are batched.
class DeviationField {
 public:
  DeviationField(const TargetNetwork& target, double mu_a)
      : wt_(target.weights().matrix().transpose()),
        coeffs_(target.coeffs()),
        offset_(mu_a / (2.0 * std::numbers::pi)),
        n_(static_cast<double>(target.size())) {}

  Eigen::VectorXd values(const Eigen::MatrixXd& dirs) const {
    const Eigen::Index k = dirs.cols();
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(k);
    for (Eigen::Index n = 0; n < wt_.cols(); ++n) {
      const auto w = wt_.col(n);
      for (Eigen::Index j = 0; j < k; ++j) sums(j) += coeffs_(n) * relu_kernel(w.dot(dirs.col(j)));
    }
    return sums / n_ - Eigen::VectorXd::Constant(k, offset_);
  }

  // Values of F and Riemannian gradients of F^2.
  void values_and_gradients(const Eigen::MatrixXd& dirs, Eigen::VectorXd& values,
                            Eigen::MatrixXd& gradients) const {
    const Eigen::Index k = dirs.cols();
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(k);
    Eigen::MatrixXd slopes = Eigen::MatrixXd::Zero(wt_.rows(), k);
    for (Eigen::Index n = 0; n < wt_.cols(); ++n) {
      const auto w = wt_.col(n);
      for (Eigen::Index j = 0; j < k; ++j) {
        const double alpha = clamp_inner_product(w.dot(dirs.col(j)));
        sums(j) += coeffs_(n) * relu_kernel(alpha);
        slopes.col(j) += (coeffs_(n) * relu_kernel_derivative(alpha)) * w;
      }
    }
    values = sums / n_ - Eigen::VectorXd::Constant(k, offset_);
    gradients.resize(wt_.rows(), k);
    for (Eigen::Index j = 0; j < k; ++j) {
      const Eigen::VectorXd euclid = 2.0 * values(j) * slopes.col(j) / n_;
      gradients.col(j) = euclid - euclid.dot(dirs.col(j)) * dirs.col(j);
    }
  }

 private:
  Eigen::MatrixXd wt_;  // d x N, one weight per column
  Eigen::VectorXd coeffs_;
  double offset_;
  double n_;
};

// Projected gradient ascent of F^2 from each column of `starts`, with an
// independent Armijo line search per column. Returns the best |F| seen per column.
Eigen::VectorXd refine(const DeviationField& field, Eigen::MatrixXd dirs, int iters) {
  const Eigen::Index k = dirs.cols();
  Eigen::VectorXd values;
  Eigen::MatrixXd grads;
  field.values_and_gradients(dirs, values, grads);
  Eigen::VectorXd best = values.cwiseAbs();
  Eigen::VectorXd steps = Eigen::VectorXd::Ones(k);
  std::vector<bool> active(static_cast<std::size_t>(k), true);

  for (int it = 0; it < iters; ++it) {
    // Per-column line search, batched over the columns still searching.
    std::vector<Eigen::Index> pending;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (active[static_cast<std::size_t>(j)] && grads.col(j).norm() > 0.0) {
        pending.push_back(j);
        steps(j) *= 2.0;
      }
    }
    Eigen::MatrixXd accepted = dirs;
    for (int tries = 0; tries < 50 && !pending.empty(); ++tries) {
      Eigen::MatrixXd trial(dirs.rows(), static_cast<Eigen::Index>(pending.size()));
      for (std::size_t p = 0; p < pending.size(); ++p) {
        const Eigen::Index j = pending[p];
        const Eigen::VectorXd moved = dirs.col(j) + steps(j) * grads.col(j);
        trial.col(static_cast<Eigen::Index>(p)) = moved / moved.norm();
      }
      const Eigen::VectorXd trial_values = field.values(trial);
      std::vector<Eigen::Index> still;
      for (std::size_t p = 0; p < pending.size(); ++p) {
        const Eigen::Index j = pending[p];
        const double gain = trial_values(static_cast<Eigen::Index>(p)) *
                                trial_values(static_cast<Eigen::Index>(p)) -
                            values(j) * values(j);
        if (gain >= 1e-4 * steps(j) * grads.col(j).squaredNorm()) {
          accepted.col(j) = trial.col(static_cast<Eigen::Index>(p));
        } else {
          steps(j) *= 0.5;
          still.push_back(j);
        }
      }
      pending.swap(still);
    }
    for (Eigen::Index j : pending) active[static_cast<std::size_t>(j)] = false;
    dirs = accepted;
    field.values_and_gradients(dirs, values, grads);
    best = best.cwiseMax(values.cwiseAbs());
  }
  return best;
}

Eigen::MatrixXd random_directions(Eigen::Index dim, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd dirs(dim, count);
  for (int j = 0; j < count; ++j) {
    double norm = 0.0;
    do {
      for (Eigen::Index i = 0; i < dim; ++i) dirs(i, j) = normal(rng);
      norm = dirs.col(j).norm();
    } while (norm == 0.0);
    dirs.col(j) /= norm;
  }
  return dirs;
}

}  // namespace

Eigen::VectorXd s_deviation_at(const TargetNetwork& target, double mu_a,
                               const Eigen::MatrixXd& directions) {
  if (directions.cols() != target.dim()) throw DimensionError("s_deviation_at: dimension mismatch");
  return DeviationField(target, mu_a).values(directions.transpose()).cwiseAbs();
}

double s_deviation(const TargetNetwork& target, double mu_a, const DeviationSearch& search) {
  if (search.probes < 0 || search.refine_iters < 0) {
    throw DomainError("s_deviation: probe and iteration counts must be nonnegative");
  }
  const DeviationField field(target, mu_a);
  const Eigen::Index d = target.dim();

  std::vector<Eigen::VectorXd> starts;
  const Eigen::VectorXd mean_dir = target.weights().matrix().transpose() * target.coeffs();
  if (mean_dir.norm() > 0.0) {
    starts.push_back(mean_dir / mean_dir.norm());
    starts.push_back(-mean_dir / mean_dir.norm());
  }

  double best = 0.0;
  if (search.probes > 0) {
    const Eigen::MatrixXd probes = random_directions(d, search.probes, search.seed);
    const Eigen::VectorXd values = field.values(probes).cwiseAbs();
    double record = -1.0;
    for (Eigen::Index j = 0; j < values.size(); ++j) {
      if (values(j) > record) {
        record = values(j);
        starts.push_back(probes.col(j));
      }
    }
    best = std::max(best, record);
  }
  if (starts.empty()) return best;

  Eigen::MatrixXd start_matrix(d, static_cast<Eigen::Index>(starts.size()));
  for (std::size_t j = 0; j < starts.size(); ++j) start_matrix.col(static_cast<Eigen::Index>(j)) = starts[j];
  return std::max(best, refine(field, start_matrix, search.refine_iters).maxCoeff());
}

DeviationTable rate_experiment(const RateConfig& cfg) {
  if (cfg.ns.empty()) throw DomainError("rate_experiment needs at least one N");
  for (std::size_t i = 1; i < cfg.ns.size(); ++i) {
    if (cfg.ns[i] <= cfg.ns[i - 1]) throw DomainError("rate_experiment: Ns must be strictly increasing");
  }
  if (cfg.trials < 1) throw DomainError("rate_experiment needs trials >= 1");
  const CoeffStats stats = coeff_law_stats(cfg.coeff_law);

  DeviationTable table;
  for (std::size_t i = 0; i < cfg.ns.size(); ++i) {
    const Eigen::Index n = cfg.ns[i];
    double max_linear = 0.0;
    double max_quadratic = 0.0;
    std::vector<double> deviations;
    for (int k = 0; k < cfg.trials; ++k) {
      const std::uint64_t trial_seed =
          derive_seed(cfg.seed, static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(cfg.trials) +
                                    static_cast<std::uint64_t>(k));
      const TargetNetwork target =
          sample_target({n, cfg.dim, cfg.weight_law, cfg.coeff_law, trial_seed});
      max_linear = std::max(max_linear, linear_term_sup(target));
      max_quadratic = std::max(max_quadratic, quadratic_term_sup(target));
      DeviationSearch search = cfg.search;
      search.seed = derive_seed(trial_seed, 2);
      deviations.push_back(s_deviation(target, stats.mean, search));
    }
    std::sort(deviations.begin(), deviations.end());
    const std::size_t half = deviations.size() / 2;
    const double median = deviations.size() % 2 == 1
                              ? deviations[half]
                              : 0.5 * (deviations[half - 1] + deviations[half]);
    const Bound bound = err_bound({static_cast<double>(n), static_cast<double>(cfg.dim), stats.bound,
                                   cfg.sigma_w, cfg.t, cfg.constant});
    table.rows.push_back({n, cfg.dim, cfg.trials, max_linear, max_quadratic, median,
                          deviations.back(), bound.value});
  }
  return table;
}

double loglog_slope(const DeviationTable& table) {
  if (table.rows.size() < 2) throw DomainError("loglog_slope needs at least two rows");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double count = static_cast<double>(table.rows.size());
  for (const DeviationRow& row : table.rows) {
    if (!(row.est_s_deviation > 0.0)) throw DomainError("loglog_slope: nonpositive deviation");
    const double x = std::log(static_cast<double>(row.n));
    const double y = std::log(row.est_s_deviation);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

}  // namespace netcompress
