#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "cli/csv.hpp"
#include "netcompress/errors.hpp"
#include "netcompress/etf.hpp"
#include "netcompress/kernel.hpp"
#include "netcompress/rng.hpp"

namespace netcompress::cli {

namespace {

void require_finite(double x, const std::string& what) {
  if (!std::isfinite(x)) throw NumericError("non-finite " + what);
}

}  // namespace

// ---- kernel-table ---------------------------------------------------------

std::vector<double> uniform_grid(int points) {
  if (points < 2) throw DomainError("grid needs at least 2 points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double spacing = 2.0 / static_cast<double>(points - 1);
  for (int k = 0; k < points; ++k) grid[static_cast<std::size_t>(k)] = -1.0 + spacing * k;
  grid.back() = 1.0;
  return grid;
}

std::vector<KernelRow> kernel_table(const std::vector<double>& alphas) {
  if (alphas.empty()) throw DomainError("kernel table needs at least one alpha");
  std::vector<KernelRow> rows;
  rows.reserve(alphas.size());
  for (double a : alphas) {
    rows.push_back({a, relu_kernel(a), relu_kernel_derivative(a), relu_kernel_taylor(a, 10),
                    relu_kernel_taylor(a, 50)});
  }
  return rows;
}

CommandResult cmd_kernel_table(const std::vector<double>& alphas, const std::string& out) {
  const auto rows = kernel_table(alphas);
  CsvWriter csv(out, {"alpha", "g", "g_prime", "taylor_K10", "taylor_K50"});
  for (const KernelRow& r : rows) csv.row({r.alpha, r.g, r.g_prime, r.taylor_k10, r.taylor_k50});
  csv.close();
  CommandResult result;
  result.outputs = {out};
  result.results["rows"] = rows.size();
  return result;
}

// ---- compress -------------------------------------------------------------

CompressMethod parse_method(const std::string& name) {
  if (name == "exact-b") return CompressMethod::ExactB;
  if (name == "limit-b") return CompressMethod::LimitB;
  if (name == "etf-limit") return CompressMethod::EtfLimit;
  throw DomainError("unknown method '" + name + "' (exact-b, limit-b, etf-limit)");
}

std::string to_string(CompressMethod method) {
  switch (method) {
    case CompressMethod::ExactB: return "exact-b";
    case CompressMethod::LimitB: return "limit-b";
    case CompressMethod::EtfLimit: return "etf-limit";
  }
  return "?";
}

namespace {

WeightSet compressed_weights(const CompressOptions& opts, const TargetNetwork& target) {
  const Eigen::Index m = opts.m;
  const Eigen::Index d = target.dim();
  auto etf = [&] {
    std::optional<Eigen::MatrixXd> rotation;
    if (opts.rotate) rotation = random_orthogonal(d, derive_seed(opts.seed, 4));
    return make_etf(m, d, rotation).vectors;
  };
  if (opts.method == CompressMethod::EtfLimit) return etf();

  const std::string& source = opts.weights;
  if (source == "etf" || (source == "auto" && m <= d + 1)) return etf();
  if (source == "random" || source == "auto") {
    return sample_weights(m, d, WeightLaw::UniformSphere, derive_seed(opts.seed, 5));
  }
  if (source == "subset") {
    if (m > target.size()) throw DomainError("subset weights need M <= N");
    return WeightSet(target.weights().matrix().topRows(m));
  }
  const TargetNetwork donor = load_target(source);
  if (donor.size() != m || donor.dim() != d) {
    throw DimensionError("weights file " + source + " does not hold " + std::to_string(m) +
                         " vectors of dimension " + std::to_string(d));
  }
  return donor.weights();
}

}  // namespace

CompressOutcome compress(const CompressOptions& opts) {
  if (opts.m < 1) throw DomainError("M must be at least 1");
  TargetNetwork target = opts.target_path ? load_target(*opts.target_path) : sample_target(opts.sampler);
  if (opts.method == CompressMethod::EtfLimit && opts.m > target.dim() + 1) {
    throw DomainError("etf-limit needs M <= d + 1");
  }

  std::optional<double> mu = opts.mu_a;
  if (!mu && target.coeff_stats()) mu = target.coeff_stats()->mean;
  if (opts.method != CompressMethod::ExactB && !mu) {
    throw DomainError("limit methods need mu_a: pass --mu-a or use a sampled target");
  }

  WeightSet weights = compressed_weights(opts, target);
  std::optional<Eigen::VectorXd> b_limit;
  if (mu) b_limit = limit_b(weights, *mu);
  Eigen::VectorXd b =
      opts.method == CompressMethod::ExactB ? optimal_b(target, weights) : *b_limit;
  CompressedNetwork compressed(weights, b);

  LossReport loss = population_loss(target, compressed);
  const MonteCarloEstimate mc = opts.mc_samples >= 2
                                    ? mc_loss(target, compressed, opts.mc_samples, derive_seed(opts.seed, 3))
                                    : MonteCarloEstimate{std::numeric_limits<double>::quiet_NaN(),
                                                         std::numeric_limits<double>::quiet_NaN()};
  const double exact = reduced_loss(target, weights);

  std::optional<double> limit_b_loss;
  std::optional<double> limit;
  std::optional<Bound> err;
  std::optional<Bound> gap;
  if (mu) {
    limit_b_loss = population_loss(target, CompressedNetwork(weights, *b_limit)).loss;
    limit = limit_loss(target, compressed, *mu);
    const double a_bound = target.coeff_stats() ? target.coeff_stats()->bound
                                                : target.coeffs().cwiseAbs().maxCoeff();
    if (a_bound > 0.0) {
      err = err_bound({static_cast<double>(target.size()), static_cast<double>(target.dim()), a_bound,
                       opts.sigma_w, opts.t, opts.constant});
      const double b_max = b_limit->cwiseAbs().maxCoeff();
      if (b_max > 0.0) gap = loss_gap_bound(b_max, opts.m, *err);
    }
  }
  require_finite(loss.loss, "population loss");
  require_finite(exact, "reduced loss");
  return CompressOutcome{std::move(target), std::move(compressed), std::move(loss), mc, exact,
                         limit_b_loss, limit, err, gap};
}

CommandResult cmd_compress(const CompressOptions& opts, const std::string& out) {
  const CompressOutcome outcome = compress(opts);
  save_network(out, serialize(outcome.compressed));

  nlohmann::ordered_json report;
  report["method"] = to_string(opts.method);
  report["n"] = outcome.target.size();
  report["m"] = outcome.compressed.size();
  report["d"] = outcome.target.dim();
  report["population_loss"] = outcome.loss.loss;
  report["target_energy"] = outcome.loss.target_energy;
  report["cross_term"] = outcome.loss.cross_term;
  report["self_term"] = outcome.loss.self_term;
  report["mc_loss"] = outcome.mc.estimate;
  report["mc_std_error"] = outcome.mc.std_error;
  report["mc_samples"] = opts.mc_samples;
  report["exact_b_loss"] = outcome.exact_b_loss;
  if (outcome.limit_b_loss) report["limit_b_loss"] = *outcome.limit_b_loss;
  if (outcome.limit_loss) report["limit_loss"] = *outcome.limit_loss;
  if (outcome.err) {
    report["err_bound"] = outcome.err->value;
    report["failure_probability"] = outcome.err->failure_probability;
  }
  if (outcome.gap_bound) report["loss_gap_bound"] = outcome.gap_bound->value;

  const std::string report_path = out + ".report.json";
  std::ofstream file(report_path);
  if (!file) throw std::runtime_error("cannot write " + report_path);
  file << report.dump(2) << '\n';
  file.close();
  if (!file) throw std::runtime_error("failed writing " + report_path);

  CommandResult result;
  result.outputs = {out, report_path};
  result.results = report;
  return result;
}

// ---- gradient-ascent experiments -------------------------------------------

Eigen::Index experiment_dim(const GdExperiment& exp, Eigen::Index m) {
  return exp.dim > 0 ? exp.dim : m + 5;
}

GdConfig experiment_config(const GdExperiment& exp, Eigen::Index m, int seed_index) {
  GdConfig cfg;
  cfg.m = m;
  cfg.dim = experiment_dim(exp, m);
  cfg.max_iters = exp.iters;
  cfg.step_size = exp.step;
  cfg.seed = derive_seed(derive_seed(exp.seed, static_cast<std::uint64_t>(m)),
                         static_cast<std::uint64_t>(seed_index));
  return cfg;
}

std::vector<Fig2Row> fig2(const GdExperiment& exp, Eigen::Index m_min, Eigen::Index m_max, int seeds) {
  if (m_min < 1 || m_max < m_min) throw DomainError("fig2 needs 1 <= m_min <= m_max");
  if (seeds < 1) throw DomainError("fig2 needs at least one seed");
  std::vector<Fig2Row> rows;
  for (Eigen::Index m = m_min; m <= m_max; ++m) {
    const double reference = etf_objective(m);
    for (int s = 0; s < seeds; ++s) {
      const GdTrace trace = maximize(experiment_config(exp, m, s));
      const double value = trace.final_objective();
      require_finite(value, "GD objective");
      rows.push_back({m, s, value, reference, std::abs(value - reference)});
    }
  }
  return rows;
}

CommandResult cmd_fig2(const GdExperiment& exp, Eigen::Index m_min, Eigen::Index m_max, int seeds,
                       const std::string& out) {
  const auto rows = fig2(exp, m_min, m_max, seeds);
  CsvWriter csv(out, {"M", "seed", "gd_objective", "etf_objective", "abs_diff"});
  double worst = 0.0;
  for (const Fig2Row& r : rows) {
    csv.row({static_cast<double>(r.m), static_cast<double>(r.seed_index), r.gd_objective,
             r.etf_objective, r.abs_diff});
    worst = std::max(worst, r.abs_diff);
  }
  csv.close();
  CommandResult result;
  result.outputs = {out};
  result.results["max_abs_diff"] = worst;
  return result;
}

std::vector<double> pad_series(std::vector<double> series, int iters) {
  if (series.empty()) throw std::logic_error("empty series");
  series.resize(static_cast<std::size_t>(iters) + 1, series.back());
  return series;
}

Fig3Data fig3(const GdExperiment& exp, const std::vector<Eigen::Index>& ms) {
  if (ms.empty()) throw DomainError("fig3 needs at least one M");
  Fig3Data data{ms, {}};
  for (Eigen::Index m : ms) {
    const GdTrace trace = maximize(experiment_config(exp, m, 0));
    std::vector<double> series;
    for (const GdRecord& r : trace.records) series.push_back(r.etf_distance);
    data.distances.push_back(pad_series(std::move(series), exp.iters));
  }
  return data;
}

CommandResult cmd_fig3(const GdExperiment& exp, const std::vector<Eigen::Index>& ms,
                       const std::string& out) {
  const Fig3Data data = fig3(exp, ms);
  std::vector<std::string> header{"iteration"};
  for (Eigen::Index m : ms) header.push_back("distance_M" + std::to_string(m));
  CsvWriter csv(out, header);
  for (int it = 0; it <= exp.iters; ++it) {
    std::vector<double> row{static_cast<double>(it)};
    for (const auto& series : data.distances) row.push_back(series[static_cast<std::size_t>(it)]);
    csv.row(row);
  }
  csv.close();
  CommandResult result;
  result.outputs = {out};
  for (std::size_t i = 0; i < ms.size(); ++i) {
    result.results["final_distance_M" + std::to_string(ms[i])] = data.distances[i].back();
  }
  return result;
}

Fig4Data fig4(const GdExperiment& exp, const std::vector<Eigen::Index>& ms, int seeds) {
  if (ms.empty()) throw DomainError("fig4 needs at least one M");
  if (seeds < 1) throw DomainError("fig4 needs at least one seed");
  Fig4Data data{ms, {}};
  const std::size_t length = static_cast<std::size_t>(exp.iters) + 1;
  for (Eigen::Index m : ms) {
    SpreadSeries spread{std::vector<double>(length, std::numeric_limits<double>::infinity()),
                        std::vector<double>(length, 0.0),
                        std::vector<double>(length, -std::numeric_limits<double>::infinity())};
    for (int s = 0; s < seeds; ++s) {
      const GdTrace trace = maximize(experiment_config(exp, m, s));
      std::vector<double> series;
      for (const GdRecord& r : trace.records) series.push_back(r.objective);
      series = pad_series(std::move(series), exp.iters);
      for (std::size_t it = 0; it < length; ++it) {
        spread.min[it] = std::min(spread.min[it], series[it]);
        spread.max[it] = std::max(spread.max[it], series[it]);
        spread.avg[it] += series[it] / static_cast<double>(seeds);
      }
    }
    data.objectives.push_back(std::move(spread));
  }
  return data;
}

CommandResult cmd_fig4(const GdExperiment& exp, const std::vector<Eigen::Index>& ms, int seeds,
                       const std::string& out) {
  const Fig4Data data = fig4(exp, ms, seeds);
  std::vector<std::string> header{"iteration"};
  for (Eigen::Index m : ms) {
    const std::string suffix = "_M" + std::to_string(m);
    header.insert(header.end(), {"min" + suffix, "avg" + suffix, "max" + suffix});
  }
  CsvWriter csv(out, header);
  for (int it = 0; it <= exp.iters; ++it) {
    const auto i = static_cast<std::size_t>(it);
    std::vector<double> row{static_cast<double>(it)};
    for (const SpreadSeries& s : data.objectives) row.insert(row.end(), {s.min[i], s.avg[i], s.max[i]});
    csv.row(row);
  }
  csv.close();
  CommandResult result;
  result.outputs = {out};
  for (std::size_t k = 0; k < ms.size(); ++k) {
    const SpreadSeries& s = data.objectives[k];
    result.results["final_spread_M" + std::to_string(ms[k])] = s.max.back() - s.min.back();
  }
  return result;
}

// ---- concentration --------------------------------------------------------

CommandResult cmd_concentration(const RateConfig& cfg, const std::string& out) {
  const DeviationTable table = rate_experiment(cfg);
  CsvWriter csv(out, {"N", "d", "trials", "max_linear_sup", "max_quadratic_sup", "est_s_deviation",
                      "max_s_deviation", "err_bound"});
  for (const DeviationRow& r : table.rows) {
    for (double v : {r.max_linear_sup, r.max_quadratic_sup, r.est_s_deviation, r.err_bound_value}) {
      require_finite(v, "concentration statistic");
    }
    csv.row({static_cast<double>(r.n), static_cast<double>(r.dim), static_cast<double>(r.trials),
             r.max_linear_sup, r.max_quadratic_sup, r.est_s_deviation, r.max_s_deviation,
             r.err_bound_value});
  }
  csv.close();
  CommandResult result;
  result.outputs = {out};
  if (table.rows.size() >= 2) result.results["loglog_slope"] = loglog_slope(table);
  return result;
}

}  // namespace netcompress::cli
