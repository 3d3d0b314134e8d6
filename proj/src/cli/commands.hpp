#pragma once

// Experiment drivers behind the `netcompress` command-line tool. Each cmd_*
// function writes its CSV/JSON outputs and returns the produced file list and
// summary values that go into the run manifest.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "netcompress/compression.hpp"
#include "netcompress/concentration.hpp"
#include "netcompress/network.hpp"
#include "netcompress/optimizer.hpp"

namespace netcompress::cli {

struct CommandResult {
  std::vector<std::string> outputs;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
};

// ---- kernel-table ---------------------------------------------------------

/// `points` equally spaced values from -1 to 1 inclusive (points >= 2).
std::vector<double> uniform_grid(int points);

struct KernelRow {
  double alpha;
  double g;
  double g_prime;
  double taylor_k10;
  double taylor_k50;
};

std::vector<KernelRow> kernel_table(const std::vector<double>& alphas);
CommandResult cmd_kernel_table(const std::vector<double>& alphas, const std::string& out);

// ---- compress -------------------------------------------------------------

enum class CompressMethod { ExactB, LimitB, EtfLimit };
CompressMethod parse_method(const std::string& name);
std::string to_string(CompressMethod method);

struct CompressOptions {
  std::optional<std::string> target_path;  // otherwise sample with `sampler`
  SamplerConfig sampler;
  std::optional<double> mu_a;  // overrides the target's coefficient statistics
  Eigen::Index m = 10;
  CompressMethod method = CompressMethod::EtfLimit;
  // Compressed weights for exact-b / limit-b: "auto", "etf", "subset"
  // (first M target weights), "random", or a path to a network document.
  std::string weights = "auto";
  bool rotate = false;  // random orthogonal rotation of ETF weights
  std::uint64_t seed = 0;
  Eigen::Index mc_samples = 100000;
  double sigma_w = 2.0;
  double t = 4.0;
  double constant = 1.0;
};

struct CompressOutcome {
  TargetNetwork target;
  CompressedNetwork compressed;
  LossReport loss;
  MonteCarloEstimate mc;
  double exact_b_loss;                  // reduced loss on the same weights
  std::optional<double> limit_b_loss;   // population loss at b~ on the same weights
  std::optional<double> limit_loss;     // mean-field loss at the b actually used
  std::optional<Bound> err;
  std::optional<Bound> gap_bound;       // B M err with B = max |b~|
};

CompressOutcome compress(const CompressOptions& opts);
/// Writes the compressed network to `out` and a loss report to `out`.report.json.
CommandResult cmd_compress(const CompressOptions& opts, const std::string& out);

// ---- gradient-ascent experiments -------------------------------------------

struct GdExperiment {
  int iters = 1000;
  double step = 0.1;
  Eigen::Index dim = 0;  // 0: d = M + 5
  std::uint64_t seed = 0;
};

Eigen::Index experiment_dim(const GdExperiment& exp, Eigen::Index m);
GdConfig experiment_config(const GdExperiment& exp, Eigen::Index m, int seed_index);

struct Fig2Row {
  Eigen::Index m;
  int seed_index;
  double gd_objective;
  double etf_objective;
  double abs_diff;
};

std::vector<Fig2Row> fig2(const GdExperiment& exp, Eigen::Index m_min, Eigen::Index m_max, int seeds);
CommandResult cmd_fig2(const GdExperiment& exp, Eigen::Index m_min, Eigen::Index m_max, int seeds,
                       const std::string& out);

/// Per-iteration series of length iters + 1. Runs that stop early are
/// extended with their last value.
std::vector<double> pad_series(std::vector<double> series, int iters);

struct Fig3Data {
  std::vector<Eigen::Index> ms;
  std::vector<std::vector<double>> distances;  // one series per M
};

Fig3Data fig3(const GdExperiment& exp, const std::vector<Eigen::Index>& ms);
CommandResult cmd_fig3(const GdExperiment& exp, const std::vector<Eigen::Index>& ms,
                       const std::string& out);

struct SpreadSeries {
  std::vector<double> min, avg, max;
};

struct Fig4Data {
  std::vector<Eigen::Index> ms;
  std::vector<SpreadSeries> objectives;  // one per M
};

Fig4Data fig4(const GdExperiment& exp, const std::vector<Eigen::Index>& ms, int seeds);
CommandResult cmd_fig4(const GdExperiment& exp, const std::vector<Eigen::Index>& ms, int seeds,
                       const std::string& out);

// ---- concentration --------------------------------------------------------

CommandResult cmd_concentration(const RateConfig& cfg, const std::string& out);

}  // namespace netcompress::cli
