#include "cli/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli/csv.hpp"
#include "cli/manifest.hpp"
#include "netcompress/errors.hpp"
#include "netcompress/etf.hpp"
#include "netcompress/kernel.hpp"

namespace nc = netcompress;
namespace cli = netcompress::cli;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("netcompress_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(NETCOMPRESS_TOOL) + " " + args + " > " + path("stdout.txt") +
                            " 2> " + path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path dir_;
};

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  return nlohmann::json::parse(in);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Csv, FormatRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.162394282848903, 0.0}) {
    EXPECT_EQ(std::stod(cli::format_double(x)), x);
  }
  EXPECT_EQ(cli::format_double(0.5), "0.5");
}

TEST(UniformGrid, EndpointsAndSpacing) {
  const auto grid = cli::uniform_grid(201);
  ASSERT_EQ(grid.size(), 201u);
  EXPECT_EQ(grid.front(), -1.0);
  EXPECT_EQ(grid.back(), 1.0);
  EXPECT_NEAR(grid[100], 0.0, 1e-15);
  EXPECT_THROW(cli::uniform_grid(1), nc::DomainError);
}

TEST(KernelTable, Rows) {
  const auto rows = cli::kernel_table({-1.0, 0.0, 1.0});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(rows[0].g, 0.0, 1e-16);
  EXPECT_NEAR(rows[1].g, 1.0 / (2.0 * std::numbers::pi), 1e-16);
  EXPECT_NEAR(rows[2].g, 0.5, 1e-16);
  EXPECT_NEAR(rows[1].g_prime, 0.25, 1e-16);
}

TEST(KernelTable, DefaultGridMonotoneAndTaylorAccurate) {
  const auto rows = cli::kernel_table(cli::uniform_grid(201));
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GT(rows[i].g, rows[i - 1].g);
  for (const auto& r : rows) {
    if (std::abs(r.alpha) <= 0.9) EXPECT_LT(std::abs(r.taylor_k50 - r.g), 1e-6) << r.alpha;
  }
}

TEST_F(CliTest, KernelTableCommandWritesCsvAndManifest) {
  ASSERT_EQ(run("kernel-table --alphas -1 0 1 --out " + path("k.csv")), 0) << slurp(path("stderr.txt"));
  const auto table = cli::read_csv(path("k.csv"));
  EXPECT_EQ(table.header, (std::vector<std::string>{"alpha", "g", "g_prime", "taylor_K10", "taylor_K50"}));
  ASSERT_EQ(table.rows.size(), 3u);
  EXPECT_EQ(table.rows[2][table.column("g")], 0.5);
  const auto manifest = read_json(cli::manifest_path(path("k.csv")));
  EXPECT_EQ(manifest["command"], "kernel-table");
  EXPECT_TRUE(manifest.contains("version"));
  EXPECT_TRUE(manifest.contains("wall_seconds"));
  EXPECT_EQ(manifest["outputs"].back(), cli::manifest_path(path("k.csv")));
}

TEST(Compress, ExactBOnFullSubsetIsLossless) {
  cli::CompressOptions opts;
  opts.sampler = {12, 6, nc::WeightLaw::UniformSphere, nc::UniformCoeff{0.5, 1.5}, 4};
  opts.m = 12;
  opts.method = cli::CompressMethod::ExactB;
  opts.weights = "subset";
  opts.mc_samples = 1000;
  const auto outcome = cli::compress(opts);
  EXPECT_NEAR(outcome.loss.loss, 0.0, 1e-10);
  EXPECT_NEAR(outcome.exact_b_loss, 0.0, 1e-10);
}

TEST(Compress, EtfLimitAgreesWithMonteCarlo) {
  cli::CompressOptions opts;
  opts.sampler = {200, 20, nc::WeightLaw::UniformSphere, nc::UniformCoeff{0.5, 1.5}, 9};
  opts.m = 5;
  opts.method = cli::CompressMethod::EtfLimit;
  opts.mc_samples = 200000;
  opts.seed = 2;
  const auto outcome = cli::compress(opts);
  EXPECT_TRUE(nc::is_etf(outcome.compressed.weights(), 1e-12));
  EXPECT_LT(std::abs(outcome.mc.estimate - outcome.loss.loss), 3.0 * outcome.mc.std_error);
  ASSERT_TRUE(outcome.limit_b_loss.has_value());
  EXPECT_LE(outcome.exact_b_loss, *outcome.limit_b_loss + 1e-12);
  ASSERT_TRUE(outcome.gap_bound.has_value());
  EXPECT_NEAR(outcome.gap_bound->value,
              outcome.compressed.coeffs().cwiseAbs().maxCoeff() * 5 * outcome.err->value, 1e-12);
}

TEST(Compress, MethodNames) {
  for (auto m : {cli::CompressMethod::ExactB, cli::CompressMethod::LimitB, cli::CompressMethod::EtfLimit}) {
    EXPECT_EQ(cli::parse_method(cli::to_string(m)), m);
  }
  EXPECT_THROW(cli::parse_method("best"), nc::DomainError);
}

TEST_F(CliTest, CompressCommandRoundTrip) {
  ASSERT_EQ(run("sample --n 50 --dim 8 --coeff-law uniform:0.5:1.5 --seed 3 --out " + path("t.json")), 0)
      << slurp(path("stderr.txt"));
  ASSERT_EQ(run("compress --target " + path("t.json") + " --m 4 --method exact-b --weights random " +
                "--samples 5000 --out " + path("c.json")),
            0)
      << slurp(path("stderr.txt"));
  const auto compressed = nc::deserialize<nc::CompressedTag>(slurp(path("c.json")));
  EXPECT_EQ(compressed.size(), 4);
  const auto report = read_json(path("c.json") + ".report.json");
  const auto target = nc::load_target(path("t.json"));
  EXPECT_NEAR(report["population_loss"].get<double>(),
              nc::population_loss(target, compressed).loss, 1e-12);
  EXPECT_TRUE(fs::exists(cli::manifest_path(path("c.json"))));
}

TEST(Fig2, GdMatchesEtf) {
  cli::GdExperiment exp;
  const auto rows = cli::fig2(exp, 5, 12, 1);
  ASSERT_EQ(rows.size(), 8u);
  for (const auto& r : rows) {
    EXPECT_LT(r.abs_diff, 1e-8) << "M = " << r.m;
    EXPECT_EQ(r.etf_objective, nc::etf_objective(r.m));
  }
}

TEST(Fig2, DimensionDoesNotMatter) {
  cli::GdExperiment narrow, wide;
  narrow.dim = 9;
  wide.dim = 40;
  const auto a = cli::fig2(narrow, 6, 6, 1);
  const auto b = cli::fig2(wide, 6, 6, 1);
  EXPECT_NEAR(a[0].gd_objective, b[0].gd_objective, 1e-9);
}

TEST(Fig3, SeriesShapeAndConvergence) {
  cli::GdExperiment exp;
  exp.iters = 300;
  const auto data = cli::fig3(exp, {5, 10});
  ASSERT_EQ(data.distances.size(), 2u);
  for (const auto& series : data.distances) {
    ASSERT_EQ(series.size(), 301u);
    EXPECT_LT(series.back(), 1e-4);
    EXPECT_LT(series.back(), series.front());
  }
}

TEST(Fig4, SpreadCollapses) {
  cli::GdExperiment exp;
  const auto data = cli::fig4(exp, {2, 4, 8}, 10);
  for (const auto& s : data.objectives) {
    ASSERT_EQ(s.min.size(), 1001u);
    EXPECT_LT(s.max.back() - s.min.back(), 1e-8);
    for (std::size_t k = 0; k < s.min.size(); ++k) {
      EXPECT_LE(s.min[k], s.avg[k] + 1e-15);
      EXPECT_LE(s.avg[k], s.max[k] + 1e-15);
    }
  }
}

TEST(PadSeries, ExtendsWithLastValue) {
  EXPECT_EQ(cli::pad_series({3.0, 2.0}, 4), (std::vector<double>{3.0, 2.0, 2.0, 2.0, 2.0}));
}

TEST_F(CliTest, FiguresAreReproducible) {
  ASSERT_EQ(run("fig2 --m-min 5 --m-max 7 --seeds 2 --seed 4 --out " + path("a.csv")), 0);
  ASSERT_EQ(run("fig2 --m-min 5 --m-max 7 --seeds 2 --seed 4 --out " + path("b.csv")), 0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  const auto table = cli::read_csv(path("a.csv"));
  EXPECT_EQ(table.rows.size(), 6u);
  ASSERT_EQ(run("fig3 --m 5 --iters 50 --out " + path("f3.csv")), 0);
  EXPECT_EQ(cli::read_csv(path("f3.csv")).header, (std::vector<std::string>{"iteration", "distance_M5"}));
  ASSERT_EQ(run("fig4 --m 2 3 --seeds 3 --iters 20 --out " + path("f4.csv")), 0);
  EXPECT_EQ(cli::read_csv(path("f4.csv")).header.size(), 7u);
}

TEST_F(CliTest, ConcentrationSmoke) {
  ASSERT_EQ(run("concentration --n 100 1000 --dim 20 --trials 2 --probes 8 --out " + path("c.csv")), 0)
      << slurp(path("stderr.txt"));
  const auto table = cli::read_csv(path("c.csv"));
  ASSERT_EQ(table.rows.size(), 2u);
  EXPECT_EQ(table.rows[1][table.column("N")], 1000.0);
  const auto manifest = read_json(cli::manifest_path(path("c.csv")));
  EXPECT_TRUE(manifest["results"]["loglog_slope"].is_number());
}

TEST_F(CliTest, ConfigFileFillsMissingFlags) {
  {
    std::ofstream cfg(path("cfg.json"));
    cfg << R"({"m-min": 5, "m-max": 6, "seeds": 1, "iters": 10})";
  }
  ASSERT_EQ(run("fig2 --config " + path("cfg.json") + " --m-max 5 --out " + path("f.csv")), 0)
      << slurp(path("stderr.txt"));
  const auto table = cli::read_csv(path("f.csv"));
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_EQ(table.rows[0][table.column("M")], 5.0);
  const auto manifest = read_json(cli::manifest_path(path("f.csv")));
  EXPECT_EQ(manifest["parameters"]["iters"], "10");
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run("fig2 --m-min nope"), 2);
  EXPECT_EQ(run("compress --method best --out " + path("x.json")), 2);
  EXPECT_NE(slurp(path("stderr.txt")).find("best"), std::string::npos);
  EXPECT_EQ(run("compress --target " + path("missing.json") + " --out " + path("x.json")), 2);

  // Coefficients this large overflow the target energy.
  {
    std::ofstream doc(path("huge.json"));
    doc << R"({"d": 2, "n": 2, "weights": [[1, 0], [0, 1]], "coeffs": [1e200, 1e200]})";
  }
  EXPECT_EQ(run("compress --target " + path("huge.json") + " --mu-a 1 --m 2 --method exact-b " +
                "--weights random --samples 100 --out " + path("y.json")),
            3)
      << slurp(path("stderr.txt"));
}
