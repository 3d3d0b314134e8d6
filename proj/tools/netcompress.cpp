// netcompress: compress two-layer ReLU networks and run the limit-objective
// experiments. Exit codes: 0 success, 2 invalid arguments, 3 numeric failure.

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/commands.hpp"
#include "cli/manifest.hpp"
#include "netcompress/errors.hpp"
#include "netcompress/network.hpp"

namespace nc = netcompress;
namespace cli = netcompress::cli;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNumeric = 3;

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  std::string config;
};

void add_common(CLI::App* sub, Common& common, const std::string& default_out) {
  common.out = default_out;
  sub->add_option("--seed", common.seed, "Random seed");
  sub->add_option("--out", common.out, "Output path");
  sub->add_option("--config", common.config, "JSON file mirroring the flags; flags win");
}

std::string json_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

// Fills every option not given on the command line from the config document.
void apply_config(CLI::App* sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw nc::ParseError(path, "cannot open config file");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw nc::ParseError(path, e.what());
  }
  if (!doc.is_object()) throw nc::ParseError(path, "config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "config") continue;
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) throw nc::ParseError(path, "unknown option '" + key + "'");
    if (opt->count() > 0) continue;
    std::vector<std::string> tokens;
    if (value.is_array()) {
      for (const auto& item : value) tokens.push_back(json_scalar(item));
    } else if (opt->get_type_size() == 0) {
      if (!value.is_boolean()) throw nc::ParseError(path, key + ": expected a boolean");
      if (!value.get<bool>()) continue;
      tokens.push_back("true");
    } else {
      tokens.push_back(json_scalar(value));
    }
    opt->add_result(tokens);
    opt->run_callback();
  }
}

nlohmann::ordered_json collect_parameters(CLI::App* sub) {
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config") continue;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      if (results.size() == 1) {
        params[name] = results.front();
      } else {
        params[name] = results;
      }
    } else {
      params[name] = opt->get_default_str();
    }
  }
  return params;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compress two-layer ReLU networks under Gaussian-input L2 loss"};
  app.set_version_flag("--version", NETCOMPRESS_VERSION);
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  // kernel-table
  Common kt_common;
  std::vector<double> kt_alphas;
  int kt_points = 201;
  auto* kt = app.add_subcommand("kernel-table", "Tabulate g, g' and truncated power series");
  add_common(kt, kt_common, "kernel_table.csv");
  kt->add_option("--alphas", kt_alphas, "Explicit alpha values in [-1, 1]");
  kt->add_option("--grid-points", kt_points, "Uniform grid size on [-1, 1] when --alphas is absent");

  // sample
  Common sm_common;
  nc::SamplerConfig sm_cfg;
  std::string sm_weight_law = "uniform-sphere";
  std::string sm_coeff_law = "constant:1";
  sm_cfg.n = 1000;
  sm_cfg.dim = 100;
  auto* sm = app.add_subcommand("sample", "Sample a target network");
  add_common(sm, sm_common, "target.json");
  sm->add_option("--n", sm_cfg.n, "Number of target neurons N");
  sm->add_option("--dim", sm_cfg.dim, "Input dimension d");
  sm->add_option("--weight-law", sm_weight_law, "uniform-sphere | normalized-gaussian | scaled-rademacher");
  sm->add_option("--coeff-law", sm_coeff_law, "constant:MU | uniform:LO:HI | two-point:P:X1:X2");

  // compress
  Common cp_common;
  cli::CompressOptions cp_opts;
  std::string cp_target;
  std::string cp_method = "etf-limit";
  std::string cp_weight_law = "uniform-sphere";
  std::string cp_coeff_law = "uniform:0.5:1.5";
  double cp_mu = 0.0;
  cp_opts.sampler.n = 1000;
  cp_opts.sampler.dim = 100;
  auto* cp = app.add_subcommand("compress", "Compress a target network to M neurons");
  add_common(cp, cp_common, "compressed.json");
  cp->add_option("--target", cp_target, "Target network JSON (otherwise sampled)");
  cp->add_option("--n", cp_opts.sampler.n, "Sampled target: N");
  cp->add_option("--dim", cp_opts.sampler.dim, "Sampled target: d");
  cp->add_option("--weight-law", cp_weight_law, "Sampled target: weight law");
  cp->add_option("--coeff-law", cp_coeff_law, "Sampled target: coefficient law");
  auto* cp_mu_opt = cp->add_option("--mu-a", cp_mu, "Mean of the target coefficient law");
  cp->add_option("--m", cp_opts.m, "Compressed width M");
  cp->add_option("--method", cp_method, "exact-b | limit-b | etf-limit");
  cp->add_option("--weights", cp_opts.weights, "auto | etf | subset | random | <network.json>");
  cp->add_flag("--rotate", cp_opts.rotate, "Randomly rotate ETF weights");
  cp->add_option("--samples", cp_opts.mc_samples, "Monte Carlo samples for the loss check");
  cp->add_option("--sigma-w", cp_opts.sigma_w, "Sub-Gaussian constant used in the gap bound");
  cp->add_option("--t", cp_opts.t, "Probability parameter t of the gap bound");
  cp->add_option("--C", cp_opts.constant, "Numerical constant C of the gap bound");

  // fig2 / fig3 / fig4
  Common f2_common, f3_common, f4_common;
  cli::GdExperiment f2_exp, f3_exp, f4_exp;
  Eigen::Index f2_min = 2, f2_max = 30;
  int f2_seeds = 1;
  std::vector<Eigen::Index> f3_ms{5, 10, 15, 30};
  std::vector<Eigen::Index> f4_ms{2, 4, 8};
  int f4_seeds = 10;
  auto add_gd = [](CLI::App* sub, cli::GdExperiment& exp) {
    sub->add_option("--iters", exp.iters, "Gradient-ascent iterations");
    sub->add_option("--step", exp.step, "Initial step size");
    sub->add_option("--dim", exp.dim, "Input dimension (0: d = M + 5)");
  };
  auto* f2 = app.add_subcommand("fig2", "GD limit objective versus the ETF value, per M");
  add_common(f2, f2_common, "fig2.csv");
  add_gd(f2, f2_exp);
  f2->add_option("--m-min", f2_min, "Smallest M");
  f2->add_option("--m-max", f2_max, "Largest M");
  f2->add_option("--seeds,--trials", f2_seeds, "Random initializations per M");
  auto* f3 = app.add_subcommand("fig3", "Gram distance between GD iterates and the ETF");
  add_common(f3, f3_common, "fig3.csv");
  add_gd(f3, f3_exp);
  f3->add_option("--m", f3_ms, "Values of M");
  auto* f4 = app.add_subcommand("fig4", "Objective spread across random initializations");
  add_common(f4, f4_common, "fig4.csv");
  add_gd(f4, f4_exp);
  f4->add_option("--m", f4_ms, "Values of M");
  f4->add_option("--seeds,--trials", f4_seeds, "Random initializations per M");

  // concentration
  Common cc_common;
  nc::RateConfig cc_cfg;
  cc_cfg.ns = {100, 1000, 10000, 100000};
  std::string cc_weight_law = "uniform-sphere";
  std::string cc_coeff_law = "uniform:0.5:1.5";
  auto* cc = app.add_subcommand("concentration", "Deviation of s from its mean-field value versus N");
  add_common(cc, cc_common, "concentration.csv");
  cc->add_option("--n", cc_cfg.ns, "Target widths N (increasing)");
  cc->add_option("--dim", cc_cfg.dim, "Input dimension d");
  cc->add_option("--trials", cc_cfg.trials, "Independent targets per N");
  cc->add_option("--weight-law", cc_weight_law, "Weight law");
  cc->add_option("--coeff-law", cc_coeff_law, "Coefficient law");
  cc->add_option("--probes", cc_cfg.search.probes, "Random probe directions per target");
  cc->add_option("--refine-iters", cc_cfg.search.refine_iters, "Ascent iterations per refined start");
  cc->add_option("--sigma-w", cc_cfg.sigma_w, "Effective sub-Gaussian constant for err_bound");
  cc->add_option("--t", cc_cfg.t, "Probability parameter t for err_bound");
  cc->add_option("--C", cc_cfg.constant, "Numerical constant C for err_bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::vector<std::pair<CLI::App*, Common*>> commons{
      {kt, &kt_common}, {sm, &sm_common}, {cp, &cp_common}, {f2, &f2_common},
      {f3, &f3_common}, {f4, &f4_common}, {cc, &cc_common}};
  Common* common = nullptr;
  for (const auto& [app_ptr, c] : commons) {
    if (app_ptr == sub) common = c;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    if (!common->config.empty()) apply_config(sub, common->config);
    const std::string& out = common->out;
    cli::CommandResult result;

    if (sub == kt) {
      const std::vector<double> alphas = kt_alphas.empty() ? cli::uniform_grid(kt_points) : kt_alphas;
      result = cli::cmd_kernel_table(alphas, out);
    } else if (sub == sm) {
      sm_cfg.seed = sm_common.seed;
      sm_cfg.weight_law = nc::parse_weight_law(sm_weight_law);
      sm_cfg.coeff_law = nc::parse_coeff_law(sm_coeff_law);
      nc::save_network(out, nc::serialize(nc::sample_target(sm_cfg)));
      result.outputs = {out};
    } else if (sub == cp) {
      cp_opts.seed = cp_common.seed;
      cp_opts.method = cli::parse_method(cp_method);
      if (!cp_target.empty()) cp_opts.target_path = cp_target;
      cp_opts.sampler.seed = cp_common.seed;
      cp_opts.sampler.weight_law = nc::parse_weight_law(cp_weight_law);
      cp_opts.sampler.coeff_law = nc::parse_coeff_law(cp_coeff_law);
      if (cp_mu_opt->count() > 0) cp_opts.mu_a = cp_mu;
      result = cli::cmd_compress(cp_opts, out);
      std::cout << result.results.dump(2) << '\n';
    } else if (sub == f2) {
      f2_exp.seed = f2_common.seed;
      result = cli::cmd_fig2(f2_exp, f2_min, f2_max, f2_seeds, out);
    } else if (sub == f3) {
      f3_exp.seed = f3_common.seed;
      result = cli::cmd_fig3(f3_exp, f3_ms, out);
    } else if (sub == f4) {
      f4_exp.seed = f4_common.seed;
      result = cli::cmd_fig4(f4_exp, f4_ms, f4_seeds, out);
    } else if (sub == cc) {
      cc_cfg.seed = cc_common.seed;
      cc_cfg.weight_law = nc::parse_weight_law(cc_weight_law);
      cc_cfg.coeff_law = nc::parse_coeff_law(cc_coeff_law);
      result = cli::cmd_concentration(cc_cfg, out);
    }

    cli::RunManifest manifest;
    manifest.command = sub->get_name();
    manifest.parameters = collect_parameters(sub);
    manifest.seed = common->seed;
    manifest.version = NETCOMPRESS_VERSION;
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    manifest.outputs = result.outputs;
    manifest.results = result.results;
    const std::string manifest_file = cli::write_manifest(out, manifest);
    for (const auto& path : result.outputs) std::cerr << "wrote " << path << '\n';
    std::cerr << "wrote " << manifest_file << '\n';
    return 0;
  } catch (const nc::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const CLI::ParseError& e) {
    std::cerr << "invalid config value: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}
