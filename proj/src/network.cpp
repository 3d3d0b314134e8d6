#include "netcompress/network.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "netcompress/errors.hpp"
#include "netcompress/rng.hpp"

namespace netcompress {

template <typename Tag>
ReluNetwork<Tag>::ReluNetwork(WeightSet weights, Eigen::VectorXd coeffs,
                              std::optional<CoeffStats> stats)
    : weights_(std::move(weights)), coeffs_(std::move(coeffs)), stats_(stats) {
  if (coeffs_.size() != weights_.size()) {
    throw DimensionError("network has " + std::to_string(weights_.size()) + " weights but " +
                         std::to_string(coeffs_.size()) + " coefficients");
  }
  if (!coeffs_.allFinite()) throw InvariantError("non-finite coefficient");
  if (stats_) {
    const double largest = coeffs_.cwiseAbs().maxCoeff();
    if (largest > stats_->bound * (1.0 + 1e-12)) {
      throw InvariantError("coefficient magnitude " + std::to_string(largest) +
                           " exceeds declared bound " + std::to_string(stats_->bound));
    }
  }
}

template <typename Tag>
double ReluNetwork<Tag>::forward(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) {
    throw DimensionError("forward: input has dimension " + std::to_string(x.size()) +
                         ", network expects " + std::to_string(dim()));
  }
  const Eigen::VectorXd pre = weights_.matrix() * x;
  return pre.cwiseMax(0.0).dot(coeffs_) / static_cast<double>(size());
}

template <typename Tag>
Eigen::VectorXd ReluNetwork<Tag>::forward_batch(const Eigen::MatrixXd& inputs) const {
  if (inputs.cols() != dim()) throw DimensionError("forward_batch: input dimension mismatch");
  const Eigen::MatrixXd pre = inputs * weights_.matrix().transpose();
  return pre.cwiseMax(0.0) * coeffs_ / static_cast<double>(size());
}

template class ReluNetwork<TargetTag>;
template class ReluNetwork<CompressedTag>;

// ---- sampling -------------------------------------------------------------

CoeffStats coeff_law_stats(const CoeffLaw& law) {
  CoeffStats stats = std::visit(
      [](const auto& l) -> CoeffStats {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, ConstantCoeff>) {
          return {l.value, std::abs(l.value)};
        } else if constexpr (std::is_same_v<L, UniformCoeff>) {
          if (!(l.lo < l.hi)) throw DomainError("uniform coefficient law needs lo < hi");
          return {0.5 * (l.lo + l.hi), std::max(std::abs(l.lo), std::abs(l.hi))};
        } else {
          if (!(l.p >= 0.0 && l.p <= 1.0)) throw DomainError("two-point law needs p in [0, 1]");
          return {l.p * l.x1 + (1.0 - l.p) * l.x2, std::max(std::abs(l.x1), std::abs(l.x2))};
        }
      },
      law);
  if (!std::isfinite(stats.mean) || !std::isfinite(stats.bound)) {
    throw DomainError("coefficient law has non-finite parameters");
  }
  if (stats.mean == 0.0) throw DomainError("coefficient law must have nonzero mean");
  return stats;
}

WeightSet sample_weights(Eigen::Index count, Eigen::Index dim, WeightLaw law, std::uint64_t seed) {
  if (count < 1 || dim < 1) throw DomainError("sample_weights: count and dim must be positive");
  Rng rng(seed);
  Eigen::MatrixXd rows(count, dim);
  switch (law) {
    case WeightLaw::UniformSphere:
    case WeightLaw::NormalizedGaussian: {
      std::normal_distribution<double> normal;
      for (Eigen::Index i = 0; i < count; ++i) {
        double norm = 0.0;
        do {
          for (Eigen::Index j = 0; j < dim; ++j) rows(i, j) = normal(rng);
          norm = rows.row(i).norm();
        } while (norm == 0.0);
        rows.row(i) /= norm;
      }
      break;
    }
    case WeightLaw::ScaledRademacher: {
      const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
      std::bernoulli_distribution coin;
      for (Eigen::Index i = 0; i < count; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) rows(i, j) = coin(rng) ? scale : -scale;
      }
      break;
    }
  }
  return WeightSet(std::move(rows));
}

TargetNetwork sample_target(const SamplerConfig& cfg) {
  const CoeffStats stats = coeff_law_stats(cfg.coeff_law);
  if (cfg.n < 1 || cfg.dim < 1) throw DomainError("sampler needs N >= 1 and d >= 1");
  WeightSet weights = sample_weights(cfg.n, cfg.dim, cfg.weight_law, derive_seed(cfg.seed, 0));

  Rng rng(derive_seed(cfg.seed, 1));
  Eigen::VectorXd coeffs(cfg.n);
  std::visit(
      [&](const auto& l) {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, ConstantCoeff>) {
          coeffs.setConstant(l.value);
        } else if constexpr (std::is_same_v<L, UniformCoeff>) {
          std::uniform_real_distribution<double> u(l.lo, l.hi);
          for (Eigen::Index i = 0; i < cfg.n; ++i) coeffs(i) = u(rng);
        } else {
          std::bernoulli_distribution pick(l.p);
          for (Eigen::Index i = 0; i < cfg.n; ++i) coeffs(i) = pick(rng) ? l.x1 : l.x2;
        }
      },
      cfg.coeff_law);
  return TargetNetwork(std::move(weights), std::move(coeffs), stats);
}

WeightLaw parse_weight_law(const std::string& name) {
  if (name == "uniform-sphere") return WeightLaw::UniformSphere;
  if (name == "normalized-gaussian") return WeightLaw::NormalizedGaussian;
  if (name == "scaled-rademacher") return WeightLaw::ScaledRademacher;
  throw DomainError("unknown weight law '" + name + "'");
}

std::string to_string(WeightLaw law) {
  switch (law) {
    case WeightLaw::UniformSphere: return "uniform-sphere";
    case WeightLaw::NormalizedGaussian: return "normalized-gaussian";
    case WeightLaw::ScaledRademacher: return "scaled-rademacher";
  }
  return "?";
}

namespace {

std::vector<double> split_numbers(const std::string& text, const std::string& law_text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string field;
  while (std::getline(in, field, ':')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(field, &used));
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw DomainError("bad number '" + field + "' in coefficient law '" + law_text + "'");
    }
  }
  return out;
}

std::string shortest(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

}  // namespace

CoeffLaw parse_coeff_law(const std::string& law_text) {
  const auto colon = law_text.find(':');
  const std::string kind = law_text.substr(0, colon);
  const std::vector<double> args =
      colon == std::string::npos ? std::vector<double>{} : split_numbers(law_text.substr(colon + 1), law_text);
  CoeffLaw law;
  if (kind == "constant" && args.size() == 1) {
    law = ConstantCoeff{args[0]};
  } else if (kind == "uniform" && args.size() == 2) {
    law = UniformCoeff{args[0], args[1]};
  } else if (kind == "two-point" && args.size() == 3) {
    law = TwoPointCoeff{args[0], args[1], args[2]};
  } else {
    throw DomainError("coefficient law '" + law_text +
                      "' is not constant:MU, uniform:LO:HI or two-point:P:X1:X2");
  }
  coeff_law_stats(law);
  return law;
}

std::string to_string(const CoeffLaw& law) {
  return std::visit(
      [](const auto& l) -> std::string {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, ConstantCoeff>) {
          return "constant:" + shortest(l.value);
        } else if constexpr (std::is_same_v<L, UniformCoeff>) {
          return "uniform:" + shortest(l.lo) + ":" + shortest(l.hi);
        } else {
          return "two-point:" + shortest(l.p) + ":" + shortest(l.x1) + ":" + shortest(l.x2);
        }
      },
      law);
}

// ---- serialization --------------------------------------------------------

template <typename Tag>
std::string serialize(const ReluNetwork<Tag>& net) {
  nlohmann::ordered_json doc;
  doc["d"] = net.dim();
  doc["n"] = net.size();
  nlohmann::json weights = nlohmann::json::array();
  const Eigen::MatrixXd& w = net.weights().matrix();
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    weights.push_back(std::vector<double>(w.row(i).begin(), w.row(i).end()));
  }
  doc["weights"] = std::move(weights);
  doc["coeffs"] = std::vector<double>(net.coeffs().begin(), net.coeffs().end());
  if (const auto& stats = net.coeff_stats()) {
    doc["mu_a"] = stats->mean;
    doc["coeff_bound"] = stats->bound;
  }
  return doc.dump(1) + "\n";
}

namespace {

Eigen::Index read_count(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(key, "missing field");
  const auto& v = doc.at(key);
  if (!v.is_number_integer()) throw ParseError(key, "expected an integer");
  const auto value = v.get<std::int64_t>();
  if (value < 1) throw ParseError(key, "must be positive");
  return static_cast<Eigen::Index>(value);
}

double read_number(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where, "expected a number");
  return v.get<double>();
}

}  // namespace

template <typename Tag>
ReluNetwork<Tag> deserialize(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("document", e.what());
  }
  if (!doc.is_object()) throw ParseError("document", "expected a JSON object");
  const Eigen::Index d = read_count(doc, "d");
  const Eigen::Index n = read_count(doc, "n");

  if (!doc.contains("weights") || !doc["weights"].is_array()) {
    throw ParseError("weights", "missing or not an array");
  }
  const auto& weights = doc["weights"];
  if (static_cast<Eigen::Index>(weights.size()) != n) {
    throw DimensionError("weights: expected " + std::to_string(n) + " vectors, found " +
                         std::to_string(weights.size()));
  }
  Eigen::MatrixXd rows(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string where = "weights[" + std::to_string(i) + "]";
    const auto& w = weights[static_cast<std::size_t>(i)];
    if (!w.is_array()) throw ParseError(where, "expected an array");
    if (static_cast<Eigen::Index>(w.size()) != d) {
      throw DimensionError(where + ": dimension " + std::to_string(w.size()) + ", expected " +
                           std::to_string(d));
    }
    for (Eigen::Index j = 0; j < d; ++j) {
      rows(i, j) = read_number(w[static_cast<std::size_t>(j)], where + "[" + std::to_string(j) + "]");
    }
  }

  if (!doc.contains("coeffs") || !doc["coeffs"].is_array()) {
    throw ParseError("coeffs", "missing or not an array");
  }
  const auto& coeffs_json = doc["coeffs"];
  if (static_cast<Eigen::Index>(coeffs_json.size()) != n) {
    throw DimensionError("coeffs: expected " + std::to_string(n) + " values, found " +
                         std::to_string(coeffs_json.size()));
  }
  Eigen::VectorXd coeffs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    coeffs(i) = read_number(coeffs_json[static_cast<std::size_t>(i)], "coeffs[" + std::to_string(i) + "]");
  }

  std::optional<CoeffStats> stats;
  if (doc.contains("mu_a")) {
    const double mean = read_number(doc["mu_a"], "mu_a");
    const double bound = doc.contains("coeff_bound") ? read_number(doc["coeff_bound"], "coeff_bound")
                                                     : coeffs.cwiseAbs().maxCoeff();
    stats = CoeffStats{mean, bound};
  }
  return ReluNetwork<Tag>(WeightSet(std::move(rows)), std::move(coeffs), stats);
}

template std::string serialize(const ReluNetwork<TargetTag>&);
template std::string serialize(const ReluNetwork<CompressedTag>&);
template ReluNetwork<TargetTag> deserialize<TargetTag>(const std::string&);
template ReluNetwork<CompressedTag> deserialize<CompressedTag>(const std::string&);

TargetNetwork load_target(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return deserialize<TargetTag>(buffer.str());
}

void save_network(const std::string& path, const std::string& document) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << document;
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace netcompress
