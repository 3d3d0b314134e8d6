#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "netcompress/weights.hpp"

namespace netcompress {

/// Statistics of the law the target coefficients were drawn from. Sampled
/// targets carry these; deserialized targets only if the document had them.
struct CoeffStats {
  double mean;   // mu_a
  double bound;  // A, with |a_n| <= A
};

/// Two-layer ReLU network x -> (1/n) sum_i c_i relu(<w_i, x>). TargetNetwork
/// and CompressedNetwork are distinct types over this layout.
template <typename Tag>
class ReluNetwork {
 public:
  ReluNetwork(WeightSet weights, Eigen::VectorXd coeffs,
              std::optional<CoeffStats> stats = std::nullopt);

  const WeightSet& weights() const noexcept { return weights_; }
  const Eigen::VectorXd& coeffs() const noexcept { return coeffs_; }
  Eigen::Index size() const noexcept { return weights_.size(); }
  Eigen::Index dim() const noexcept { return weights_.dim(); }
  const std::optional<CoeffStats>& coeff_stats() const noexcept { return stats_; }

  /// Network output on one input vector.
  double forward(const Eigen::VectorXd& x) const;
  /// Outputs for a batch, one input per row of `inputs`.
  Eigen::VectorXd forward_batch(const Eigen::MatrixXd& inputs) const;

 private:
  WeightSet weights_;
  Eigen::VectorXd coeffs_;
  std::optional<CoeffStats> stats_;
};

struct TargetTag {};
struct CompressedTag {};
using TargetNetwork = ReluNetwork<TargetTag>;
using CompressedNetwork = ReluNetwork<CompressedTag>;

extern template class ReluNetwork<TargetTag>;
extern template class ReluNetwork<CompressedTag>;

// ---- sampling -------------------------------------------------------------

enum class WeightLaw { UniformSphere, NormalizedGaussian, ScaledRademacher };

struct ConstantCoeff {
  double value;
};
struct UniformCoeff {
  double lo;
  double hi;
};
/// x1 with probability p, x2 otherwise.
struct TwoPointCoeff {
  double p;
  double x1;
  double x2;
};
using CoeffLaw = std::variant<ConstantCoeff, UniformCoeff, TwoPointCoeff>;

/// Validates a coefficient law (nonzero mean, ordered bounds, p in [0, 1]) and
/// returns its mean and support bound. Throws DomainError.
CoeffStats coeff_law_stats(const CoeffLaw& law);

struct SamplerConfig {
  Eigen::Index n = 1;
  Eigen::Index dim = 1;
  WeightLaw weight_law = WeightLaw::UniformSphere;
  CoeffLaw coeff_law = ConstantCoeff{1.0};
  std::uint64_t seed = 0;
};

/// Draws N i.i.d. unit weights and N i.i.d. coefficients (independent of the
/// weights). Deterministic in `cfg.seed`.
TargetNetwork sample_target(const SamplerConfig& cfg);

/// Draws `count` unit vectors with the given law.
WeightSet sample_weights(Eigen::Index count, Eigen::Index dim, WeightLaw law, std::uint64_t seed);

WeightLaw parse_weight_law(const std::string& name);
std::string to_string(WeightLaw law);
/// Accepts "constant:MU", "uniform:LO:HI", "two-point:P:X1:X2".
CoeffLaw parse_coeff_law(const std::string& law_text);
std::string to_string(const CoeffLaw& law);

// ---- serialization --------------------------------------------------------

/// JSON document {"d", "n", "weights", "coeffs"} plus optional "mu_a" and
/// "coeff_bound" when coefficient statistics are known.
template <typename Tag>
std::string serialize(const ReluNetwork<Tag>& net);

/// Throws ParseError (malformed document, with field location), DimensionError
/// (inconsistent sizes) or InvariantError (non-unit weight).
template <typename Tag>
ReluNetwork<Tag> deserialize(const std::string& text);

TargetNetwork load_target(const std::string& path);
void save_network(const std::string& path, const std::string& document);

}  // namespace netcompress
