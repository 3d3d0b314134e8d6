#include "netcompress/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netcompress/errors.hpp"

namespace netcompress {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double clamp_inner_product(double alpha) {
  if (!(std::abs(alpha) <= 1.0 + kInnerProductSlack)) {
    throw DomainError("inner product " + std::to_string(alpha) + " outside [-1, 1]");
  }
  return std::clamp(alpha, -1.0, 1.0);
}

double relu_kernel(double alpha) {
  const double a = clamp_inner_product(alpha);
  return (std::sqrt(1.0 - a * a) + a * (kPi - std::acos(a))) / kTwoPi;
}

double relu_kernel_derivative(double alpha) {
  const double a = clamp_inner_product(alpha);
  return (kPi - std::acos(a)) / kTwoPi;
}

double taylor_coefficient(int k) {
  if (k < 1 || k > kMaxTaylorOrder) {
    throw DomainError("Taylor index " + std::to_string(k) + " outside [1, " +
                      std::to_string(kMaxTaylorOrder) + "]");
  }
  // c_1 = 1/(4 pi); c_{j+1} / c_j = (2j - 1)^2 / ((2j + 1)(2j + 2))
  double c = 1.0 / (4.0 * kPi);
  for (int j = 1; j < k; ++j) {
    const double odd = 2.0 * j - 1.0;
    c *= odd * odd / ((2.0 * j + 1.0) * (2.0 * j + 2.0));
  }
  return c;
}

double relu_kernel_taylor(double alpha, int order) {
  const double a = clamp_inner_product(alpha);
  if (order < 0 || order > kMaxTaylorOrder) {
    throw DomainError("Taylor order " + std::to_string(order) + " outside [0, " +
                      std::to_string(kMaxTaylorOrder) + "]");
  }
  double sum = 1.0 / kTwoPi + a / 4.0;
  const double a2 = a * a;
  double c = 1.0 / (4.0 * kPi);
  double power = a2;
  for (int k = 1; k <= order; ++k) {
    sum += c * power;
    const double odd = 2.0 * k - 1.0;
    c *= odd * odd / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
    power *= a2;
  }
  return sum;
}

Eigen::MatrixXd gram_from_inner_products(const Eigen::MatrixXd& inner) {
  return inner.unaryExpr([](double a) { return relu_kernel(a); });
}

Eigen::MatrixXd gram(const WeightSet& rows, const WeightSet& cols) {
  if (rows.dim() != cols.dim()) {
    throw DimensionError("gram: dimension " + std::to_string(rows.dim()) + " vs " +
                         std::to_string(cols.dim()));
  }
  return gram_from_inner_products(rows.matrix() * cols.matrix().transpose());
}

Eigen::MatrixXd gram(const WeightSet& set) {
  const Eigen::MatrixXd inner = set.matrix() * set.matrix().transpose();
  const Eigen::Index n = set.size();
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out(j, j) = 0.5;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      out(i, j) = relu_kernel(inner(i, j));
      out(j, i) = out(i, j);
    }
  }
  return out;
}

}  // namespace netcompress
