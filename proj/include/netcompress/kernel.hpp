#pragma once

// ReLU correlation kernel under standard Gaussian input.
//
// For unit vectors u, v with <u, v> = alpha and X ~ N(0, I):
//   E[relu(u'X) relu(v'X)] = (sqrt(1 - alpha^2) + alpha (pi - acos(alpha))) / (2 pi)
// This is the degree-1 arc-cosine kernel, scaled so that g(1) = E[relu(z)^2] = 1/2.

#include <numbers>

#include <Eigen/Dense>

#include "netcompress/weights.hpp"

namespace netcompress {

inline constexpr double kInnerProductSlack = 1e-12;
inline constexpr int kMaxTaylorOrder = 200;

/// Clamp an inner product to [-1, 1]. Values further than kInnerProductSlack
/// outside the interval raise DomainError.
double clamp_inner_product(double alpha);

/// Closed-form kernel g(alpha).
double relu_kernel(double alpha);

/// dg/dalpha = (pi - acos(alpha)) / (2 pi).
double relu_kernel_derivative(double alpha);

/// Coefficient of alpha^(2k) in the power series of g, k >= 1:
/// ((2k-3)!!)^2 / (2 pi (2k)!), with (-1)!! = 1.
double taylor_coefficient(int k);

/// Truncated power series 1/(2 pi) + alpha/4 + sum_{k=1..order} c_k alpha^(2k).
double relu_kernel_taylor(double alpha, int order);

/// Matrix of kernel values between two weight sets, entry (i, j) = g(<u_i, v_j>).
Eigen::MatrixXd gram(const WeightSet& rows, const WeightSet& cols);

/// Symmetric Gram matrix of one weight set. The diagonal is exactly g(1) = 1/2.
Eigen::MatrixXd gram(const WeightSet& set);

/// Gram matrix built from a precomputed matrix of inner products.
Eigen::MatrixXd gram_from_inner_products(const Eigen::MatrixXd& inner);

}  // namespace netcompress
