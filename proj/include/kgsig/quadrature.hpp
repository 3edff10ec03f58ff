#pragma once

#include <complex>
#include <span>
#include <vector>

namespace kgsig {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// Weights of the composite Simpson rule on `count` equispaced nodes. An odd
/// number of intervals closes with a 3/8 panel; two nodes fall back to the trapezoid.
std::vector<double> composite_simpson_weights(int count, double step);

/// Running integrals I_k = int_{x_0}^{x_k} f over equispaced samples: composite
/// Simpson up to even k, Simpson plus a trailing 3/8 panel at odd k >= 3, and a
/// trapezoid for k = 1. Uses no samples beyond x_k.
std::vector<std::complex<double>> cumulative_simpson(std::span<const std::complex<double>> values,
                                                     double step);

/// Pairwise (cascade) summation; fixed association order for reproducible reductions.
std::complex<double> pairwise_sum(std::span<const std::complex<double>> values);
double pairwise_sum(std::span<const double> values);

}  // namespace kgsig
