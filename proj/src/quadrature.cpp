#include "kgsig/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/legendre.hpp>
#include <fmt/format.h>

namespace kgsig {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument(fmt::format("gauss_legendre: need n >= 1, got {}", n));
  if (!(b > a)) throw std::invalid_argument("gauss_legendre: need b > a");

  // Boost returns the nonnegative zeros in ascending order.
  const std::vector<double> positive = boost::math::legendre_p_zeros<double>(n);
  std::vector<double> x;
  x.reserve(n);
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) {
    if (*it != 0.0) x.push_back(-*it);
  }
  for (double z : positive) x.push_back(z);
  if (static_cast<int>(x.size()) != n) {
    throw std::runtime_error("gauss_legendre: unexpected number of Legendre zeros");
  }

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    const double dp = boost::math::legendre_p_prime(n, x[i]);
    rule.nodes[i] = mid + half * x[i];
    rule.weights[i] = half * 2.0 / ((1.0 - x[i] * x[i]) * dp * dp);
  }
  return rule;
}

std::vector<double> composite_simpson_weights(int count, double step) {
  if (count < 2) throw std::invalid_argument("composite_simpson_weights: need at least 2 nodes");
  std::vector<double> w(count, 0.0);
  const int intervals = count - 1;
  if (intervals == 1) {
    w[0] = w[1] = 0.5 * step;
    return w;
  }
  // Simpson over the leading even block, 3/8 over a trailing block of three if odd.
  const int simpson_end = (intervals % 2 == 0) ? intervals : intervals - 3;
  for (int k = 0; k < simpson_end; k += 2) {
    w[k] += step / 3.0;
    w[k + 1] += 4.0 * step / 3.0;
    w[k + 2] += step / 3.0;
  }
  if (simpson_end != intervals) {
    const int k = simpson_end;
    w[k] += 3.0 * step / 8.0;
    w[k + 1] += 9.0 * step / 8.0;
    w[k + 2] += 9.0 * step / 8.0;
    w[k + 3] += 3.0 * step / 8.0;
  }
  return w;
}

std::vector<std::complex<double>> cumulative_simpson(std::span<const std::complex<double>> f, double step) {
  const std::size_t n = f.size();
  std::vector<std::complex<double>> out(n, 0.0);
  if (n < 2) return out;
  // Running Simpson sums at even nodes.
  std::vector<std::complex<double>> even(n, 0.0);
  for (std::size_t k = 2; k < n; k += 2) {
    even[k] = even[k - 2] + step / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
  }
  for (std::size_t k = 1; k < n; ++k) {
    if (k % 2 == 0) {
      out[k] = even[k];
    } else if (k == 1) {
      out[k] = 0.5 * step * (f[0] + f[1]);
    } else {
      out[k] = even[k - 3] + 3.0 * step / 8.0 * (f[k - 3] + 3.0 * f[k - 2] + 3.0 * f[k - 1] + f[k]);
    }
  }
  return out;
}

namespace {

template <typename T>
T pairwise_sum_impl(std::span<const T> v) {
  if (v.size() <= 16) {
    T s{};
    for (const T& x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum_impl(v.first(half)) + pairwise_sum_impl(v.subspan(half));
}

}  // namespace

std::complex<double> pairwise_sum(std::span<const std::complex<double>> values) {
  return pairwise_sum_impl(values);
}

double pairwise_sum(std::span<const double> values) { return pairwise_sum_impl(values); }

}  // namespace kgsig
